#include "cren/spec_file.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace cren;
using namespace cren::testing;

namespace {

std::string error_of(std::string_view text) {
    try {
        parse_state_spec(text);
    } catch (const SpecError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("amplitude documents") {
    const StateInput in = parse_state_spec(R"({
      "kind": "amplitudes",
      "profile": [2, 2],
      "amplitudes": [[[0, 0], 0.70710678118654752, 0], [[1, 1], 0, 0.70710678118654752]]
    })");
    REQUIRE(in.is_pure());
    CHECK(in.profile() == DimensionProfile({2, 2}));
    CHECK(std::abs(in.pure->amplitudes()(3) - Complex(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("W-class and partially coherent documents") {
    const StateInput w = parse_state_spec(R"({"kind": "w_class", "profile": [2, 2, 2],
      "a": [[0.57735026918962576], [0.57735026918962576], [0.57735026918962576]]})");
    REQUIRE(w.w.has_value());
    CHECK((w.pure->amplitudes() - build_w_state(WClassSpec::symmetric_qubit(3)).amplitudes()).norm() < 1e-15);

    const StateInput pcs = parse_state_spec(R"({"kind": "pcs", "p": 0.5, "lambda": 0.3,
      "a": [[0.5, [0, 0.5]], [0.5, 0], [0, [0.5, 0]]]})");
    REQUIRE(!pcs.is_pure());
    CHECK(pcs.profile() == DimensionProfile({3, 3, 3}));
    CHECK(pcs.w->coefficient(0, 2) == Complex(0.0, 0.5));
    CHECK(pcs.pcs->lambda == 0.3);
    CHECK((pcs.mixed->matrix() - build_pcs_density(*pcs.pcs).matrix()).norm() < 1e-15);
}

TEST_CASE("named kinds") {
    CHECK(parse_state_spec(R"({"kind": "ou"})").profile() == DimensionProfile({3, 3, 3}));
    CHECK(parse_state_spec(R"({"kind": "kim_sanders", "profile": [3, 2, 2]})").profile() == DimensionProfile({3, 2, 2}));
    CHECK(parse_state_spec(R"({"kind": "max_entangled", "d": 4})").profile() == DimensionProfile({4, 4}));
}

TEST_CASE("diagnostics name the field") {
    CHECK(contains(error_of(R"({"kind": "amplitudes", "profile": [2, 2], "amplitudes": [[[0, 0], 0.7, 0]]})"), "field 'amplitudes'"));
    CHECK(contains(error_of(R"({"kind": "amplitudes", "profile": [2, 2], "amplitudes": [[[0, 2], 1, 0]]})"), "amplitudes[0][0][1]"));
    CHECK(contains(error_of(R"({"kind": "amplitudes", "profile": [2, 2], "amplitudes": [[[0, 0], 1, 0], [[0, 0], 0, 0]]})"), "duplicate"));
    CHECK(contains(error_of(R"({"kind": "w_class", "a": [[0.5], [0.5]]})"), "field 'a'"));
    CHECK(contains(error_of(R"({"kind": "w_class", "a": [[0.5, 0.5], [0.7]]})"), "a[1]"));
    CHECK(contains(error_of(R"({"kind": "pcs", "a": [[0.6], [0.8]], "p": 1.2, "lambda": 0})"), "field 'p'"));
    CHECK(contains(error_of(R"({"kind": "pcs", "a": [[0.6], [0.8]], "p": 0.2})"), "field 'lambda'"));
    CHECK(contains(error_of(R"({"kind": "ou", "profile": [2, 2]})"), "field 'profile'"));
    CHECK(contains(error_of(R"({"kind": "bogus"})"), "field 'kind'"));
    CHECK(contains(error_of(R"({"profile": [2]})"), "field 'kind'"));
    CHECK(contains(error_of(R"({"kind": "amplitudes", "profile": [1, 2], "amplitudes": []})"), "profile[0]"));
}

TEST_CASE("small normalization drift is accepted") {
    const StateInput in = parse_state_spec(R"({"kind": "amplitudes", "profile": [2], "amplitudes": [[[0], 1.000000001, 0]]})");
    CHECK(in.pure->amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("syntax errors report line and column") {
    const std::string e = error_of("{\n  \"kind\": \"ou\",\n  \"profile\": [3, 3 3]\n}");
    CHECK(contains(e, "line 3"));
    CHECK(contains(e, "column 20"));
}

TEST_CASE("files") {
    const auto path = std::filesystem::temp_directory_path() / "cren_test_spec.json";
    {
        std::ofstream f(path);
        f << R"({"kind": "max_entangled", "d": 3})";
    }
    CHECK(load_state_spec(path).profile() == DimensionProfile({3, 3}));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_state_spec(path), SpecError);
}
