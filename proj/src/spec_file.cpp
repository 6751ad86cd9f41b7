#include "cren/spec_file.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cren {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw SpecError("field '" + field + "': " + what);
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "not finite");
    return v;
}

Complex complex_entry(const json& j, const std::string& field) {
    if (j.is_number()) return {number(j, field), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
    fail(field, "expected a number or [re, im]");
}

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(key, "missing");
    return *it;
}

std::optional<DimensionProfile> read_profile(const json& doc) {
    auto it = doc.find("profile");
    if (it == doc.end()) return std::nullopt;
    if (!it->is_array() || it->empty()) fail("profile", "expected a nonempty list of local dimensions");
    std::vector<int> dims;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& d = (*it)[i];
        const std::string field = "profile[" + std::to_string(i) + "]";
        if (!d.is_number_integer() || d.get<long long>() < 2) fail(field, "local dimension must be an integer >= 2");
        if (d.get<long long>() > static_cast<long long>(kMaxTotalDim)) fail(field, "local dimension too large");
        dims.push_back(d.get<int>());
    }
    try {
        return DimensionProfile(std::move(dims));
    } catch (const std::logic_error& e) {
        fail("profile", e.what());
    }
}

void check_profile(const std::optional<DimensionProfile>& declared, const DimensionProfile& actual) {
    if (declared && *declared != actual) fail("profile", "does not match the state, expected " + actual.to_string());
}

void check_norm(double norm_sq, const char* field) {
    if (std::abs(norm_sq - 1.0) > kRenormalizeTol) {
        std::ostringstream os;
        os.precision(12);
        os << "not normalized (sum of squared magnitudes = " << norm_sq << ")";
        fail(field, os.str());
    }
}

PureState read_amplitudes(const json& doc) {
    const auto profile = read_profile(doc);
    if (!profile) fail("profile", "required for kind 'amplitudes'");
    const json& list = require(doc, "amplitudes");
    if (!list.is_array()) fail("amplitudes", "expected a list of [digits, re, im] triples");
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(profile->total()));
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string field = "amplitudes[" + std::to_string(k) + "]";
        const json& t = list[k];
        if (!t.is_array() || t.size() != 3 || !t[0].is_array()) fail(field, "expected [digits, re, im]");
        if (t[0].size() != profile->parties()) fail(field + "[0]", "expected " + std::to_string(profile->parties()) + " digits");
        std::vector<int> digits;
        for (std::size_t p = 0; p < t[0].size(); ++p) {
            const json& d = t[0][p];
            if (!d.is_number_integer() || d.get<long long>() < 0 || d.get<long long>() >= profile->dim(p))
                fail(field + "[0][" + std::to_string(p) + "]", "digit out of range for local dimension " + std::to_string(profile->dim(p)));
            digits.push_back(d.get<int>());
        }
        const std::size_t index = profile->index(digits);
        if (!seen.insert(index).second) fail(field, "duplicate basis index");
        amps(static_cast<Eigen::Index>(index)) = Complex(number(t[1], field + "[1]"), number(t[2], field + "[2]"));
    }
    check_norm(amps.squaredNorm(), "amplitudes");
    return PureState(*profile, std::move(amps));
}

WClassSpec read_w_table(const json& doc) {
    const json& a = require(doc, "a");
    if (!a.is_array() || a.size() < 2) fail("a", "expected one row per party, at least two parties");
    const std::size_t n = a.size();
    std::size_t levels = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::string field = "a[" + std::to_string(j) + "]";
        if (!a[j].is_array() || a[j].empty()) fail(field, "expected a nonempty list of level coefficients");
        if (j == 0) levels = a[j].size();
        if (a[j].size() != levels) fail(field, "every party needs the same number of levels");
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(levels));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < levels; ++i)
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                complex_entry(a[j][i], "a[" + std::to_string(j) + "][" + std::to_string(i) + "]");
    check_norm(m.squaredNorm(), "a");
    WClassSpec spec(std::move(m));
    check_profile(read_profile(doc), spec.profile());
    return spec;
}

double unit_interval(const json& doc, const char* key) {
    const double v = number(require(doc, key), key);
    if (v < 0.0 || v > 1.0) fail(key, "must lie in [0, 1]");
    return v;
}

StateInput build(const json& doc) {
    if (!doc.is_object()) throw SpecError("state spec: top level must be an object");
    const json& kind_field = require(doc, "kind");
    if (!kind_field.is_string()) fail("kind", "expected a string");
    StateInput in;
    in.kind = kind_field.get<std::string>();
    if (in.kind == "amplitudes") {
        in.pure = read_amplitudes(doc);
    } else if (in.kind == "w_class") {
        in.w = read_w_table(doc);
        in.pure = build_w_state(*in.w);
    } else if (in.kind == "pcs") {
        in.w = read_w_table(doc);
        in.pcs = PCSSpec(*in.w, unit_interval(doc, "p"), unit_interval(doc, "lambda"));
        in.mixed = build_pcs_density(*in.pcs);
    } else if (in.kind == "ou") {
        in.pure = ou_state();
        check_profile(read_profile(doc), in.pure->profile());
    } else if (in.kind == "kim_sanders") {
        in.pure = kim_sanders_state();
        check_profile(read_profile(doc), in.pure->profile());
    } else if (in.kind == "max_entangled") {
        const json& d = require(doc, "d");
        if (!d.is_number_integer() || d.get<long long>() < 2 || d.get<long long>() > 64) fail("d", "expected an integer in [2, 64]");
        in.pure = maximally_entangled(d.get<int>());
        check_profile(read_profile(doc), in.pure->profile());
    } else {
        fail("kind", "unknown kind '" + in.kind + "' (amplitudes, w_class, pcs, ou, kim_sanders, max_entangled)");
    }
    return in;
}

}  // namespace

StateInput parse_state_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character.
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw SpecError("state spec: syntax error at line " + std::to_string(line) + ", column " + std::to_string(column));
    }
    return build(doc);
}

StateInput load_state_spec(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SpecError("cannot open state spec '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    try {
        return parse_state_spec(buf.str());
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

}  // namespace cren
