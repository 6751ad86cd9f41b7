#include "cren/monogamy.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>

using namespace cren;
using namespace cren::testing;

namespace {

double certified_sum(const AuditReport& r) {
    double s = 0.0;
    for (const auto& t : r.terms) s += t.certified_sq.value();
    return s;
}

}  // namespace

TEST_CASE("Ou state audits") {
    const PureState ou = ou_state();
    const AuditReport cren = cren_audit(ou, 0);
    CHECK(std::abs(cren.lhs_sq - 4.0) <= 1e-9);
    REQUIRE(cren.terms.size() == 2);
    for (const auto& t : cren.terms) {
        CHECK(std::abs(t.value_sq - 1.0) <= 1e-6);
        CHECK(t.bound == BoundKind::upper_bound);
    }
    CHECK(std::abs(cren.residual - 2.0) <= 1e-6);
    CHECK(cren.verdict == Verdict::holds);

    const AuditReport ckw = ckw_audit(ou, 0);
    CHECK(std::abs(ckw.lhs_sq - 4.0 / 3.0) <= 1e-9);
    CHECK(std::abs(ckw.rhs_sq_sum() - 2.0) <= 1e-3);
    CHECK(ckw.verdict == Verdict::certified_violation);
    CHECK(certified_sum(ckw) > ckw.lhs_sq + kTolSat);

    const AuditReport neg = negativity_audit(ou, 0);
    CHECK(neg.residual >= 2.0 - 1e-9);
    CHECK(neg.verdict == Verdict::holds);
}

TEST_CASE("Kim-Sanders state audits") {
    const PureState ks = kim_sanders_state();
    const AuditReport cren = cren_audit(ks, 0);
    CHECK(std::abs(cren.lhs_sq - 4.0) <= 1e-9);
    for (const auto& t : cren.terms) CHECK(std::abs(t.value_sq - 8.0 / 9.0) <= 1e-3);
    CHECK(std::abs(cren.residual - (4.0 - 16.0 / 9.0)) <= 1e-6);
    CHECK(cren.verdict == Verdict::holds);

    const AuditReport ckw = ckw_audit(ks, 0);
    CHECK(std::abs(ckw.lhs_sq - 12.0 / 9.0) <= 1e-9);
    CHECK(ckw.residual < 0.0);
    CHECK(ckw.verdict == Verdict::certified_violation);
    CHECK(certified_sum(ckw) > ckw.lhs_sq + kTolSat);
}

TEST_CASE("multi-qubit audits use the exact pair oracle") {
    std::mt19937_64 rng(40);
    for (std::size_t n : {3u, 4u})
        for (int trial = 0; trial < 10; ++trial) {
            const PureState psi = random_state(DimensionProfile(std::vector<int>(n, 2)), rng);
            const std::size_t focus = static_cast<std::size_t>(trial) % n;
            const AuditReport cren = cren_audit(psi, focus);
            const AuditReport ckw = ckw_audit(psi, focus);
            const AuditReport neg = negativity_audit(psi, focus);
            CHECK(cren.terms.size() == n - 1);
            for (const auto& t : cren.terms) {
                CHECK(t.bound == BoundKind::exact);
                CHECK(t.partner != focus);
            }
            CHECK(cren.residual >= -1e-6);
            CHECK(ckw.residual >= -1e-6);
            CHECK(neg.residual >= -1e-9);
            CHECK(cren.verdict != Verdict::candidate_violation);
            CHECK(cren.verdict != Verdict::certified_violation);
        }
}

TEST_CASE("GHZ pair terms vanish") {
    const AuditReport r = cren_audit(ghz_state(3), 0);
    for (const auto& t : r.terms) CHECK(t.value_sq <= 1e-12);
    CHECK(std::abs(r.residual - r.lhs_sq) <= 1e-12);
    CHECK(std::abs(r.lhs_sq - 1.0) <= 1e-12);
    CHECK(r.verdict == Verdict::holds);

    const AuditReport dual = dual_audit(ghz_state(3), 0, DualMeasure::coa);
    CHECK(dual.lhs_sq == doctest::Approx(1.0));
    for (const auto& t : dual.terms) {
        CHECK(t.bound == BoundKind::lower_bound);
        CHECK(!t.certified_sq.has_value());
        CHECK(std::abs(t.value_sq - 1.0) <= 1e-6);
    }
    CHECK(dual.verdict == Verdict::holds);
}

TEST_CASE("dual audits") {
    const PureState w = build_w_state(WClassSpec::symmetric_qubit(3));
    for (DualMeasure m : {DualMeasure::coa, DualMeasure::crenoa}) {
        const AuditReport r = dual_audit(w, 0, m);
        CHECK(r.verdict != Verdict::candidate_violation);
        CHECK(r.residual <= kTolSat);
    }
    const DimensionProfile p({2, 2, 2});
    const PureState product(p, basis(8, 5));
    const AuditReport r = dual_audit(product, 0, DualMeasure::coa);
    CHECK(r.lhs_sq == doctest::Approx(0.0));
    CHECK((r.verdict == Verdict::holds || r.verdict == Verdict::saturated));
    CHECK(negativity_audit(product, 1).verdict == Verdict::saturated);
}

TEST_CASE("audit argument checks") {
    CHECK_THROWS_AS(cren_audit(ou_state(), 3), std::domain_error);
    CHECK_THROWS_AS(ckw_audit(PureState(DimensionProfile({2}), basis(2, 0)), 0), std::domain_error);
    CHECK(to_string(Verdict::certified_violation) == "certified_violation");
    CHECK(to_string(Inequality::dual_crenoa) == "dual_crenoa");
}

TEST_CASE("closed-form W-class values") {
    const WClassSpec sym = WClassSpec::symmetric_qubit(3);
    const AnalyticWValues full = analytic_w_values(PCSSpec(sym, 1.0, 0.0));
    CHECK(full.global_cren == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-14));
    for (double v : full.pair_cren) CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(full.residual()) <= 1e-12);

    for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
        const AnalyticWValues half = analytic_w_values(PCSSpec(sym, 0.5, lambda));
        CHECK(half.global_cren == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
        for (double v : half.pair_cren) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const WClassSpec w = random_w(3 + static_cast<std::size_t>(trial % 3), 2 + trial % 2, rng);
        CHECK(std::abs(analytic_w_values(PCSSpec(w, 0.1 * (trial + 1) * 0.9, 0.5)).residual()) <= 1e-12);
    }
}

TEST_CASE("W-class audit with flatness cross-check") {
    std::mt19937_64 rng(42);
    const WClassSpec w = random_w(3, 3, rng);
    const AnalyticWAudit a = analytic_w_audit(PCSSpec(w, 0.6, 0.25));
    CHECK(a.consistent);
    CHECK(a.report.verdict == Verdict::saturated);
    CHECK(a.report.inequality == Inequality::analytic_w);
    CHECK(a.global_flatness.max_abs_dev <= 1e-9);

    // the pair values agree with the flat pair landscapes
    const ScriptA sa = script_a(w);
    for (std::size_t i = 1; i < 3; ++i)
        CHECK(std::abs(a.values.pair_cren[i - 1] - 2.0 * 0.6 * std::sqrt((1.0 - sa.global) * (sa.global - sa.pair[i]))) < 1e-15);
}

TEST_CASE("W-class audit is invariant under coarse graining") {
    const WClassSpec w = WClassSpec::symmetric_qubit(4);
    for (std::size_t blocks : {2u, 3u})
        for (const auto& b : set_partitions(4, blocks)) {
            const AnalyticWAudit a = analytic_w_audit(PCSSpec(w, 0.7, 0.5), PartitionSpec(b, 4));
            CHECK(std::abs(a.report.residual) <= 1e-12);
            CHECK(a.values.pair_cren.size() == blocks - 1);
            CHECK(a.consistent);
        }
}

TEST_CASE("random pure states") {
    std::mt19937_64 a(5), b(5);
    const DimensionProfile p({3, 2, 2});
    const PureState x = random_pure_state(p, a), y = random_pure_state(p, b);
    CHECK(x.amplitudes() == y.amplitudes());
    CHECK(x.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hunt") {
    CHECK(hunt(DimensionProfile({3, 2, 2}), 0, 0).empty());
    AuditOptions o;
    o.opt.starts = 2;
    CHECK(hunt(DimensionProfile({2, 2, 2}), 40, 3, o).empty());
    CHECK(hunt(DimensionProfile({2, 2, 2, 2}), 20, 4, o, 3).empty());
    CHECK_THROWS_AS(hunt(DimensionProfile({4}), 1, 0), std::domain_error);
}
