#include "cren/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace cren {

namespace {

// Pair marginal of the focus with `partner`, plus the cut isolating the focus.
struct PairMarginal {
    DensityOperator rho;
    Bipartition cut;
    bool qubits;
};

PairMarginal pair_marginal(const PureState& psi, std::size_t focus, std::size_t partner) {
    DensityOperator rho = partial_trace(psi, PartySet{focus, partner});
    Bipartition cut({focus < partner ? std::size_t{0} : std::size_t{1}}, 2);
    const bool qubits = psi.profile().dim(focus) == 2 && psi.profile().dim(partner) == 2;
    return {std::move(rho), std::move(cut), qubits};
}

void check_focus(const PureState& psi, std::size_t focus, const char* what) {
    if (psi.profile().parties() < 2) throw std::domain_error(std::string(what) + ": at least two parties required");
    if (focus >= psi.profile().parties()) throw std::domain_error(std::string(what) + ": focus party out of range");
}

// Verdict for lhs ≥ Σ terms.
Verdict lower_side_verdict(double residual, std::optional<double> certified_residual, double tol) {
    if (std::abs(residual) <= tol) return Verdict::saturated;
    if (residual > tol) return Verdict::holds;
    if (certified_residual && *certified_residual < -tol) return Verdict::certified_violation;
    return Verdict::candidate_violation;
}

void finish_lower_side(AuditReport& report, double tol) {
    report.residual = report.lhs_sq - report.rhs_sq_sum();
    std::optional<double> certified = report.lhs_sq;
    for (const auto& t : report.terms) {
        if (!t.certified_sq) {
            certified.reset();
            break;
        }
        *certified -= *t.certified_sq;
    }
    report.verdict = lower_side_verdict(report.residual, certified, tol);
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::saturated: return "saturated";
        case Verdict::candidate_violation: return "candidate_violation";
        case Verdict::certified_violation: return "certified_violation";
    }
    return "unknown";
}

std::string_view to_string(Inequality i) {
    switch (i) {
        case Inequality::ckw: return "ckw";
        case Inequality::cren: return "cren";
        case Inequality::negativity: return "negativity";
        case Inequality::dual_coa: return "dual_coa";
        case Inequality::dual_crenoa: return "dual_crenoa";
        case Inequality::analytic_w: return "analytic_w";
    }
    return "unknown";
}

double AuditReport::rhs_sq_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.value_sq;
    return s;
}

AuditReport cren_audit(const PureState& psi, std::size_t focus, const AuditOptions& options) {
    check_focus(psi, focus, "cren_audit");
    const std::size_t n = psi.profile().parties();
    AuditReport report;
    report.state_id = options.state_id;
    report.focus = focus;
    report.inequality = Inequality::cren;
    const double lhs = negativity_pure(psi, Bipartition::single(focus, n));
    report.lhs_sq = lhs * lhs;

    OptConfig cfg = options.opt;
    cfg.measure = PureMeasure::negativity;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == focus) continue;
        const PairMarginal pm = pair_marginal(psi, focus, j);
        PairTerm term;
        term.partner = j;
        if (pm.qubits) {
            const double c = wootters_concurrence_2q(pm.rho);
            term.value_sq = c * c;
            term.bound = BoundKind::exact;
            term.method = "closed_form";
            term.certified_sq = term.value_sq;
        } else {
            const double v = optimize(pm.rho, pm.cut, Direction::min, cfg).value;
            const double ppt = negativity_mixed(pm.rho, pm.cut);
            term.value_sq = v * v;
            term.bound = BoundKind::upper_bound;
            term.method = "optimizer";
            term.certified_sq = ppt * ppt;
        }
        report.terms.push_back(std::move(term));
    }
    finish_lower_side(report, options.tol_sat);
    return report;
}

AuditReport ckw_audit(const PureState& psi, std::size_t focus, const AuditOptions& options) {
    check_focus(psi, focus, "ckw_audit");
    const std::size_t n = psi.profile().parties();
    AuditReport report;
    report.state_id = options.state_id;
    report.focus = focus;
    report.inequality = Inequality::ckw;
    const double lhs = concurrence_pure(psi, Bipartition::single(focus, n));
    report.lhs_sq = lhs * lhs;

    OptConfig cfg = options.opt;
    cfg.measure = PureMeasure::concurrence;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == focus) continue;
        const PairMarginal pm = pair_marginal(psi, focus, j);
        PairTerm term;
        term.partner = j;
        if (pm.qubits) {
            const double c = wootters_concurrence_2q(pm.rho);
            term.value_sq = c * c;
            term.bound = BoundKind::exact;
            term.method = "closed_form";
            term.certified_sq = term.value_sq;
        } else {
            const double v = optimize(pm.rho, pm.cut, Direction::min, cfg).value;
            const double lb = concurrence_roof_lower_bound(pm.rho, pm.cut);
            term.value_sq = v * v;
            term.bound = BoundKind::upper_bound;
            term.method = "optimizer";
            term.certified_sq = lb * lb;
        }
        report.terms.push_back(std::move(term));
    }
    finish_lower_side(report, options.tol_sat);
    return report;
}

AuditReport dual_audit(const PureState& psi, std::size_t focus, DualMeasure measure, const AuditOptions& options) {
    check_focus(psi, focus, "dual_audit");
    const std::size_t n = psi.profile().parties();
    AuditReport report;
    report.state_id = options.state_id;
    report.focus = focus;
    const Bipartition global = Bipartition::single(focus, n);
    OptConfig cfg = options.opt;
    if (measure == DualMeasure::coa) {
        report.inequality = Inequality::dual_coa;
        cfg.measure = PureMeasure::concurrence;
        const double lhs = concurrence_pure(psi, global);
        report.lhs_sq = lhs * lhs;
    } else {
        report.inequality = Inequality::dual_crenoa;
        cfg.measure = PureMeasure::negativity;
        const double lhs = negativity_pure(psi, global);
        report.lhs_sq = lhs * lhs;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j == focus) continue;
        const PairMarginal pm = pair_marginal(psi, focus, j);
        const double v = optimize(pm.rho, pm.cut, Direction::max, cfg).value;
        PairTerm term;
        term.partner = j;
        term.value_sq = v * v;
        term.bound = BoundKind::lower_bound;
        term.method = "optimizer";
        report.terms.push_back(std::move(term));
    }
    report.residual = report.lhs_sq - report.rhs_sq_sum();
    if (std::abs(report.residual) <= options.tol_sat) {
        report.verdict = Verdict::saturated;
    } else if (report.residual < 0.0) {
        report.verdict = Verdict::holds;
    } else {
        report.verdict = Verdict::candidate_violation;
    }
    return report;
}

AuditReport negativity_audit(const PureState& psi, std::size_t focus, const AuditOptions& options) {
    check_focus(psi, focus, "negativity_audit");
    const std::size_t n = psi.profile().parties();
    AuditReport report;
    report.state_id = options.state_id;
    report.focus = focus;
    report.inequality = Inequality::negativity;
    const double lhs = negativity_pure(psi, Bipartition::single(focus, n));
    report.lhs_sq = lhs * lhs;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == focus) continue;
        const PairMarginal pm = pair_marginal(psi, focus, j);
        const double v = negativity_mixed(pm.rho, pm.cut);
        PairTerm term;
        term.partner = j;
        term.value_sq = v * v;
        term.bound = BoundKind::exact;
        term.method = "trace_norm";
        term.certified_sq = term.value_sq;
        report.terms.push_back(std::move(term));
    }
    finish_lower_side(report, options.tol_sat);
    return report;
}

// --------------------------- W-class family ---------------------------------

double AnalyticWValues::residual() const {
    double s = global_cren * global_cren;
    for (double v : pair_cren) s -= v * v;
    return s;
}

AnalyticWValues analytic_w_values(const PCSSpec& spec) {
    const ScriptA a = script_a(spec.w, 0);
    AnalyticWValues out;
    out.global_cren = 2.0 * spec.p * std::sqrt(std::max(0.0, a.global * (1.0 - a.global)));
    for (std::size_t i = 1; i < spec.w.parties(); ++i)
        out.pair_cren.push_back(2.0 * spec.p * std::sqrt(std::max(0.0, (1.0 - a.global) * (a.global - a.pair[i]))));
    return out;
}

AnalyticWAudit analytic_w_audit(const PCSSpec& spec, const std::optional<PartitionSpec>& partition,
                                std::size_t flatness_samples, std::uint64_t seed, double tol_sat) {
    const PartitionSpec part = partition.value_or(PartitionSpec::singletons(spec.w.parties()));
    if (part.size() < 2) throw std::domain_error("analytic_w_audit: partition needs at least two blocks");
    const PCSSpec coarse(coarse_grain(spec.w, part), spec.p, spec.lambda);

    AnalyticWAudit out;
    out.values = analytic_w_values(coarse);

    AuditReport& report = out.report;
    report.state_id = "pcs";
    report.focus = 0;
    report.inequality = Inequality::analytic_w;
    report.lhs_sq = out.values.global_cren * out.values.global_cren;
    for (std::size_t s = 0; s < out.values.pair_cren.size(); ++s) {
        PairTerm term;
        term.partner = s + 1;
        term.value_sq = out.values.pair_cren[s] * out.values.pair_cren[s];
        term.bound = BoundKind::exact;
        term.method = "analytic";
        term.certified_sq = term.value_sq;
        report.terms.push_back(std::move(term));
    }
    finish_lower_side(report, tol_sat);

    const DensityOperator rho = build_pcs_density(spec);
    const Bipartition cut(part.blocks()[0], spec.w.parties());
    out.global_flatness = flatness_scan(rho, cut, flatness_samples, seed);
    out.consistent = out.global_flatness.max_abs_dev <= 1e-8 && std::abs(out.global_flatness.mean - out.values.global_cren) <= 1e-8;
    return out;
}

// --------------------------- random states / hunt ---------------------------

PureState random_pure_state(const DimensionProfile& profile, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(profile.total()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    v.normalize();
    return PureState(profile, std::move(v));
}

std::vector<AuditReport> hunt(const DimensionProfile& profile, std::size_t trials, std::uint64_t seed,
                              const AuditOptions& options, std::size_t threads) {
    if (profile.parties() < 2) throw std::domain_error("hunt: at least two parties required");
    std::mt19937_64 rng(seed);
    std::vector<PureState> states;
    states.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) states.push_back(random_pure_state(profile, rng));

    std::vector<std::optional<AuditReport>> slots(trials);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t t = begin; t < trials; t += stride) {
            AuditOptions o = options;
            char id[32];
            std::snprintf(id, sizeof id, "hunt-%06zu", t);
            o.state_id = id;
            slots[t] = cren_audit(states[t], 0, o);
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, trials));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    }

    std::vector<AuditReport> out;
    for (auto& s : slots)
        if (s && (s->verdict == Verdict::candidate_violation || s->verdict == Verdict::certified_violation)) out.push_back(std::move(*s));
    std::sort(out.begin(), out.end(), [](const AuditReport& a, const AuditReport& b) { return a.state_id < b.state_id; });
    return out;
}

}  // namespace cren
