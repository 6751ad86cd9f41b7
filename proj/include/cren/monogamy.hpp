// monogamy.hpp — audits of monogamy inequalities for one focus party against
// every other party, the analytic W-class saturation values, and a seeded
// hunter for CREN monogamy violations.

#pragma once

#include "cren/convexroof.hpp"
#include "cren/measures.hpp"
#include "cren/states.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cren {

/// Verdict boundary: |residual| ≤ tol_sat counts as saturation.
inline constexpr double kTolSat = 1e-7;

enum class Verdict { holds, saturated, candidate_violation, certified_violation };
enum class Inequality { ckw, cren, negativity, dual_coa, dual_crenoa, analytic_w };

std::string_view to_string(Verdict v);
std::string_view to_string(Inequality i);

/// Squared entanglement between the focus party and `partner`.
struct PairTerm {
    std::size_t partner = 0;
    double value_sq = 0.0;  // the value entering the residual
    BoundKind bound = BoundKind::exact;
    std::string method;
    /// Certified bound on the opposite side of value_sq (a lower bound for a
    /// roof minimum). Equals value_sq for exact terms; empty when none exists.
    std::optional<double> certified_sq;
};

struct AuditReport {
    std::string state_id;
    std::size_t focus = 0;
    Inequality inequality = Inequality::cren;
    double lhs_sq = 0.0;
    std::vector<PairTerm> terms;
    double residual = 0.0;  // lhs_sq - Σ value_sq
    Verdict verdict = Verdict::holds;

    double rhs_sq_sum() const;
};

struct AuditOptions {
    OptConfig opt;
    double tol_sat = kTolSat;
    std::string state_id = "state";
};

/// N(ψ; focus|rest)² ≥ Σ_i N_c(ρ_{focus,i})². Qubit pairs use the exact
/// two-qubit closed form; other pairs use the optimizer (an upper bound), with
/// the PPT negativity as the certified lower bound.
AuditReport cren_audit(const PureState& psi, std::size_t focus, const AuditOptions& options = {});

/// C(ψ; focus|rest)² ≥ Σ_i C(ρ_{focus,i})². Non-qubit pairs are bounded from
/// below by concurrence_roof_lower_bound.
AuditReport ckw_audit(const PureState& psi, std::size_t focus, const AuditOptions& options = {});

enum class DualMeasure { coa, crenoa };

/// lhs² ≤ Σ_i (assistance value)², pair terms from the maximizing optimizer.
/// Those are lower bounds of the true maxima, so `holds` is conservative and a
/// failure is only ever a candidate.
AuditReport dual_audit(const PureState& psi, std::size_t focus, DualMeasure measure, const AuditOptions& options = {});

/// N(ψ; focus|rest)² ≥ Σ_i N(ρ_{focus,i})² with plain PPT negativities.
AuditReport negativity_audit(const PureState& psi, std::size_t focus, const AuditOptions& options = {});

/// Closed-form CREN values of the partially coherent W-class family.
struct AnalyticWValues {
    double global_cren = 0.0;         // 2p√(𝒜(1-𝒜))
    std::vector<double> pair_cren;    // 2p√((1-𝒜)(𝒜-𝒜_i)) for every non-focus party (or block)
    double residual() const;
};

AnalyticWValues analytic_w_values(const PCSSpec& spec);

struct AnalyticWAudit {
    AnalyticWValues values;
    AuditReport report;
    FlatnessStats global_flatness;   // sampled on the full (uncoarsened) state, focus block vs rest
    bool consistent = false;         // flatness mean and spread agree with global_cren within 1e-8
};

/// Values after coarse-graining by `partition` (singletons by default), with a
/// flatness scan of the global cut as cross-check.
AnalyticWAudit analytic_w_audit(const PCSSpec& spec, const std::optional<PartitionSpec>& partition = std::nullopt,
                                std::size_t flatness_samples = 16, std::uint64_t seed = 0, double tol_sat = kTolSat);

/// Gaussian amplitudes, normalized.
PureState random_pure_state(const DimensionProfile& profile, std::mt19937_64& rng);

/// cren_audit on `trials` seeded random states (focus 0); returns only the
/// candidate and certified violations, sorted by state id.
/// Audits may run on up to `threads` workers; the output does not depend on it.
std::vector<AuditReport> hunt(const DimensionProfile& profile, std::size_t trials, std::uint64_t seed,
                              const AuditOptions& options = {}, std::size_t threads = 1);

}  // namespace cren
