// measures.hpp — pure-state concurrence and negativity, mixed-state
// negativity, the two-qubit spin-flip concurrence and certified lower bounds
// for convex-roof values.

#pragma once

#include "cren/qlinalg.hpp"

#include <string_view>

namespace cren {

enum class MeasureKind { concurrence, negativity, cren, crenoa, coa };
enum class MeasureMethod { closed_form, trace_norm, optimizer };
/// How a reported number relates to the true value of the quantity.
enum class BoundKind { exact, upper_bound, lower_bound };

/// Pure-state functional that the convex roof is built over.
enum class PureMeasure { concurrence, negativity };

struct MeasureValue {
    MeasureKind kind;
    double value;
    PartySet side_a;
    MeasureMethod method;
    BoundKind bound = BoundKind::exact;
};

std::string_view to_string(MeasureKind kind);
std::string_view to_string(MeasureMethod method);
std::string_view to_string(BoundKind bound);

/// √(2(1 - tr ρ_A²)).
double concurrence_pure(const PureState& phi, const Bipartition& cut);

/// 2 Σ_{i<j} √(λ_i λ_j) over the Schmidt coefficients.
double negativity_pure(const PureState& phi, const Bipartition& cut);

/// The three equivalent routes to the pure-state negativity.
struct NegativityPaths {
    double schmidt;        // 2 Σ_{i<j} √(λ_i λ_j)
    double marginal_root;  // (tr √ρ_A)² - 1
    double trace_norm;     // ‖|φ⟩⟨φ|^{T_B}‖₁ - 1
    double max_deviation;
};
NegativityPaths negativity_paths(const PureState& phi, const Bipartition& cut);

/// ‖ρ^{T_B}‖₁ - 1, with rounding noise above -1e-10 clamped to zero.
double negativity_mixed(const DensityOperator& rho, const Bipartition& cut);

/// Closed-form two-qubit concurrence max(0, l1 - l2 - l3 - l4), l_i the
/// decreasing square roots of the eigenvalues of √ρ ρ̃ √ρ.
double wootters_concurrence_2q(const DensityOperator& rho);

/// Weighted pure-state value ‖v‖² E(v/‖v‖) for an unnormalized vector given as
/// its dim(A) × dim(B) coefficient matrix. Zero for the zero vector. A positive
/// `smoothing` ε replaces each square root √(x²) of the value by √(x² + ε²) − ε,
/// a differentiable surrogate that tends to the value as ε → 0.
double weighted_pure_measure(const Eigen::Ref<const Matrix>& coefficients, PureMeasure measure, double smoothing = 0.0);

/// The weighted value from e1 = Σσi², e2 = Σ_{i<j} σi²σj² and e3 = σ1²σ2²σ3²,
/// for Schmidt rank at most 3; smoothing as in weighted_pure_measure.
double measure_from_invariants(double e1, double e2, double e3, PureMeasure measure, double smoothing = 0.0);

/// Certified lower bound on the concurrence roof C(ρ): every member of any
/// decomposition lies in range(ρ), and the purity of its marginal is bounded
/// by the top eigenvalue of the swap form on Sym²(range ρ). Since N ≥ C for
/// pure states, the value also bounds the negativity roof from below.
double range_concurrence_lower_bound(const DensityOperator& rho, const Bipartition& cut);

/// max(range bound, √(2/(m(m-1))) N(ρ)) with m the smaller local dimension.
double concurrence_roof_lower_bound(const DensityOperator& rho, const Bipartition& cut);

}  // namespace cren
