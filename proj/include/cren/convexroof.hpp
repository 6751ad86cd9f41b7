// convexroof.hpp — pure-state decompositions of a density operator and the
// min/max of their average entanglement over the unitary freedom.
//
// Every size-r decomposition of ρ is obtained from an r × r unitary U acting
// on the spectral root vectors √e_j v_j (zero-padded to r):
//     |φ̃_k⟩ = Σ_j U_kj |ψ̃_j⟩,  p_k = ⟨φ̃_k|φ̃_k⟩.
// The optimizer walks U by two-level rotations, one coordinate at a time.
// Minimization first descends a sequence of smoothed objectives (ε from 1e-1
// down to 1e-6) so that members stuck at product states can move, then polishes
// the exact objective. All stages share the max_sweeps budget.

#pragma once

#include "cren/measures.hpp"
#include "cren/qlinalg.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace cren {

struct RootSet {
    DimensionProfile profile;
    std::vector<Vector> roots;  // √e_i v_i for every eigenvalue above kTolRank

    std::size_t rank() const { return roots.size(); }
};

RootSet root_set(const DensityOperator& rho);

struct Decomposition {
    DimensionProfile profile;
    std::vector<double> weights;
    std::vector<Vector> states;  // normalized

    std::size_t size() const { return weights.size(); }
    Matrix reconstruct() const;
};

/// Members with weight below this are dropped.
inline constexpr double kZeroWeight = 1e-14;

/// Throws std::domain_error if U is not unitary within 1e-10 or smaller than the rank.
Decomposition decomposition_from_unitary(const RootSet& roots, const Matrix& unitary);

double average_measure(const Decomposition& dec, const Bipartition& cut, PureMeasure measure);
/// Σ_k p_k N(|φ_k⟩).
double average_negativity(const Decomposition& dec, const Bipartition& cut);

enum class Direction { min, max };

struct OptConfig {
    std::optional<std::size_t> size;  // decomposition cardinality; default min(rank², 16), at least rank
    int starts = 8;
    int max_sweeps = 200;
    double tol_rel = 1e-10;
    std::uint64_t seed = 0;
    PureMeasure measure = PureMeasure::negativity;
};

std::size_t default_decomposition_size(std::size_t rank);

struct OptResult {
    double value = 0.0;
    Decomposition decomposition;
    Matrix unitary;
    Direction direction = Direction::min;
    std::vector<double> trace;  // exact objective after each polishing sweep of the winning start
    BoundKind bound_kind = BoundKind::upper_bound;
    bool converged = false;
    int best_start = 0;
};

/// Convex roof (min) or its assistance dual (max) of cfg.measure over all
/// decompositions of size cfg.size. Start 0 begins at the spectral
/// decomposition, later starts at seeded random unitaries. Deterministic for a
/// fixed seed; ties go to the lowest start index.
OptResult optimize(const DensityOperator& rho, const Bipartition& cut, Direction direction, const OptConfig& cfg = {});

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
Matrix random_unitary(std::size_t n, std::mt19937_64& rng);

struct FlatnessStats {
    double mean = 0.0;
    double max_abs_dev = 0.0;
    std::size_t samples = 0;
};

/// Average measure over `samples` random decompositions.
FlatnessStats flatness_scan(const DensityOperator& rho, const Bipartition& cut, std::size_t samples, std::uint64_t seed,
                            PureMeasure measure = PureMeasure::negativity, std::optional<std::size_t> size = std::nullopt);

}  // namespace cren
