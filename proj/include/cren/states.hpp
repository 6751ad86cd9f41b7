// states.hpp — state families: generalized W-class states, their partially
// coherent superposition with the vacuum, phase damping, the two known CKW
// counterexamples, maximally entangled states and partition coarse-graining.

#pragma once

#include "cren/qlinalg.hpp"

#include <cstddef>
#include <vector>

namespace cren {

/// Coefficients a_{ji} of |W⟩ = Σ_j Σ_{i=1}^{d-1} a_{ji} |0..i_j..0⟩.
/// Stored as an n × (d-1) matrix; column i-1 holds level i.
class WClassSpec {
  public:
    /// Renormalizes within kRenormalizeTol, throws std::domain_error beyond.
    explicit WClassSpec(Matrix coefficients);

    /// Every party carries amplitude 1/√n on level 1.
    static WClassSpec symmetric_qubit(std::size_t n);

    std::size_t parties() const { return static_cast<std::size_t>(a_.rows()); }
    int local_dim() const { return static_cast<int>(a_.cols()) + 1; }
    /// a_{party, level} with level in 1..d-1.
    Complex coefficient(std::size_t party, int level) const { return a_(static_cast<Eigen::Index>(party), level - 1); }
    const Matrix& coefficients() const { return a_; }
    /// Σ_i |a_{party,i}|², the excitation weight carried by one party.
    double party_weight(std::size_t party) const { return a_.row(static_cast<Eigen::Index>(party)).squaredNorm(); }
    DimensionProfile profile() const;

  private:
    Matrix a_;
};

/// ρ = p|W⟩⟨W| + (1-p)|vac⟩⟨vac| + λ√(p(1-p))(|W⟩⟨vac| + h.c.).
struct PCSSpec {
    PCSSpec(WClassSpec w, double p, double lambda);

    WClassSpec w;
    double p;
    double lambda;
};

/// 𝒜 = 1 - Σ_j |a_{focus,j}|² and 𝒜_i = 𝒜 - Σ_j |a_{ij}|² for every other party i.
struct ScriptA {
    double global = 0.0;
    std::vector<double> pair;  // indexed by party; the focus entry equals `global`
    std::size_t focus = 0;
};

ScriptA script_a(const WClassSpec& spec, std::size_t focus = 0);

/// Ordered blocks partitioning {0..n-1}; block 0 is the focus block.
class PartitionSpec {
  public:
    PartitionSpec(std::vector<PartySet> blocks, std::size_t parties);

    static PartitionSpec singletons(std::size_t parties);

    const std::vector<PartySet>& blocks() const { return blocks_; }
    std::size_t size() const { return blocks_.size(); }
    std::size_t parties() const { return parties_; }

  private:
    std::vector<PartySet> blocks_;
    std::size_t parties_;
};

PureState build_w_state(const WClassSpec& spec);
/// √p |W⟩ + √(1-p) |0…0⟩.
PureState build_superposition(const WClassSpec& spec, double p);
DensityOperator build_pcs_density(const PCSSpec& spec);

/// Kraus channel E0 = √λ I, E1 = √(1-λ)(I - |vac⟩⟨vac|), E2 = √(1-λ)|vac⟩⟨vac|
/// with |vac⟩ = |0…0⟩ on the whole register.
DensityOperator apply_phase_damping(const PureState& psi, double lambda);

PureState ou_state();
PureState kim_sanders_state();
PureState maximally_entangled(int d);
PureState ghz_state(std::size_t n, int d = 2);

/// Merges each block into one party with coefficients √q_{si},
/// q_{si} = Σ_{j∈P_s} |a_{ji}|².
WClassSpec coarse_grain(const WClassSpec& spec, const PartitionSpec& partition);

/// Maps a state of the coarse-grained register back onto the original parties:
/// coarse level 0 of block s goes to |0…0⟩_{P_s}, level i to x̃_{si}/√q_{si}.
PureState embed_coarse_state(const WClassSpec& spec, const PartitionSpec& partition, const PureState& coarse);

/// ρ_{A_focus A_party} written out directly from the W coefficients.
DensityOperator pair_marginal_analytic(const PCSSpec& spec, std::size_t party, std::size_t focus = 0);

}  // namespace cren
