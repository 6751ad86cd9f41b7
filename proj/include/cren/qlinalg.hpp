// qlinalg.hpp — dense multipartite state kernel: index bookkeeping, partial
// trace / transpose, trace norm, Schmidt and spectral decompositions.
//
// Flattening order: party 0 is the slowest-varying digit (row-major over
// parties). Every routine in the library relies on this.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cren {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Zero cutoff for eigenvalues and Schmidt coefficients.
inline constexpr double kTolRank = 1e-12;
/// Normalization tolerance held after construction.
inline constexpr double kTolNorm = 1e-10;
/// Inputs off-normalized by at most this much are renormalized silently.
inline constexpr double kRenormalizeTol = 1e-8;
/// Largest total dimension the dense kernel accepts.
inline constexpr std::size_t kMaxTotalDim = 4096;

/// Raised when a numerical post-condition (reconstruction, unitarity) breaks.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sorted, duplicate-free list of 0-based party indices.
using PartySet = std::vector<std::size_t>;

class DimensionProfile {
  public:
    DimensionProfile() = default;
    explicit DimensionProfile(std::vector<int> dims);

    std::size_t parties() const { return dims_.size(); }
    int dim(std::size_t party) const { return dims_.at(party); }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t total() const { return total_; }
    std::size_t stride(std::size_t party) const { return strides_.at(party); }

    std::vector<int> digits(std::size_t index) const;
    std::size_t index(std::span<const int> digits) const;

    /// Sub-profile over `parties` (kept in the given order).
    DimensionProfile restrict_to(std::span<const std::size_t> parties) const;
    DimensionProfile concat(const DimensionProfile& other) const;
    std::size_t subsystem_dim(std::span<const std::size_t> parties) const;

    std::string to_string() const;

    friend bool operator==(const DimensionProfile& a, const DimensionProfile& b) { return a.dims_ == b.dims_; }

  private:
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

/// Nonempty proper subset of parties (side A) versus its complement.
class Bipartition {
  public:
    Bipartition(PartySet side_a, std::size_t parties);

    /// Focus party against all others.
    static Bipartition single(std::size_t party, std::size_t parties) { return Bipartition({party}, parties); }

    const PartySet& side_a() const { return side_a_; }
    const PartySet& side_b() const { return side_b_; }
    std::size_t parties() const { return side_a_.size() + side_b_.size(); }

  private:
    PartySet side_a_;
    PartySet side_b_;
};

class PureState {
  public:
    /// Renormalizes when ‖v‖² is within kRenormalizeTol of 1, throws otherwise.
    PureState(DimensionProfile profile, Vector amplitudes);

    const DimensionProfile& profile() const { return profile_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

  private:
    DimensionProfile profile_;
    Vector amplitudes_;
};

class DensityOperator {
  public:
    /// Checks hermiticity (1e-12), unit trace and positivity (eigenvalues ≥ -1e-10).
    DensityOperator(DimensionProfile profile, Matrix matrix);

    static DensityOperator from_pure(const PureState& psi);

    const DimensionProfile& profile() const { return profile_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

  private:
    struct Trusted {};
    DensityOperator(DimensionProfile profile, Matrix matrix, Trusted);
    friend DensityOperator partial_trace(const DensityOperator&, const PartySet&);
    friend DensityOperator partial_trace(const PureState&, const PartySet&);
    friend DensityOperator tensor_product(const DensityOperator&, const DensityOperator&);

    DimensionProfile profile_;
    Matrix matrix_;
};

struct SchmidtData {
    std::vector<double> coefficients;  // λ_i, descending
    std::vector<Vector> left_basis;    // over side A
    std::vector<Vector> right_basis;   // over side B
    std::size_t rank = 0;
};

struct EigenPair {
    double value;
    Vector vector;
};

struct Spectrum {
    std::vector<EigenPair> pairs;  // descending eigenvalues
    std::size_t rank = 0;          // eigenvalues above kTolRank
};

PureState tensor_product(const PureState& a, const PureState& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

DensityOperator partial_trace(const DensityOperator& rho, const PartySet& keep);
/// Reduced state of a pure state on `keep`, computed without forming |ψ⟩⟨ψ|.
DensityOperator partial_trace(const PureState& psi, const PartySet& keep);

/// ρ^{T_S}: transposes the digits of every party in `transposed`.
Matrix partial_transpose(const DensityOperator& rho, const PartySet& transposed);

double trace_norm(const Matrix& h);

SchmidtData schmidt(const PureState& phi, const Bipartition& cut);

Spectrum spectral_decomposition(const DensityOperator& rho);

/// Reshapes amplitudes into a dim(A) × dim(B) matrix; rows and columns follow
/// the ascending party order inside each side.
Matrix bipartite_matrix(const DimensionProfile& profile, const Vector& amplitudes, const Bipartition& cut);
/// Inverse of bipartite_matrix.
Vector from_bipartite_matrix(const DimensionProfile& profile, const Matrix& m, const Bipartition& cut);

/// Party k of the result is party order[k] of the input.
PureState permute_parties(const PureState& psi, std::span<const std::size_t> order);

/// Validates and sorts a party set against n parties. Throws std::domain_error.
PartySet normalize_party_set(PartySet parties, std::size_t n, const char* what);

double max_hermitian_deviation(const Matrix& m);

}  // namespace cren
