#include "cren/qlinalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cren {

namespace {

// Maps each full index to its (side A index, side B index) pair.
struct SplitIndex {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
    std::size_t dim_a = 1;
    std::size_t dim_b = 1;
};

SplitIndex split_index(const DimensionProfile& profile, const PartySet& side_a, const PartySet& side_b) {
    SplitIndex out;
    out.dim_a = profile.subsystem_dim(side_a);
    out.dim_b = profile.subsystem_dim(side_b);
    const std::size_t n = profile.total();
    out.a.resize(n);
    out.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto digits = profile.digits(i);
        std::size_t ia = 0;
        for (auto p : side_a) ia = ia * static_cast<std::size_t>(profile.dim(p)) + static_cast<std::size_t>(digits[p]);
        std::size_t ib = 0;
        for (auto p : side_b) ib = ib * static_cast<std::size_t>(profile.dim(p)) + static_cast<std::size_t>(digits[p]);
        out.a[i] = ia;
        out.b[i] = ib;
    }
    return out;
}

PartySet complement(const PartySet& s, std::size_t n) {
    PartySet out;
    for (std::size_t p = 0; p < n; ++p)
        if (!std::binary_search(s.begin(), s.end(), p)) out.push_back(p);
    return out;
}

}  // namespace

// --------------------------- DimensionProfile -------------------------------

DimensionProfile::DimensionProfile(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("DimensionProfile: at least one party required");
    strides_.assign(dims_.size(), 1);
    total_ = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
        if (dims_[k] < 2) throw std::invalid_argument("DimensionProfile: every local dimension must be >= 2");
        strides_[k] = total_;
        total_ *= static_cast<std::size_t>(dims_[k]);
        if (total_ > kMaxTotalDim) throw std::invalid_argument("DimensionProfile: total dimension exceeds 4096");
    }
}

std::vector<int> DimensionProfile::digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % static_cast<std::size_t>(dims_[k]));
        index /= static_cast<std::size_t>(dims_[k]);
    }
    return out;
}

std::size_t DimensionProfile::index(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) throw std::invalid_argument("DimensionProfile::index: digit count mismatch");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (digits[k] < 0 || digits[k] >= dims_[k]) throw std::out_of_range("DimensionProfile::index: digit out of range");
        idx += static_cast<std::size_t>(digits[k]) * strides_[k];
    }
    return idx;
}

DimensionProfile DimensionProfile::restrict_to(std::span<const std::size_t> parties) const {
    std::vector<int> d;
    d.reserve(parties.size());
    for (auto p : parties) d.push_back(dims_.at(p));
    return DimensionProfile(std::move(d));
}

DimensionProfile DimensionProfile::concat(const DimensionProfile& other) const {
    std::vector<int> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return DimensionProfile(std::move(d));
}

std::size_t DimensionProfile::subsystem_dim(std::span<const std::size_t> parties) const {
    std::size_t d = 1;
    for (auto p : parties) d *= static_cast<std::size_t>(dims_.at(p));
    return d;
}

std::string DimensionProfile::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
    os << ')';
    return os.str();
}

// --------------------------- Bipartition ------------------------------------

PartySet normalize_party_set(PartySet parties, std::size_t n, const char* what) {
    std::sort(parties.begin(), parties.end());
    if (std::adjacent_find(parties.begin(), parties.end()) != parties.end())
        throw std::domain_error(std::string(what) + ": duplicate party index");
    if (!parties.empty() && parties.back() >= n) throw std::domain_error(std::string(what) + ": party index out of range");
    return parties;
}

Bipartition::Bipartition(PartySet side_a, std::size_t parties) {
    side_a_ = normalize_party_set(std::move(side_a), parties, "Bipartition");
    if (side_a_.empty() || side_a_.size() >= parties)
        throw std::domain_error("Bipartition: side A must be a nonempty proper subset of the parties");
    side_b_ = complement(side_a_, parties);
}

// --------------------------- PureState / DensityOperator --------------------

PureState::PureState(DimensionProfile profile, Vector amplitudes)
    : profile_(std::move(profile)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != profile_.total())
        throw std::invalid_argument("PureState: amplitude count does not match profile " + profile_.to_string());
    const double norm_sq = amplitudes_.squaredNorm();
    if (!std::isfinite(norm_sq) || std::abs(norm_sq - 1.0) > kRenormalizeTol) {
        std::ostringstream os;
        os << "PureState: amplitudes not normalized (norm^2 = " << norm_sq << ")";
        throw std::invalid_argument(os.str());
    }
    amplitudes_ /= std::sqrt(norm_sq);
}

double max_hermitian_deviation(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator::DensityOperator(DimensionProfile profile, Matrix matrix, Trusted)
    : profile_(std::move(profile)), matrix_(std::move(matrix)) {
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

DensityOperator::DensityOperator(DimensionProfile profile, Matrix matrix)
    : profile_(std::move(profile)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(profile_.total());
    if (matrix_.rows() != n || matrix_.cols() != n)
        throw std::invalid_argument("DensityOperator: matrix side does not match profile " + profile_.to_string());
    if (!matrix_.allFinite()) throw std::invalid_argument("DensityOperator: non-finite entries");
    if (max_hermitian_deviation(matrix_) > 1e-12) throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > kRenormalizeTol) {
        std::ostringstream os;
        os << "DensityOperator: trace is " << tr << ", expected 1";
        throw std::invalid_argument(os.str());
    }
    matrix_ /= tr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("DensityOperator: eigensolver failed");
    if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
    const Vector& v = psi.amplitudes();
    return DensityOperator(psi.profile(), v * v.adjoint(), Trusted{});
}

// --------------------------- tensor product ---------------------------------

PureState tensor_product(const PureState& a, const PureState& b) {
    const Vector& va = a.amplitudes();
    const Vector& vb = b.amplitudes();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
    return PureState(a.profile().concat(b.profile()), std::move(out));
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    const Matrix& ma = a.matrix();
    const Matrix& mb = b.matrix();
    const Eigen::Index nb = mb.rows();
    Matrix out(ma.rows() * nb, ma.cols() * nb);
    for (Eigen::Index i = 0; i < ma.rows(); ++i)
        for (Eigen::Index j = 0; j < ma.cols(); ++j) out.block(i * nb, j * nb, nb, nb) = ma(i, j) * mb;
    return DensityOperator(a.profile().concat(b.profile()), std::move(out), DensityOperator::Trusted{});
}

// --------------------------- partial trace ----------------------------------

DensityOperator partial_trace(const DensityOperator& rho, const PartySet& keep_in) {
    const auto& profile = rho.profile();
    const PartySet keep = normalize_party_set(keep_in, profile.parties(), "partial_trace");
    if (keep.empty()) throw std::domain_error("partial_trace: keep set must be nonempty");
    const PartySet traced = complement(keep, profile.parties());
    if (traced.empty()) return rho;

    const SplitIndex split = split_index(profile, keep, traced);
    // full[a * dim_b + t] = full index with kept digits a and traced digits t.
    std::vector<std::size_t> full(profile.total());
    for (std::size_t i = 0; i < profile.total(); ++i) full[split.a[i] * split.dim_b + split.b[i]] = i;

    const Matrix& m = rho.matrix();
    const auto dk = static_cast<Eigen::Index>(split.dim_a);
    Matrix out = Matrix::Zero(dk, dk);
    for (std::size_t a = 0; a < split.dim_a; ++a)
        for (std::size_t b = 0; b < split.dim_a; ++b) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < split.dim_b; ++t)
                s += m(static_cast<Eigen::Index>(full[a * split.dim_b + t]), static_cast<Eigen::Index>(full[b * split.dim_b + t]));
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
        }
    return DensityOperator(profile.restrict_to(keep), std::move(out), DensityOperator::Trusted{});
}

DensityOperator partial_trace(const PureState& psi, const PartySet& keep_in) {
    const auto& profile = psi.profile();
    const PartySet keep = normalize_party_set(keep_in, profile.parties(), "partial_trace");
    if (keep.empty()) throw std::domain_error("partial_trace: keep set must be nonempty");
    if (keep.size() == profile.parties()) return DensityOperator::from_pure(psi);
    const Bipartition cut(keep, profile.parties());
    const Matrix m = bipartite_matrix(profile, psi.amplitudes(), cut);
    return DensityOperator(profile.restrict_to(keep), m * m.adjoint(), DensityOperator::Trusted{});
}

// --------------------------- partial transpose ------------------------------

Matrix partial_transpose(const DensityOperator& rho, const PartySet& transposed_in) {
    const auto& profile = rho.profile();
    const PartySet transposed = normalize_party_set(transposed_in, profile.parties(), "partial_transpose");
    if (transposed.empty() || transposed.size() == profile.parties())
        throw std::domain_error("partial_transpose: transposed set must be a nonempty proper subset");

    const std::size_t n = profile.total();
    // Split each index into the transposed-digit part s and the rest r = i - s.
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t part = 0;
        for (auto p : transposed) part += (i / profile.stride(p) % static_cast<std::size_t>(profile.dim(p))) * profile.stride(p);
        s[i] = part;
    }
    const Matrix& m = rho.matrix();
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = i - s[i] + s[j];
            const std::size_t col = j - s[j] + s[i];
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    return out;
}

double trace_norm(const Matrix& h) {
    if (h.rows() != h.cols()) throw std::domain_error("trace_norm: matrix is not square");
    if (max_hermitian_deviation(h) > 1e-9) throw std::domain_error("trace_norm: matrix is not Hermitian");
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("trace_norm: eigensolver failed");
    return es.eigenvalues().cwiseAbs().sum();
}

// --------------------------- reshaping --------------------------------------

Matrix bipartite_matrix(const DimensionProfile& profile, const Vector& amplitudes, const Bipartition& cut) {
    if (cut.parties() != profile.parties()) throw std::domain_error("bipartite_matrix: cut does not match profile");
    const SplitIndex split = split_index(profile, cut.side_a(), cut.side_b());
    Matrix m(static_cast<Eigen::Index>(split.dim_a), static_cast<Eigen::Index>(split.dim_b));
    for (std::size_t i = 0; i < profile.total(); ++i)
        m(static_cast<Eigen::Index>(split.a[i]), static_cast<Eigen::Index>(split.b[i])) = amplitudes(static_cast<Eigen::Index>(i));
    return m;
}

Vector from_bipartite_matrix(const DimensionProfile& profile, const Matrix& m, const Bipartition& cut) {
    const SplitIndex split = split_index(profile, cut.side_a(), cut.side_b());
    if (static_cast<std::size_t>(m.rows()) != split.dim_a || static_cast<std::size_t>(m.cols()) != split.dim_b)
        throw std::domain_error("from_bipartite_matrix: shape mismatch");
    Vector v(static_cast<Eigen::Index>(profile.total()));
    for (std::size_t i = 0; i < profile.total(); ++i)
        v(static_cast<Eigen::Index>(i)) = m(static_cast<Eigen::Index>(split.a[i]), static_cast<Eigen::Index>(split.b[i]));
    return v;
}

PureState permute_parties(const PureState& psi, std::span<const std::size_t> order) {
    const auto& profile = psi.profile();
    const std::size_t n = profile.parties();
    PartySet check(order.begin(), order.end());
    check = normalize_party_set(check, n, "permute_parties");
    if (check.size() != n) throw std::domain_error("permute_parties: order must be a permutation");

    const DimensionProfile out_profile = profile.restrict_to(order);
    Vector out(psi.amplitudes().size());
    std::vector<int> src(n);
    for (std::size_t i = 0; i < profile.total(); ++i) {
        const auto digits = out_profile.digits(i);
        for (std::size_t k = 0; k < n; ++k) src[order[k]] = digits[k];
        out(static_cast<Eigen::Index>(i)) = psi.amplitudes()(static_cast<Eigen::Index>(profile.index(src)));
    }
    return PureState(out_profile, std::move(out));
}

// --------------------------- decompositions ---------------------------------

SchmidtData schmidt(const PureState& phi, const Bipartition& cut) {
    const Matrix m = bipartite_matrix(phi.profile(), phi.amplitudes(), cut);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("schmidt: SVD failed");
    SchmidtData out;
    const auto& sigma = svd.singularValues();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        const double lambda = sigma(i) * sigma(i);
        out.coefficients.push_back(lambda);
        out.left_basis.emplace_back(svd.matrixU().col(i));
        out.right_basis.emplace_back(svd.matrixV().col(i).conjugate());
        if (lambda > kTolRank) ++out.rank;
    }
    return out;
}

Spectrum spectral_decomposition(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("spectral_decomposition: eigensolver failed");
    Spectrum out;
    const auto n = es.eigenvalues().size();
    for (Eigen::Index i = n; i-- > 0;) {
        const double e = es.eigenvalues()(i);
        out.pairs.push_back({e, es.eigenvectors().col(i)});
        if (e > kTolRank) ++out.rank;
    }
    return out;
}

}  // namespace cren
