#include "cren/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cren {

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::concurrence: return "concurrence";
        case MeasureKind::negativity: return "negativity";
        case MeasureKind::cren: return "cren";
        case MeasureKind::crenoa: return "crenoa";
        case MeasureKind::coa: return "coa";
    }
    return "unknown";
}

std::string_view to_string(MeasureMethod method) {
    switch (method) {
        case MeasureMethod::closed_form: return "closed_form";
        case MeasureMethod::trace_norm: return "trace_norm";
        case MeasureMethod::optimizer: return "optimizer";
    }
    return "unknown";
}

std::string_view to_string(BoundKind bound) {
    switch (bound) {
        case BoundKind::exact: return "exact";
        case BoundKind::upper_bound: return "upper_bound";
        case BoundKind::lower_bound: return "lower_bound";
    }
    return "unknown";
}

double concurrence_pure(const PureState& phi, const Bipartition& cut) {
    const Matrix m = bipartite_matrix(phi.profile(), phi.amplitudes(), cut);
    const Matrix rho_a = m * m.adjoint();
    const double purity = rho_a.cwiseAbs2().sum();  // tr ρ_A² for Hermitian ρ_A
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

double negativity_pure(const PureState& phi, const Bipartition& cut) {
    const SchmidtData s = schmidt(phi, cut);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.coefficients.size(); ++i)
        for (std::size_t j = i + 1; j < s.coefficients.size(); ++j) sum += std::sqrt(s.coefficients[i] * s.coefficients[j]);
    return 2.0 * sum;
}

NegativityPaths negativity_paths(const PureState& phi, const Bipartition& cut) {
    NegativityPaths out{};
    out.schmidt = negativity_pure(phi, cut);

    const DensityOperator rho_a = partial_trace(phi, cut.side_a());
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_a.matrix(), Eigen::EigenvaluesOnly);
    double root_trace = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) root_trace += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    out.marginal_root = root_trace * root_trace - 1.0;

    out.trace_norm = trace_norm(partial_transpose(DensityOperator::from_pure(phi), cut.side_b())) - 1.0;

    const double v[3] = {out.schmidt, out.marginal_root, out.trace_norm};
    out.max_deviation = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) out.max_deviation = std::max(out.max_deviation, std::abs(v[i] - v[j]));
    return out;
}

double negativity_mixed(const DensityOperator& rho, const Bipartition& cut) {
    if (cut.parties() != rho.profile().parties()) throw std::domain_error("negativity_mixed: cut does not match profile");
    const double n = trace_norm(partial_transpose(rho, cut.side_b())) - 1.0;
    if (n < 0.0 && n > -1e-10) return 0.0;
    return n;
}

double wootters_concurrence_2q(const DensityOperator& rho) {
    if (rho.profile() != DimensionProfile({2, 2})) throw std::domain_error("wootters_concurrence_2q: profile must be (2,2)");
    // l_i are the singular values of τ = Rᵀ (σy⊗σy) R with ρ = R R†.
    const Spectrum spec = spectral_decomposition(rho);
    Matrix roots(4, static_cast<Eigen::Index>(spec.rank));
    for (std::size_t j = 0; j < spec.rank; ++j)
        roots.col(static_cast<Eigen::Index>(j)) = std::sqrt(spec.pairs[j].value) * spec.pairs[j].vector;

    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Matrix tau = roots.transpose() * yy * roots;
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Matrix>(tau).singularValues();
    std::vector<double> l(4, 0.0);
    for (Eigen::Index i = 0; i < sigma.size(); ++i) l[static_cast<std::size_t>(i)] = sigma(i);
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

namespace {

// σ1σ2 + σ1σ3 + σ2σ3 for Schmidt rank at most 3, from e1 = Σσ², e2 = Σσi²σj² and
// u = σ1σ2σ3: t is the root of t² = e2 + 2u√(e1 + 2t), reached by Newton steps
// from above (the function is convex and increasing there).
double schmidt_pair_sum(double e1, double e2, double u) {
    if (u == 0.0) return std::sqrt(e2);
    double t = std::sqrt(e2 + 2.0 * u * std::sqrt(e1 + 2.0 * std::sqrt(3.0 * e2)));
    for (int it = 0; it < 60; ++it) {
        const double s = std::sqrt(e1 + 2.0 * t);
        const double f = t * t - e2 - 2.0 * u * s;
        const double slope = 2.0 * t - 2.0 * u / s;
        if (!(f > 0.0) || !(slope > 0.0)) break;
        const double next = t - f / slope;
        if (!(next < t)) break;
        t = next;
    }
    return t;
}

}  // namespace

double measure_from_invariants(double e1, double e2, double e3, PureMeasure measure, double smoothing) {
    const double eps2 = smoothing * smoothing;
    if (measure == PureMeasure::concurrence)
        return smoothing > 0.0 ? 2.0 * (std::sqrt(e2 + eps2) - smoothing) : 2.0 * std::sqrt(e2);
    if (smoothing > 0.0) {
        const double u = e3 > 0.0 ? std::sqrt(e3 + eps2) - smoothing : 0.0;
        const double t = schmidt_pair_sum(e1, e2, u);
        return 2.0 * (std::sqrt(t * t + eps2) - smoothing);
    }
    return 2.0 * schmidt_pair_sum(e1, e2, std::sqrt(e3));
}

double weighted_pure_measure(const Eigen::Ref<const Matrix>& coefficients, PureMeasure measure, double smoothing) {
    const Eigen::Index rows = coefficients.rows();
    const Eigen::Index cols = coefficients.cols();
    const Eigen::Index k = std::min(rows, cols);
    if (k == 1) return 0.0;
    if (k <= 3) {
        // Cauchy-Binet sums of squared minors give the elementary symmetric
        // functions of σ² without the cancellation of Gram-matrix routes.
        const bool wide = rows == k;
        const Eigen::Index n = wide ? cols : rows;
        auto at = [&](Eigen::Index side, Eigen::Index j) { return wide ? coefficients(side, j) : coefficients(j, side); };
        auto minor2 = [&](Eigen::Index a, Eigen::Index b, Eigen::Index j, Eigen::Index l) {
            return at(a, j) * at(b, l) - at(a, l) * at(b, j);
        };
        double e1 = 0.0, e2 = 0.0, e3 = 0.0;
        if (k == 3) {
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index a = 0; a < k; ++a) e1 += std::norm(at(a, j));
            if (e1 == 0.0) return 0.0;
        }
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = a + 1; b < k; ++b)
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index l = j + 1; l < n; ++l) e2 += std::norm(minor2(a, b, j, l));
        if (k == 3)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index l = j + 1; l < n; ++l)
                    for (Eigen::Index m = l + 1; m < n; ++m)
                        e3 += std::norm(at(0, j) * minor2(1, 2, l, m) - at(0, l) * minor2(1, 2, j, m) + at(0, m) * minor2(1, 2, j, l));

        return measure_from_invariants(e1, e2, e3, measure, smoothing);
    }
    // Singular values rather than Gram eigenvalues: σ keeps absolute accuracy
    // where √μ would amplify rounding in small μ.
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Matrix>(coefficients).singularValues();
    if (smoothing > 0.0) {
        const double e2 = smoothing * smoothing;
        double pairs = 0.0, sum = 0.0;
        for (Eigen::Index i = 0; i < sigma.size(); ++i)
            for (Eigen::Index j = i + 1; j < sigma.size(); ++j) {
                const double q = sigma(i) * sigma(i) * sigma(j) * sigma(j);
                pairs += q;
                sum += std::sqrt(q + e2) - smoothing;
            }
        if (measure == PureMeasure::negativity) return 2.0 * sum;
        return 2.0 * (std::sqrt(pairs + e2) - smoothing);
    }
    const double s1 = sigma.sum();
    const double s2 = sigma.squaredNorm();
    if (measure == PureMeasure::negativity) return std::max(0.0, s1 * s1 - s2);
    return std::sqrt(std::max(0.0, 2.0 * (s2 * s2 - sigma.array().pow(4).sum())));
}

double range_concurrence_lower_bound(const DensityOperator& rho, const Bipartition& cut) {
    const Spectrum spec = spectral_decomposition(rho);
    const std::size_t r = spec.rank;
    if (r == 0) return 0.0;
    // The symmetric-square form has r² × r² entries; beyond this size return
    // the trivial bound.
    if (r > 16) return 0.0;

    const auto& profile = rho.profile();
    std::vector<Matrix> m;
    m.reserve(r);
    for (std::size_t i = 0; i < r; ++i) m.push_back(bipartite_matrix(profile, spec.pairs[i].vector, cut));

    const auto rr = static_cast<Eigen::Index>(r * r);
    Matrix k(rr, rr);
    // ⟨q_i q_j| S_AA' |q_k q_l⟩ = tr(M_k M_i† M_l M_j†)
    std::vector<Matrix> prod(r * r);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) prod[a * r + b] = m[a] * m[b].adjoint();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t kk = 0; kk < r; ++kk)
                for (std::size_t l = 0; l < r; ++l)
                    k(static_cast<Eigen::Index>(i * r + j), static_cast<Eigen::Index>(kk * r + l)) =
                        (prod[kk * r + i] * prod[l * r + j]).trace();

    Matrix sym = Matrix::Zero(rr, rr);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            sym(static_cast<Eigen::Index>(i * r + j), static_cast<Eigen::Index>(i * r + j)) += 0.5;
            sym(static_cast<Eigen::Index>(j * r + i), static_cast<Eigen::Index>(i * r + j)) += 0.5;
        }
    Matrix form = sym * k * sym;
    form = (0.5 * (form + form.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(form, Eigen::EigenvaluesOnly);
    // small margin over the rounding level of the eigensolver
    const double purity_max = std::min(1.0, es.eigenvalues().maxCoeff() + 1e-13);
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity_max)));
}

double concurrence_roof_lower_bound(const DensityOperator& rho, const Bipartition& cut) {
    const auto& profile = rho.profile();
    const auto m = static_cast<double>(std::min(profile.subsystem_dim(cut.side_a()), profile.subsystem_dim(cut.side_b())));
    const double ppt = std::sqrt(2.0 / (m * (m - 1.0))) * negativity_mixed(rho, cut);
    return std::max(ppt, range_concurrence_lower_bound(rho, cut));
}

}  // namespace cren
