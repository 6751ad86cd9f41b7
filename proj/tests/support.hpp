// Shared generators and brute-force oracles for the test suites.

#pragma once

#include "cren/qlinalg.hpp"
#include "cren/states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

namespace cren::testing {

inline Vector random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
    return v.normalized();
}

inline PureState random_state(const DimensionProfile& profile, std::mt19937_64& rng) {
    return PureState(profile, random_vector(profile.total(), rng));
}

/// Mixture of `rank` random pure states with random weights.
inline DensityOperator random_density(const DimensionProfile& profile, std::size_t rank, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const auto n = static_cast<Eigen::Index>(profile.total());
    Matrix m = Matrix::Zero(n, n);
    double total = 0.0;
    for (std::size_t k = 0; k < rank; ++k) {
        const double w = u(rng);
        const Vector v = random_vector(profile.total(), rng);
        m += w * v * v.adjoint();
        total += w;
    }
    m /= total;
    m = (0.5 * (m + m.adjoint())).eval();
    return DensityOperator(profile, m);
}

inline WClassSpec random_w(std::size_t n, int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix a(static_cast<Eigen::Index>(n), d - 1);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(g(rng), g(rng));
    return WClassSpec(a / a.norm());
}

/// Partial trace by explicit digit loops over every index pair.
inline Matrix brute_partial_trace(const DimensionProfile& profile, const Matrix& rho, const PartySet& keep) {
    const DimensionProfile kept = profile.restrict_to(keep);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kept.total()), static_cast<Eigen::Index>(kept.total()));
    for (std::size_t i = 0; i < profile.total(); ++i)
        for (std::size_t j = 0; j < profile.total(); ++j) {
            const auto di = profile.digits(i), dj = profile.digits(j);
            bool traced_equal = true;
            for (std::size_t p = 0; p < profile.parties(); ++p) {
                const bool kept_party = std::find(keep.begin(), keep.end(), p) != keep.end();
                if (!kept_party && di[p] != dj[p]) traced_equal = false;
            }
            if (!traced_equal) continue;
            std::vector<int> ki, kj;
            for (std::size_t p : keep) {
                ki.push_back(di[p]);
                kj.push_back(dj[p]);
            }
            out(static_cast<Eigen::Index>(kept.index(ki)), static_cast<Eigen::Index>(kept.index(kj))) +=
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Eigen::VectorXd sorted_eigenvalues(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline Vector basis(std::size_t n, std::size_t i) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
}

/// Set partitions of {0..n-1} into exactly `blocks` blocks, enumerated as
/// restricted growth strings; blocks are ordered by their smallest member.
inline std::vector<std::vector<PartySet>> set_partitions(std::size_t n, std::size_t blocks) {
    std::vector<std::vector<PartySet>> out;
    std::vector<std::size_t> label(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
        if (pos == n) {
            if (used != blocks) return;
            std::vector<PartySet> b(blocks);
            for (std::size_t p = 0; p < n; ++p) b[label[p]].push_back(p);
            out.push_back(std::move(b));
            return;
        }
        for (std::size_t l = 0; l <= used && l < blocks; ++l) {
            label[pos] = l;
            self(self, pos + 1, std::max(used, l + 1));
        }
    };
    if (n > 0) rec(rec, 1, 1);
    return out;
}

}  // namespace cren::testing
