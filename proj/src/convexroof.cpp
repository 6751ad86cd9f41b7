#include "cren/convexroof.hpp"

#include <Eigen/QR>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cren {

namespace {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

double max_unitarity_deviation(const Matrix& u) {
    const Matrix d = u * u.adjoint() - Matrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

// One optimization run over r × r unitaries. Members are held as the columns
// of `x`, each the column-major flattening of a dim(A) × dim(B) coefficient
// matrix, so that x = roots · Uᵀ.
class RotationSearch {
  public:
    RotationSearch(const Matrix& roots, Eigen::Index rows, Eigen::Index cols, PureMeasure measure, double sign)
        : roots_(roots), rows_(rows), cols_(cols), measure_(measure), sign_(sign),
          buf_k_(roots.rows()), buf_l_(roots.rows()), small_(std::min(rows, cols)) {}

    struct Run {
        Matrix unitary;
        std::vector<double> trace;
        bool converged = false;
    };

    Run run(Matrix unitary, int max_sweeps, double tol_rel, bool smooth) {
        const Eigen::Index r = unitary.rows();
        x_ = roots_ * unitary.transpose();
        u_ = std::move(unitary);
        g_.resize(static_cast<std::size_t>(r));

        Run out;
        // Smoothing stages get at most half of the budget, split evenly.
        const int stage_cap = max_sweeps / (2 * static_cast<int>(std::size(kSmoothing)));
        int budget = max_sweeps;
        if (smooth)
            for (double eps : kSmoothing) {
                int stage_budget = stage_cap;
                sweeps(eps, stage_budget, kSmoothingTol, nullptr);
                budget -= stage_cap - stage_budget;
            }
        out.converged = sweeps(0.0, budget, tol_rel, &out.trace) || r == 1 || max_sweeps == 0;
        out.unitary = u_;
        return out;
    }

  private:
    static constexpr double kSmoothing[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    static constexpr double kSmoothingTol = 1e-6;
    static constexpr double kScanThreshold = 1e-3;

    // Cyclic sweeps at smoothing eps until the relative change per sweep is at
    // most tol_rel; spends from budget and reports convergence.
    bool sweeps(double eps, int& budget, double tol_rel, std::vector<double>* trace) {
        eps_ = eps;
        const Eigen::Index r = x_.cols();
        objective_ = 0.0;
        for (Eigen::Index k = 0; k < r; ++k) {
            g_[static_cast<std::size_t>(k)] = member_value(x_.col(k));
            objective_ += g_[static_cast<std::size_t>(k)];
        }
        if (trace) trace->push_back(objective_);
        bool settled = false;
        double current = objective_;
        scan_ = true;
        while (budget > 0) {
            --budget;
            for (Eigen::Index k = 0; k < r; ++k)
                for (Eigen::Index l = k + 1; l < r; ++l) {
                    if (x_.col(k).squaredNorm() == 0.0 && x_.col(l).squaredNorm() == 0.0) continue;
                    rotate_pair(k, l, Complex(1.0, 0.0));
                    rotate_pair(k, l, Complex(0.0, 1.0));
                }
            if (trace) trace->push_back(objective_);
            const double change = std::abs(current - objective_) / std::max(1.0, std::abs(objective_));
            settled = change <= tol_rel;
            scan_ = change > kScanThreshold;
            current = objective_;
            if (settled) break;
        }
        return settled;
    }

    double member_value(const Eigen::Ref<const Vector>& v) const {
        return weighted_pure_measure(Eigen::Map<const Matrix>(v.data(), rows_, cols_), measure_, eps_);
    }

    // Rotated pair [[c, -w s], [w̄ s, c]] with c = cos θ, s = sin θ, into the buffers.
    void rotate_into_buffers(Eigen::Index k, Eigen::Index l, Complex w, double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        buf_k_.noalias() = c * x_.col(k) - (w * s) * x_.col(l);
        buf_l_.noalias() = (std::conj(w) * s) * x_.col(k) + c * x_.col(l);
    }

    // With at most three Schmidt coefficients the measures depend only on the
    // invariants e1, e2 and e3 (sums of squared 1×1, 2×2 and 3×3 minors). For a
    // rotated member x P + y Q every minor is a polynomial in (x, y) whose
    // coefficients are fixed by the pair, so the line search never rebuilds
    // the members.
    struct Quadratic {
        Complex a, b, d;  // x², xy, y²
    };
    struct Cubic {
        Complex c0, c1, c2, c3;  // x³, x²y, xy², y³
    };

    void prepare_invariants(Eigen::Index k, Eigen::Index l) {
        const bool wide = rows_ == small_;
        const Eigen::Index n = wide ? cols_ : rows_;
        auto at = [&](Eigen::Index col, Eigen::Index side, Eigen::Index j) {
            return wide ? x_(side + rows_ * j, col) : x_(j + rows_ * side, col);
        };
        pp_ = x_.col(k).squaredNorm();
        qq_ = x_.col(l).squaredNorm();
        pq_ = x_.col(k).dot(x_.col(l));
        quadratics_.clear();
        cubics_.clear();
        for (Eigen::Index r0 = 0; r0 < small_; ++r0)
            for (Eigen::Index r1 = r0 + 1; r1 < small_; ++r1)
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index m = j + 1; m < n; ++m) {
                        auto minor = [&](Eigen::Index u, Eigen::Index v) {
                            return at(u, r0, j) * at(v, r1, m) - at(u, r0, m) * at(v, r1, j);
                        };
                        quadratics_.push_back({minor(k, k), minor(k, l) + minor(l, k), minor(l, l)});
                    }
        if (small_ < 3) return;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index m = j + 1; m < n; ++m)
                for (Eigen::Index o = m + 1; o < n; ++o) {
                    auto det = [&](Eigen::Index u, Eigen::Index v, Eigen::Index w) {
                        return at(u, 0, j) * (at(v, 1, m) * at(w, 2, o) - at(v, 2, m) * at(w, 1, o)) -
                               at(v, 0, m) * (at(u, 1, j) * at(w, 2, o) - at(u, 2, j) * at(w, 1, o)) +
                               at(w, 0, o) * (at(u, 1, j) * at(v, 2, m) - at(u, 2, j) * at(v, 1, m));
                    };
                    cubics_.push_back({det(k, k, k), det(l, k, k) + det(k, l, k) + det(k, k, l),
                                       det(k, l, l) + det(l, k, l) + det(l, l, k), det(l, l, l)});
                }
    }

    double member_from_invariants(Complex x, Complex y) const {
        double e2 = 0.0, e3 = 0.0;
        const Complex xx = x * x, xy = x * y, yy = y * y;
        for (const auto& q : quadratics_) e2 += std::norm(xx * q.a + xy * q.b + yy * q.d);
        if (small_ == 2) return eps_ > 0.0 ? 2.0 * (std::sqrt(e2 + eps_ * eps_) - eps_) : 2.0 * std::sqrt(e2);
        for (const auto& c : cubics_) e3 += std::norm(xx * (x * c.c0 + y * c.c1) + yy * (x * c.c2 + y * c.c3));
        const double e1 = std::norm(x) * pp_ + std::norm(y) * qq_ + 2.0 * (std::conj(x) * y * pq_).real();
        return measure_from_invariants(e1, e2, e3, measure_, eps_);
    }

    // Signed objective of the (k, l) pair after the rotation.
    double pair_objective(Eigen::Index k, Eigen::Index l, Complex w, double theta, double* gk, double* gl) {
        if (small_ <= 3) {
            const double c = std::cos(theta), s = std::sin(theta);
            *gk = member_from_invariants(c, -w * s);
            *gl = member_from_invariants(std::conj(w) * s, c);
        } else {
            rotate_into_buffers(k, l, w, theta);
            *gk = member_value(buf_k_);
            *gl = member_value(buf_l_);
        }
        return sign_ * (*gk + *gl);
    }

    void rotate_pair(Eigen::Index k, Eigen::Index l, Complex w) {
        constexpr int kGrid = 16;
        constexpr double kHalfPi = std::numbers::pi / 2.0;
        constexpr double kStep = std::numbers::pi / kGrid;
        const std::size_t ks = static_cast<std::size_t>(k), ls = static_cast<std::size_t>(l);
        const double base = sign_ * (g_[ks] + g_[ls]);
        if (small_ <= 3) prepare_invariants(k, l);

        double gk = 0.0, gl = 0.0;
        double best_theta = 0.0, best = base;
        for (int m = 0; scan_ && m < kGrid; ++m) {
            const double theta = -kHalfPi + m * kStep;
            if (theta == 0.0) continue;
            const double f = pair_objective(k, l, w, theta, &gk, &gl);
            if (f < best) {
                best = f;
                best_theta = theta;
            }
        }

        // Brent refinement (golden section with parabolic steps) inside the
        // grid cells around the best point.
        const int bits = eps_ > 0.0 ? 20 : 30;
        std::uintmax_t iterations = 100;
        const auto [theta, f] = boost::math::tools::brent_find_minima(
            [&](double t) { return pair_objective(k, l, w, t, &gk, &gl); }, best_theta - kStep, best_theta + kStep, bits,
            iterations);
        if (f < best) {
            best = f;
            best_theta = theta;
        }
        if (!(best < base) || best_theta == 0.0) return;

        // Accept: re-evaluate at the chosen angle and commit to x, U and the cache.
        pair_objective(k, l, w, best_theta, &gk, &gl);
        rotate_into_buffers(k, l, w, best_theta);
        x_.col(k) = buf_k_;
        x_.col(l) = buf_l_;
        const double c = std::cos(best_theta), s = std::sin(best_theta);
        const Eigen::RowVectorXcd uk = u_.row(k), ul = u_.row(l);
        u_.row(k) = c * uk - (w * s) * ul;
        u_.row(l) = (std::conj(w) * s) * uk + c * ul;
        objective_ += (gk + gl) - (g_[ks] + g_[ls]);
        g_[ks] = gk;
        g_[ls] = gl;
    }

    const Matrix& roots_;
    Eigen::Index rows_, cols_;
    PureMeasure measure_;
    double sign_;
    Matrix x_, u_;
    std::vector<double> g_;
    double eps_ = 0.0;
    double objective_ = 0.0;
    bool scan_ = true;
    Vector buf_k_, buf_l_;
    Eigen::Index small_;
    double pp_ = 0.0, qq_ = 0.0;
    Complex pq_;
    std::vector<Quadratic> quadratics_;
    std::vector<Cubic> cubics_;
};

}  // namespace

RootSet root_set(const DensityOperator& rho) {
    const Spectrum spec = spectral_decomposition(rho);
    RootSet out{rho.profile(), {}};
    for (const auto& pair : spec.pairs)
        if (pair.value > kTolRank) out.roots.push_back(std::sqrt(pair.value) * pair.vector);
    return out;
}

Matrix Decomposition::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(profile.total());
    Matrix rho = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < weights.size(); ++k) rho += weights[k] * states[k] * states[k].adjoint();
    return rho;
}

Decomposition decomposition_from_unitary(const RootSet& roots, const Matrix& unitary) {
    const auto r = static_cast<std::size_t>(unitary.rows());
    if (unitary.rows() != unitary.cols()) throw std::domain_error("decomposition_from_unitary: unitary must be square");
    if (r < roots.rank()) throw std::domain_error("decomposition_from_unitary: unitary smaller than rank");
    if (max_unitarity_deviation(unitary) > 1e-10) throw std::domain_error("decomposition_from_unitary: matrix is not unitary");

    Decomposition out{roots.profile, {}, {}};
    const auto n = static_cast<Eigen::Index>(roots.profile.total());
    for (std::size_t k = 0; k < r; ++k) {
        Vector v = Vector::Zero(n);
        for (std::size_t j = 0; j < roots.rank(); ++j)
            v += unitary(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * roots.roots[j];
        const double p = v.squaredNorm();
        if (p < kZeroWeight) continue;
        out.weights.push_back(p);
        out.states.push_back(v / std::sqrt(p));
    }
    return out;
}

double average_measure(const Decomposition& dec, const Bipartition& cut, PureMeasure measure) {
    double s = 0.0;
    for (std::size_t k = 0; k < dec.size(); ++k) {
        const PureState phi(dec.profile, dec.states[k]);
        s += dec.weights[k] * (measure == PureMeasure::negativity ? negativity_pure(phi, cut) : concurrence_pure(phi, cut));
    }
    return s;
}

double average_negativity(const Decomposition& dec, const Bipartition& cut) {
    return average_measure(dec, cut, PureMeasure::negativity);
}

std::size_t default_decomposition_size(std::size_t rank) {
    return std::max(rank, std::min<std::size_t>(rank * rank, 16));
}

Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const auto m = static_cast<Eigen::Index>(n);
    Matrix z(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(m, m);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

OptResult optimize(const DensityOperator& rho, const Bipartition& cut, Direction direction, const OptConfig& cfg) {
    if (cfg.starts < 1) throw std::domain_error("optimize: starts must be >= 1");
    if (cfg.max_sweeps < 0) throw std::domain_error("optimize: max_sweeps must be >= 0");
    if (!(cfg.tol_rel > 0.0)) throw std::domain_error("optimize: tol_rel must be positive");
    if (cut.parties() != rho.profile().parties()) throw std::domain_error("optimize: cut does not match profile");

    const RootSet roots = root_set(rho);
    if (roots.rank() == 0) throw NumericalError("optimize: density operator has no eigenvalue above tolerance");
    const std::size_t r = cfg.size.value_or(default_decomposition_size(roots.rank()));
    if (r < roots.rank()) throw std::domain_error("optimize: decomposition size below rank");

    const auto& profile = rho.profile();
    const auto rows = static_cast<Eigen::Index>(profile.subsystem_dim(cut.side_a()));
    const auto cols = static_cast<Eigen::Index>(profile.subsystem_dim(cut.side_b()));
    Matrix root_cols = Matrix::Zero(rows * cols, static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < roots.rank(); ++j) {
        const Matrix m = bipartite_matrix(profile, roots.roots[j], cut);
        root_cols.col(static_cast<Eigen::Index>(j)) = m.reshaped();
    }

    const double sign = direction == Direction::min ? 1.0 : -1.0;
    RotationSearch search(root_cols, rows, cols, cfg.measure, sign);

    OptResult best;
    bool have_best = false;
    for (int s = 0; s < cfg.starts; ++s) {
        Matrix start;
        if (s == 0) {
            start = Matrix::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
        } else {
            auto rng = seeded_rng(cfg.seed, static_cast<std::uint64_t>(s));
            start = random_unitary(r, rng);
        }
        auto run = search.run(std::move(start), cfg.max_sweeps, cfg.tol_rel, direction == Direction::min);
        const double value = run.trace.back();
        if (!have_best || sign * value < sign * best.value) {
            have_best = true;
            best.value = value;
            best.unitary = std::move(run.unitary);
            best.trace = std::move(run.trace);
            best.converged = run.converged;
            best.best_start = s;
        }
    }

    if (max_unitarity_deviation(best.unitary) > 1e-10) throw NumericalError("optimize: accumulated rotation lost unitarity");
    best.direction = direction;
    best.bound_kind = direction == Direction::min ? BoundKind::upper_bound : BoundKind::lower_bound;
    best.decomposition = decomposition_from_unitary(roots, best.unitary);
    const double err = (best.decomposition.reconstruct() - rho.matrix()).norm();
    if (err > 1e-8) throw NumericalError("optimize: decomposition does not reconstruct the density operator");
    return best;
}

FlatnessStats flatness_scan(const DensityOperator& rho, const Bipartition& cut, std::size_t samples, std::uint64_t seed,
                            PureMeasure measure, std::optional<std::size_t> size) {
    if (samples < 2) throw std::domain_error("flatness_scan: at least two samples required");
    const RootSet roots = root_set(rho);
    const std::size_t r = size.value_or(default_decomposition_size(roots.rank()));
    if (r < roots.rank()) throw std::domain_error("flatness_scan: decomposition size below rank");

    auto rng = seeded_rng(seed, 0);
    std::vector<double> values;
    values.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i)
        values.push_back(average_measure(decomposition_from_unitary(roots, random_unitary(r, rng)), cut, measure));

    FlatnessStats out;
    out.samples = samples;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(samples);
    for (double v : values) out.max_abs_dev = std::max(out.max_abs_dev, std::abs(v - out.mean));
    return out;
}

}  // namespace cren
