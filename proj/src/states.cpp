#include "cren/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cren {

namespace {

Vector basis_vector(std::size_t dim, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

// Index of the product state with `level` on `party` and |0⟩ elsewhere.
std::size_t excitation_index(const DimensionProfile& profile, std::size_t party, int level) {
    return static_cast<std::size_t>(level) * profile.stride(party);
}

// Single-excitation part of |W⟩ supported on the ordered pair (first, second).
Vector pair_excitation_vector(const WClassSpec& w, std::size_t first, std::size_t second) {
    const int d = w.local_dim();
    const DimensionProfile pair({d, d});
    Vector v = Vector::Zero(d * d);
    for (int k = 1; k < d; ++k) {
        v(static_cast<Eigen::Index>(excitation_index(pair, 0, k))) += w.coefficient(first, k);
        v(static_cast<Eigen::Index>(excitation_index(pair, 1, k))) += w.coefficient(second, k);
    }
    return v;
}

}  // namespace

// --------------------------- specs ------------------------------------------

WClassSpec::WClassSpec(Matrix coefficients) : a_(std::move(coefficients)) {
    if (a_.rows() < 2) throw std::domain_error("WClassSpec: at least two parties required");
    if (a_.cols() < 1) throw std::domain_error("WClassSpec: local dimension must be >= 2");
    if (!a_.allFinite()) throw std::domain_error("WClassSpec: non-finite coefficient");
    const double norm_sq = a_.squaredNorm();
    if (std::abs(norm_sq - 1.0) > kRenormalizeTol) {
        std::ostringstream os;
        os << "WClassSpec: coefficients not normalized (sum |a|^2 = " << norm_sq << ")";
        throw std::domain_error(os.str());
    }
    a_ /= std::sqrt(norm_sq);
}

WClassSpec WClassSpec::symmetric_qubit(std::size_t n) {
    return WClassSpec(Matrix::Constant(static_cast<Eigen::Index>(n), 1, 1.0 / std::sqrt(static_cast<double>(n))));
}

DimensionProfile WClassSpec::profile() const {
    return DimensionProfile(std::vector<int>(parties(), local_dim()));
}

PCSSpec::PCSSpec(WClassSpec w_in, double p_in, double lambda_in) : w(std::move(w_in)), p(p_in), lambda(lambda_in) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("PCSSpec: p must lie in [0, 1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("PCSSpec: lambda must lie in [0, 1]");
}

ScriptA script_a(const WClassSpec& spec, std::size_t focus) {
    if (focus >= spec.parties()) throw std::domain_error("script_a: focus party out of range");
    ScriptA out;
    out.focus = focus;
    out.global = 1.0 - spec.party_weight(focus);
    out.pair.resize(spec.parties());
    for (std::size_t i = 0; i < spec.parties(); ++i)
        out.pair[i] = (i == focus) ? out.global : out.global - spec.party_weight(i);
    return out;
}

PartitionSpec::PartitionSpec(std::vector<PartySet> blocks, std::size_t parties) : parties_(parties) {
    if (blocks.empty()) throw std::domain_error("PartitionSpec: no blocks");
    std::vector<int> seen(parties, 0);
    for (auto& b : blocks) {
        if (b.empty()) throw std::domain_error("PartitionSpec: empty block");
        b = normalize_party_set(std::move(b), parties, "PartitionSpec");
        for (auto p : b)
            if (seen[p]++) throw std::domain_error("PartitionSpec: blocks overlap");
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::domain_error("PartitionSpec: blocks do not cover every party");
    blocks_ = std::move(blocks);
}

PartitionSpec PartitionSpec::singletons(std::size_t parties) {
    std::vector<PartySet> blocks;
    for (std::size_t p = 0; p < parties; ++p) blocks.push_back({p});
    return PartitionSpec(std::move(blocks), parties);
}

// --------------------------- builders ---------------------------------------

PureState build_w_state(const WClassSpec& spec) {
    const DimensionProfile profile = spec.profile();
    Vector v = Vector::Zero(static_cast<Eigen::Index>(profile.total()));
    for (std::size_t j = 0; j < spec.parties(); ++j)
        for (int i = 1; i < spec.local_dim(); ++i)
            v(static_cast<Eigen::Index>(excitation_index(profile, j, i))) = spec.coefficient(j, i);
    return PureState(profile, std::move(v));
}

PureState build_superposition(const WClassSpec& spec, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("build_superposition: p must lie in [0, 1]");
    const PureState w = build_w_state(spec);
    Vector v = std::sqrt(p) * w.amplitudes();
    v(0) += std::sqrt(1.0 - p);
    return PureState(w.profile(), std::move(v));
}

DensityOperator build_pcs_density(const PCSSpec& spec) {
    const PureState w = build_w_state(spec.w);
    const Vector& wv = w.amplitudes();
    const Vector vac = basis_vector(w.size(), 0);
    const double coherence = spec.lambda * std::sqrt(spec.p * (1.0 - spec.p));
    Matrix rho = spec.p * wv * wv.adjoint() + (1.0 - spec.p) * vac * vac.adjoint() +
                 coherence * (wv * vac.adjoint() + vac * wv.adjoint());
    return DensityOperator(w.profile(), std::move(rho));
}

DensityOperator apply_phase_damping(const PureState& psi, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("apply_phase_damping: lambda must lie in [0, 1]");
    const auto n = static_cast<Eigen::Index>(psi.size());
    const Vector vac = basis_vector(psi.size(), 0);
    const Matrix vac_proj = vac * vac.adjoint();
    const Matrix id = Matrix::Identity(n, n);
    const std::vector<Matrix> kraus = {
        std::sqrt(lambda) * id,
        std::sqrt(1.0 - lambda) * (id - vac_proj),
        std::sqrt(1.0 - lambda) * vac_proj,
    };
    const Matrix rho_in = psi.amplitudes() * psi.amplitudes().adjoint();
    Matrix rho = Matrix::Zero(n, n);
    for (const auto& e : kraus) rho += e * rho_in * e.adjoint();
    return DensityOperator(psi.profile(), std::move(rho));
}

PureState ou_state() {
    const DimensionProfile profile({3, 3, 3});
    Vector v = Vector::Zero(27);
    const double c = 1.0 / std::sqrt(6.0);
    // Totally antisymmetric: sign of the permutation (a, b, c) of (0, 1, 2).
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}, {1, 0, 2}, {2, 0, 1}, {2, 1, 0}};
    const double signs[6] = {+1, -1, +1, -1, +1, -1};
    for (int k = 0; k < 6; ++k) v(static_cast<Eigen::Index>(profile.index(perms[k]))) = signs[k] * c;
    return PureState(profile, std::move(v));
}

PureState kim_sanders_state() {
    const DimensionProfile profile({3, 2, 2});
    Vector v = Vector::Zero(12);
    const double c = 1.0 / std::sqrt(6.0);
    const int d010[3] = {0, 1, 0}, d101[3] = {1, 0, 1}, d200[3] = {2, 0, 0}, d211[3] = {2, 1, 1};
    v(static_cast<Eigen::Index>(profile.index(d010))) = std::sqrt(2.0) * c;
    v(static_cast<Eigen::Index>(profile.index(d101))) = std::sqrt(2.0) * c;
    v(static_cast<Eigen::Index>(profile.index(d200))) = c;
    v(static_cast<Eigen::Index>(profile.index(d211))) = c;
    return PureState(profile, std::move(v));
}

PureState maximally_entangled(int d) {
    if (d < 2) throw std::domain_error("maximally_entangled: d must be >= 2");
    Vector v = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return PureState(DimensionProfile({d, d}), std::move(v));
}

PureState ghz_state(std::size_t n, int d) {
    if (n < 2) throw std::domain_error("ghz_state: at least two parties required");
    const DimensionProfile profile(std::vector<int>(n, d));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(profile.total()));
    for (int i = 0; i < d; ++i) {
        const std::vector<int> digits(n, i);
        v(static_cast<Eigen::Index>(profile.index(digits))) = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return PureState(profile, std::move(v));
}

// --------------------------- coarse graining --------------------------------

WClassSpec coarse_grain(const WClassSpec& spec, const PartitionSpec& partition) {
    if (partition.parties() != spec.parties()) throw std::domain_error("coarse_grain: partition does not match party count");
    const int levels = spec.local_dim() - 1;
    Matrix merged = Matrix::Zero(static_cast<Eigen::Index>(partition.size()), levels);
    for (std::size_t s = 0; s < partition.size(); ++s)
        for (int i = 1; i <= levels; ++i) {
            double q = 0.0;
            for (auto j : partition.blocks()[s]) q += std::norm(spec.coefficient(j, i));
            merged(static_cast<Eigen::Index>(s), i - 1) = std::sqrt(q);
        }
    return WClassSpec(std::move(merged));
}

PureState embed_coarse_state(const WClassSpec& spec, const PartitionSpec& partition, const PureState& coarse) {
    if (partition.parties() != spec.parties()) throw std::domain_error("embed_coarse_state: partition does not match party count");
    const int d = spec.local_dim();
    const std::size_t m = partition.size();
    if (coarse.profile() != DimensionProfile(std::vector<int>(m, d)))
        throw std::domain_error("embed_coarse_state: coarse state profile mismatch");

    // Per-block isometry columns: level 0 -> |0…0⟩, level i -> normalized x̃_{si}.
    std::vector<Matrix> isometries;
    for (const auto& block : partition.blocks()) {
        const DimensionProfile block_profile(std::vector<int>(block.size(), d));
        Matrix v = Matrix::Zero(static_cast<Eigen::Index>(block_profile.total()), d);
        v(0, 0) = 1.0;
        for (int i = 1; i < d; ++i) {
            Vector x = Vector::Zero(static_cast<Eigen::Index>(block_profile.total()));
            for (std::size_t k = 0; k < block.size(); ++k)
                x(static_cast<Eigen::Index>(excitation_index(block_profile, k, i))) = spec.coefficient(block[k], i);
            const double q = x.norm();
            if (q > 0.0) {
                v.col(i) = x / q;
            } else {
                v(static_cast<Eigen::Index>(excitation_index(block_profile, 0, i)), i) = 1.0;
            }
        }
        isometries.push_back(std::move(v));
    }

    // Apply ⊗_s V_s, producing amplitudes in block-major party order.
    // Contract one coarse party at a time; acc is viewed as (done) × (d) × (rest).
    Vector acc = coarse.amplitudes();
    std::size_t rest = coarse.size();
    std::size_t done_dim = 1;
    for (std::size_t s = 0; s < m; ++s) {
        rest /= static_cast<std::size_t>(d);
        const Matrix& iso = isometries[s];
        const auto bd = iso.rows();
        Vector next(static_cast<Eigen::Index>(done_dim) * bd * static_cast<Eigen::Index>(rest));
        for (std::size_t pre = 0; pre < done_dim; ++pre)
            for (std::size_t post = 0; post < rest; ++post) {
                Vector col(d);
                for (int l = 0; l < d; ++l)
                    col(l) = acc(static_cast<Eigen::Index>((pre * static_cast<std::size_t>(d) + static_cast<std::size_t>(l)) * rest + post));
                const Vector mapped = iso * col;
                for (Eigen::Index r = 0; r < bd; ++r)
                    next((static_cast<Eigen::Index>(pre) * bd + r) * static_cast<Eigen::Index>(rest) + static_cast<Eigen::Index>(post)) = mapped(r);
            }
        acc = std::move(next);
        done_dim *= static_cast<std::size_t>(bd);
    }

    std::vector<std::size_t> block_major;
    for (const auto& block : partition.blocks()) block_major.insert(block_major.end(), block.begin(), block.end());
    const PureState grouped(DimensionProfile(std::vector<int>(spec.parties(), d)), std::move(acc));
    std::vector<std::size_t> inverse(block_major.size());
    for (std::size_t k = 0; k < block_major.size(); ++k) inverse[block_major[k]] = k;
    return permute_parties(grouped, inverse);
}

// --------------------------- pair marginal ----------------------------------

DensityOperator pair_marginal_analytic(const PCSSpec& spec, std::size_t party, std::size_t focus) {
    const std::size_t n = spec.w.parties();
    if (party >= n || focus >= n || party == focus) throw std::domain_error("pair_marginal_analytic: party index out of range");
    const std::size_t first = std::min(party, focus);
    const std::size_t second = std::max(party, focus);
    const int d = spec.w.local_dim();

    const Vector w = pair_excitation_vector(spec.w, first, second);
    const Vector vac = basis_vector(static_cast<std::size_t>(d * d), 0);
    // Excitations on traced parties all collapse onto |00⟩.
    const double traced_weight = 1.0 - spec.w.party_weight(first) - spec.w.party_weight(second);
    const double coherence = spec.lambda * std::sqrt(spec.p * (1.0 - spec.p));

    Matrix rho = spec.p * w * w.adjoint() + (spec.p * traced_weight + 1.0 - spec.p) * vac * vac.adjoint() +
                 coherence * (w * vac.adjoint() + vac * w.adjoint());
    return DensityOperator(DimensionProfile({d, d}), std::move(rho));
}

}  // namespace cren
