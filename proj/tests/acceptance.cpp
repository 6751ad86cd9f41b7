// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "cren/convexroof.hpp"
#include "cren/measures.hpp"
#include "cren/monogamy.hpp"
#include "cren/states.hpp"

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>
#include <string>

using namespace cren;
using namespace cren::testing;

namespace {

// Tracks the worst deviation seen against each tolerance.
class Check {
  public:
    void near(const std::string& what, double got, double want, double tol) {
        const double err = std::abs(got - want);
        worst(what, err, tol);
    }
    void at_most(const std::string& what, double value, double tol) { worst(what, value, tol); }
    void at_least(const std::string& what, double value, double bound) {
        if (!(value >= bound)) fail(what + " = " + fmt(value) + " below " + fmt(bound));
        floor_[what] = floor_.count(what) ? std::min(floor_[what], value) : value;
    }
    void truth(const std::string& what, bool ok) {
        if (!ok) fail(what);
    }

    bool ok() const { return failures_.empty(); }
    std::string summary() const {
        std::ostringstream os;
        const char* sep = "";
        for (const auto& [k, v] : max_) {
            os << sep << k << " max " << fmt(v.first) << " (tol " << fmt(v.second) << ")";
            sep = "; ";
        }
        for (const auto& [k, v] : floor_) {
            os << sep << k << " min " << fmt(v);
            sep = "; ";
        }
        for (const auto& f : failures_) {
            os << sep << "FAILED: " << f;
            sep = "; ";
        }
        return os.str();
    }

  private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    void worst(const std::string& what, double err, double tol) {
        auto& slot = max_[what];
        slot.first = std::max(slot.first, err);
        slot.second = tol;
        if (!(err <= tol)) fail(what + " deviation " + fmt(err) + " above " + fmt(tol));
    }
    void fail(const std::string& msg) {
        if (failures_.size() < 5) failures_.push_back(msg);
    }

    std::map<std::string, std::pair<double, double>> max_;
    std::map<std::string, double> floor_;
    std::vector<std::string> failures_;
};

const Bipartition kPairCut({0}, 2);

double roof(const DensityOperator& rho, PureMeasure m, Direction d = Direction::min, std::uint64_t seed = 0) {
    OptConfig cfg;
    cfg.measure = m;
    cfg.seed = seed;
    return optimize(rho, kPairCut, d, cfg).value;
}

void counterexample_ou(Check& c) {
    const PureState ou = ou_state();
    c.near("C^2 A|BC", std::pow(concurrence_pure(ou, Bipartition({0}, 3)), 2), 4.0 / 3.0, 1e-9);
    c.near("N A|BC", negativity_pure(ou, Bipartition({0}, 3)), 2.0, 1e-9);
    std::uint64_t seed = 1;
    for (const PartySet& keep : {PartySet{0, 1}, PartySet{0, 2}}) {
        const DensityOperator rho = partial_trace(ou, keep);
        c.near("pair C^2 (optimizer)", std::pow(roof(rho, PureMeasure::concurrence), 2), 1.0, 1e-3);
        c.near("pair CREN (optimizer)", roof(rho, PureMeasure::negativity), 1.0, 1e-6);
        c.at_most("flatness max_dev", flatness_scan(rho, kPairCut, 64, seed++).max_abs_dev, 1e-9);
    }
}

void counterexample_kim_sanders(Check& c) {
    const PureState ks = kim_sanders_state();
    c.near("C^2 A|BC", std::pow(concurrence_pure(ks, Bipartition({0}, 3)), 2), 12.0 / 9.0, 1e-9);
    c.near("N_c^2 A|BC", std::pow(negativity_pure(ks, Bipartition({0}, 3)), 2), 4.0, 1e-9);
    for (const PartySet& keep : {PartySet{0, 1}, PartySet{0, 2}}) {
        const DensityOperator rho = partial_trace(ks, keep);
        c.near("pair C^2 (optimizer)", std::pow(roof(rho, PureMeasure::concurrence), 2), 8.0 / 9.0, 1e-3);
        c.near("pair N_c^2 (optimizer)", std::pow(roof(rho, PureMeasure::negativity), 2), 8.0 / 9.0, 1e-3);
    }
}

void verdicts(Check& c) {
    c.truth("ckw Ou certified_violation", ckw_audit(ou_state(), 0).verdict == Verdict::certified_violation);
    c.truth("ckw Kim-Sanders certified_violation", ckw_audit(kim_sanders_state(), 0).verdict == Verdict::certified_violation);
    const AuditReport ou = cren_audit(ou_state(), 0);
    const AuditReport ks = cren_audit(kim_sanders_state(), 0);
    c.truth("cren Ou holds", ou.verdict == Verdict::holds);
    c.truth("cren Kim-Sanders holds", ks.verdict == Verdict::holds);
    c.near("cren residual Ou", ou.residual, 2.0, 1e-6);
    c.near("cren residual Kim-Sanders", ks.residual, 4.0 - 16.0 / 9.0, 1e-6);
}

void theorem_suite(Check& c) {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {3u, 4u})
        for (int trial = 0; trial < 100; ++trial) {
            const PureState psi = random_pure_state(DimensionProfile(std::vector<int>(n, 2)), rng);
            const AuditReport cren = cren_audit(psi, 0);
            const AuditReport ckw = ckw_audit(psi, 0);
            for (const auto* r : {&cren, &ckw})
                for (const auto& t : r->terms) c.truth("exact pair oracle", t.bound == BoundKind::exact);
            c.at_least("cren residual", cren.residual, -1e-6);
            c.at_least("ckw residual", ckw.residual, -1e-6);
            c.at_least("negativity residual", negativity_audit(psi, 0).residual, -1e-9);
            for (DualMeasure m : {DualMeasure::coa, DualMeasure::crenoa}) {
                const AuditReport d = dual_audit(psi, 0, m);
                c.truth("dual verdict holds", d.verdict == Verdict::holds || d.verdict == Verdict::saturated);
                c.at_least("dual slack (rhs - lhs)", -d.residual, -kTolSat);
            }
        }
}

void two_qubit_equivalence(Check& c) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const DensityOperator rho = random_density(DimensionProfile({2, 2}), 2 + static_cast<std::size_t>(trial % 3), rng);
        c.near("optimize(min) vs closed form", roof(rho, PureMeasure::negativity, Direction::min, static_cast<std::uint64_t>(trial)),
               wootters_concurrence_2q(rho), 1e-3);
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 3;
        const DimensionProfile p({d, d});
        // Schmidt rank 2 by construction: two orthonormal pairs
        const Vector a0 = random_vector(static_cast<std::size_t>(d), rng);
        Vector a1 = random_vector(static_cast<std::size_t>(d), rng);
        a1 = (a1 - a0 * a0.dot(a1)).normalized();
        const Vector b0 = random_vector(static_cast<std::size_t>(d), rng);
        Vector b1 = random_vector(static_cast<std::size_t>(d), rng);
        b1 = (b1 - b0 * b0.dot(b1)).normalized();
        const double l = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
        const Matrix m = std::sqrt(l) * a0 * b0.transpose() + std::sqrt(1.0 - l) * a1 * b1.transpose();
        const PureState psi(p, from_bipartite_matrix(p, m, kPairCut));
        c.truth("Schmidt rank 2", schmidt(psi, kPairCut).rank == 2);
        c.at_most("|N - C| rank 2", std::abs(negativity_pure(psi, kPairCut) - concurrence_pure(psi, kPairCut)), 1e-12);
    }
}

std::vector<WClassSpec> saturation_specs() {
    Matrix asym(3, 2);
    asym << Complex(0.5, 0.0), Complex(0.1, 0.3), Complex(0.0, 0.4), Complex(0.35, 0.0), Complex(0.2, -0.25), Complex(0.45, 0.1);
    Matrix four(4, 1);
    four << 0.3, Complex(0.5, 0.2), 0.6, Complex(0.1, -0.4);
    return {WClassSpec::symmetric_qubit(3), WClassSpec(asym / asym.norm()), WClassSpec(four / four.norm())};
}

void pcs_saturation(Check& c) {
    std::uint64_t seed = 0;
    for (const WClassSpec& w : saturation_specs())
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            std::optional<AnalyticWValues> first;
            std::optional<double> first_mean;
            for (double lambda : {0.0, 0.5, 1.0}) {
                const PCSSpec spec(w, p, lambda);
                const AnalyticWAudit a = analytic_w_audit(spec, std::nullopt, 16, ++seed);
                c.at_most("analytic residual", std::abs(a.values.residual()), 1e-12);
                c.truth("verdict saturated", a.report.verdict == Verdict::saturated);
                c.at_most("flatness max_dev", a.global_flatness.max_abs_dev, 1e-9);
                const double expect = 2.0 * p * std::sqrt(script_a(w).global * (1.0 - script_a(w).global));
                OptConfig cfg;
                cfg.seed = seed;
                c.near("optimizer global CREN", optimize(build_pcs_density(spec), Bipartition({0}, w.parties()), Direction::min, cfg).value, expect,
                       1e-3);
                if (!first) {
                    first = a.values;
                    first_mean = a.global_flatness.mean;
                    continue;
                }
                c.near("lambda invariance (global)", a.values.global_cren, first->global_cren, 1e-9);
                for (std::size_t i = 0; i < first->pair_cren.size(); ++i)
                    c.near("lambda invariance (pairs)", a.values.pair_cren[i], first->pair_cren[i], 1e-9);
                c.near("lambda invariance (flatness mean)", a.global_flatness.mean, *first_mean, 1e-9);
            }
        }
}

void partition_invariance(Check& c) {
    const WClassSpec w = WClassSpec::symmetric_qubit(4);
    for (std::size_t blocks : {2u, 3u})
        for (const auto& b : set_partitions(4, blocks)) {
            const PartitionSpec part(b, 4);
            const AnalyticWAudit a = analytic_w_audit(PCSSpec(w, 0.8, 0.5), part);
            c.at_most("coarse analytic residual", std::abs(a.report.residual), 1e-12);
            const WClassSpec coarse = coarse_grain(w, part);
            for (double p : {1.0, 0.6}) {
                const PureState fine = build_superposition(w, p);
                const PureState back = embed_coarse_state(w, part, build_superposition(coarse, p));
                c.near("coarse-state fidelity", std::norm(Complex(fine.amplitudes().dot(back.amplitudes()))), 1.0, 1e-10);
            }
        }
}

void kernel_properties(Check& c) {
    std::mt19937_64 rng(99);
    const std::vector<DimensionProfile> mixed_profiles{DimensionProfile({2, 2}), DimensionProfile({2, 3}), DimensionProfile({3, 3})};
    const std::vector<DimensionProfile> pure_profiles{DimensionProfile({2, 3}), DimensionProfile({2, 2, 2}), DimensionProfile({3, 2, 4}),
                                                      DimensionProfile({4, 4, 4})};
    for (int trial = 0; trial < 50; ++trial) {
        const DimensionProfile& pp = pure_profiles[static_cast<std::size_t>(trial) % pure_profiles.size()];
        const PureState psi = random_state(pp, rng);
        c.at_most("three-path negativity", negativity_paths(psi, Bipartition({0}, pp.parties())).max_deviation, 1e-9);

        const DimensionProfile& mp = mixed_profiles[static_cast<std::size_t>(trial) % mixed_profiles.size()];
        const DensityOperator rho = random_density(mp, 1 + static_cast<std::size_t>(trial % 4), rng);
        const Eigen::VectorXd ea = sorted_eigenvalues(partial_transpose(rho, {0}));
        const Eigen::VectorXd eb = sorted_eigenvalues(partial_transpose(rho, {1}));
        c.at_most("PT side symmetry", (ea - eb).cwiseAbs().maxCoeff(), 1e-9);

        const double n = negativity_mixed(rho, kPairCut);
        OptConfig cfg;
        cfg.starts = 4;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const OptResult lo = optimize(rho, kPairCut, Direction::min, cfg);
        c.at_most("optimizer reconstruction", (lo.decomposition.reconstruct() - rho.matrix()).norm(), 1e-8);
        c.at_least("optimize(min) - N", lo.value - n, -1e-9);
        const RootSet roots = root_set(rho);
        for (int k = 0; k < 4; ++k) {
            const Decomposition dec = decomposition_from_unitary(roots, random_unitary(lo.unitary.rows(), rng));
            c.at_most("decomposition reconstruction", (dec.reconstruct() - rho.matrix()).norm(), 1e-8);
            const double avg = average_negativity(dec, kPairCut);
            c.at_least("sampled average - N", avg - n, -1e-12);
            c.at_least("sampled average - optimize(min)", avg - lo.value, -1e-12);
        }
    }
}

void channel_identity(Check& c) {
    for (const WClassSpec& w : saturation_specs())
        for (double p : {0.1, 0.5, 0.9}) {
            const PureState psi = build_superposition(w, p);
            for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const Matrix diff = apply_phase_damping(psi, lambda).matrix() - build_pcs_density(PCSSpec(w, p, lambda)).matrix();
                c.at_most("elementwise deviation", diff.cwiseAbs().maxCoeff(), 1e-12);
            }
        }
}

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    status = pclose(pipe);
    return out;
}

void determinism(Check& c) {
    const std::string cli = CREN_CLI_PATH;
    for (const std::string args : {" audit --family kim_sanders --inequality all --seed 7 --format csv",
                                   " hunt --profile 3,2,2 --trials 12 --seed 5 --format csv 2>/dev/null",
                                   " measure --family ou --trace-out 2 --measure all --seed 3 --format csv"}) {
        int s1 = 0, s2 = 0;
        const std::string a = capture(cli + args, s1);
        const std::string b = capture(cli + args, s2);
        c.truth("exit status 0", s1 == 0 && s2 == 0);
        c.truth("nonempty output", !a.empty());
        c.truth("byte-identical CSV:" + args, a == b);
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria{
        {1, "Ou counterexample reproduction", counterexample_ou},
        {2, "Kim-Sanders counterexample reproduction", counterexample_kim_sanders},
        {3, "audit verdicts on both counterexamples", verdicts},
        {4, "monogamy property suite on random 3- and 4-qubit states", theorem_suite},
        {5, "two-qubit roof equivalence and rank-2 pure equivalence", two_qubit_equivalence},
        {6, "partially coherent W-class saturation grid", pcs_saturation},
        {7, "partition invariance for the 4-party W state", partition_invariance},
        {8, "kernel properties on a 50-state corpus", kernel_properties},
        {9, "phase damping reproduces the partially coherent family", channel_identity},
        {10, "CLI determinism", determinism},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.truth(std::string("exception: ") + e.what(), false);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!c.ok()) ++failed;
        std::printf("%s criterion %2d: %s [%.1fs] -- %s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.title, secs, c.summary().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
