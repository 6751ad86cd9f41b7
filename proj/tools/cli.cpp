#include "cli.hpp"

#include "cren/convexroof.hpp"
#include "cren/measures.hpp"
#include "cren/monogamy.hpp"
#include "cren/report.hpp"
#include "cren/spec_file.hpp"
#include "cren/states.hpp"

#include "CLI11.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace cren::cli {

namespace {

struct StateArgs {
    std::string spec;
    std::string family;
    int d = 0;
    int n = 0;
    std::string trace_out;
};

struct OutputArgs {
    std::string format = "table";
    std::string output;
};

struct OptArgs {
    std::size_t size = 0;  // 0: default
    int starts = 8;
    int sweeps = 200;
    double tol_rel = 1e-10;
    std::uint64_t seed = 0;

    OptConfig config() const {
        OptConfig c;
        if (size > 0) c.size = size;
        c.starts = starts;
        c.max_sweeps = sweeps;
        c.tol_rel = tol_rel;
        c.seed = seed;
        return c;
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    }
    return out;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": '" + s + "' is not an integer");
    }
    if (pos != s.size() || v < 0) throw std::invalid_argument(what + ": '" + s + "' is not a nonnegative integer");
    return static_cast<std::size_t>(v);
}

/// 1-based party labels, "2,3" or "23" (digit form only when n <= 9).
std::vector<std::size_t> parse_parties(const std::string& s, std::size_t n, const std::string& what) {
    std::vector<std::string> items;
    if (s.find(',') != std::string::npos || n > 9) {
        items = split(s, ',');
    } else {
        for (char c : s)
            if (c != ' ') items.emplace_back(1, c);
    }
    if (items.empty()) throw std::invalid_argument(what + ": no parties given");
    std::vector<std::size_t> out;
    for (const auto& item : items) {
        const std::size_t p = parse_count(item, what);
        if (p < 1 || p > n) throw std::invalid_argument(what + ": party " + item + " out of range 1.." + std::to_string(n));
        if (std::find(out.begin(), out.end(), p - 1) != out.end()) throw std::invalid_argument(what + ": party " + item + " repeated");
        out.push_back(p - 1);
    }
    return out;
}

std::vector<double> parse_grid(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": '" + item + "' is not a number");
        }
        if (pos != item.size()) throw std::invalid_argument(what + ": '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(what + ": empty grid");
    return out;
}

/// "1|23" or "1|2,3".
PartitionSpec parse_partition(const std::string& s, std::size_t n) {
    std::vector<PartySet> blocks;
    for (const auto& block : split(s, '|')) blocks.push_back(parse_parties(block, n, "--partition"));
    return PartitionSpec(std::move(blocks), n);
}

std::string party_label(const PartySet& parties) {
    std::string out;
    for (std::size_t i = 0; i < parties.size(); ++i) out += (i ? "," : "") + std::to_string(parties[i] + 1);
    return out;
}

// ---------------------------------------------------------------------------
// State loading

struct LoadedState {
    StateInput input;
    std::string label;
    PartySet kept;  // original parties still present, ascending
};

StateInput family_state(const StateArgs& a) {
    StateInput in;
    in.kind = a.family;
    const int d = a.d > 0 ? a.d : 2;
    const std::size_t n = a.n > 0 ? static_cast<std::size_t>(a.n) : 3;
    if (a.family == "ou") {
        in.pure = ou_state();
    } else if (a.family == "kim_sanders") {
        in.pure = kim_sanders_state();
    } else if (a.family == "max_entangled") {
        in.pure = maximally_entangled(d);
    } else if (a.family == "bell") {
        in.pure = maximally_entangled(2);
    } else if (a.family == "ghz") {
        in.pure = ghz_state(n, d);
    } else if (a.family == "w") {
        in.w = WClassSpec::symmetric_qubit(n);
        in.pure = build_w_state(*in.w);
    } else {
        throw std::invalid_argument("--family: unknown family '" + a.family + "' (ou, kim_sanders, max_entangled, bell, ghz, w)");
    }
    return in;
}

LoadedState load_state(const StateArgs& a) {
    if (a.spec.empty() == a.family.empty()) throw std::invalid_argument("exactly one of --spec and --family is required");
    LoadedState s{a.spec.empty() ? family_state(a) : load_state_spec(a.spec), a.spec.empty() ? a.family : a.spec, {}};
    const std::size_t n = s.input.profile().parties();
    for (std::size_t i = 0; i < n; ++i) s.kept.push_back(i);
    if (!a.trace_out.empty()) {
        const auto gone = parse_parties(a.trace_out, n, "--trace-out");
        std::erase_if(s.kept, [&](std::size_t p) { return std::find(gone.begin(), gone.end(), p) != gone.end(); });
        if (s.kept.empty()) throw std::invalid_argument("--trace-out: cannot trace out every party");
        DensityOperator reduced = s.input.pure ? partial_trace(*s.input.pure, s.kept) : partial_trace(*s.input.mixed, s.kept);
        s.input.pure.reset();
        s.input.mixed = std::move(reduced);
        s.input.w.reset();
        s.input.pcs.reset();
    }
    return s;
}

/// Cut over original labels, mapped onto the reduced register.
Bipartition resolve_cut(const LoadedState& s, const std::string& cut_text, std::size_t original_parties) {
    const std::size_t n = s.kept.size();
    if (n < 2) throw std::invalid_argument("--cut: a bipartition needs at least two parties");
    if (cut_text.empty()) return Bipartition({0}, n);
    PartySet side;
    for (std::size_t p : parse_parties(cut_text, original_parties, "--cut")) {
        const auto it = std::find(s.kept.begin(), s.kept.end(), p);
        if (it == s.kept.end()) throw std::invalid_argument("--cut: party " + std::to_string(p + 1) + " was traced out");
        side.push_back(static_cast<std::size_t>(it - s.kept.begin()));
    }
    return Bipartition(std::move(side), n);
}

PartySet original_labels(const LoadedState& s, const PartySet& local) {
    PartySet out;
    for (std::size_t p : local) out.push_back(s.kept[p]);
    return out;
}

std::size_t original_party_count(const StateArgs& a, const LoadedState& s) {
    if (a.trace_out.empty()) return s.kept.size();
    return a.spec.empty() ? family_state(a).profile().parties() : load_state_spec(a.spec).profile().parties();
}

// ---------------------------------------------------------------------------
// Output

class Sink {
  public:
    Sink(const OutputArgs& o, std::ostream& out) : format_(parse_format(o.format)), out_(&out) {
        if (!o.output.empty()) {
            file_.open(o.output, std::ios::binary);
            if (!file_) throw std::invalid_argument("--output: cannot open '" + o.output + "'");
            out_ = &file_;
        }
    }
    void emit(const Table& t) { t.write(*out_, format_); }
    bool to_file() const { return file_.is_open(); }
    ReportFormat format() const { return format_; }

  private:
    ReportFormat format_;
    std::ofstream file_;
    std::ostream* out_;
};

void add_state_options(CLI::App* cmd, StateArgs& a) {
    cmd->add_option("--spec", a.spec, "State-spec file (JSON)");
    cmd->add_option("--family", a.family, "Built-in state: ou, kim_sanders, max_entangled, bell, ghz, w");
    cmd->add_option("--d", a.d, "Local dimension for max_entangled and ghz");
    cmd->add_option("--n", a.n, "Party count for ghz and w");
}

void add_output_options(CLI::App* cmd, OutputArgs& o) {
    cmd->add_option("--format", o.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--output", o.output, "Write the report to this file");
}

void add_opt_options(CLI::App* cmd, OptArgs& o) {
    cmd->add_option("--size", o.size, "Decomposition size (default min(rank^2, 16), at least rank)");
    cmd->add_option("--starts", o.starts, "Optimizer starts")->check(CLI::PositiveNumber);
    cmd->add_option("--sweeps", o.sweeps, "Maximum sweeps per start")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol-rel", o.tol_rel, "Relative convergence tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Random seed");
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_state(const StateArgs& sa, const std::string& cut_text, const OutputArgs& oa, std::ostream& out) {
    const LoadedState s = load_state(sa);
    Sink sink(oa, out);
    Table t;
    t.columns = {"field", "value"};
    const auto& profile = s.input.profile();
    t.add({str("source"), str(s.label)});
    t.add({str("kind"), str(s.input.kind)});
    t.add({str("profile"), str(profile.to_string())});
    t.add({str("parties"), str(party_label(s.kept))});
    t.add({str("type"), str(s.input.is_pure() ? "pure" : "mixed")});
    const DensityOperator rho = s.input.density();
    if (s.input.is_pure()) {
        t.add({str("norm"), num(s.input.pure->amplitudes().norm())});
    } else {
        t.add({str("trace"), num(rho.matrix().trace().real())});
    }
    const Spectrum spectrum = spectral_decomposition(rho);
    t.add({str("rank"), num(spectrum.rank)});
    t.add({str("purity"), num(rho.matrix().cwiseAbs2().sum())});
    if (!s.input.is_pure()) {
        std::string eig;
        for (std::size_t i = 0; i < spectrum.rank; ++i) eig += (i ? ";" : "") + format_number(spectrum.pairs[i].value);
        t.add({str("eigenvalues"), str(eig)});
    }
    if (s.kept.size() >= 2) {
        const Bipartition cut = resolve_cut(s, cut_text, original_party_count(sa, s));
        t.add({str("cut"), str(party_label(original_labels(s, cut.side_a())) + "|" + party_label(original_labels(s, cut.side_b())))});
        if (s.input.is_pure()) {
            const SchmidtData sd = schmidt(*s.input.pure, cut);
            std::string coeffs;
            for (std::size_t i = 0; i < sd.rank; ++i) coeffs += (i ? ";" : "") + format_number(sd.coefficients[i]);
            t.add({str("schmidt_rank"), num(sd.rank)});
            t.add({str("schmidt_coefficients"), str(coeffs)});
        } else {
            const DensityOperator marginal = partial_trace(rho, cut.side_a());
            const Spectrum ms = spectral_decomposition(marginal);
            std::string eig;
            for (std::size_t i = 0; i < ms.rank; ++i) eig += (i ? ";" : "") + format_number(ms.pairs[i].value);
            t.add({str("marginal_eigenvalues"), str(eig)});
        }
    }
    sink.emit(t);
}

MeasureValue measure_one(const StateInput& in, const Bipartition& cut, MeasureKind kind, const OptConfig& base) {
    MeasureValue v{kind, 0.0, cut.side_a(), MeasureMethod::closed_form, BoundKind::exact};
    if (in.is_pure()) {
        // Every roof of a pure state is the pure-state value.
        const bool conc = kind == MeasureKind::concurrence || kind == MeasureKind::coa;
        v.value = conc ? concurrence_pure(*in.pure, cut) : negativity_pure(*in.pure, cut);
        return v;
    }
    const DensityOperator& rho = *in.mixed;
    const bool two_qubits = rho.profile() == DimensionProfile({2, 2});
    OptConfig cfg = base;
    switch (kind) {
        case MeasureKind::negativity:
            v.value = negativity_mixed(rho, cut);
            v.method = MeasureMethod::trace_norm;
            return v;
        case MeasureKind::concurrence:
        case MeasureKind::cren:
            if (two_qubits) {
                v.value = wootters_concurrence_2q(rho);
                return v;
            }
            cfg.measure = kind == MeasureKind::concurrence ? PureMeasure::concurrence : PureMeasure::negativity;
            v.value = optimize(rho, cut, Direction::min, cfg).value;
            v.method = MeasureMethod::optimizer;
            v.bound = BoundKind::upper_bound;
            return v;
        case MeasureKind::coa:
        case MeasureKind::crenoa:
            cfg.measure = kind == MeasureKind::coa ? PureMeasure::concurrence : PureMeasure::negativity;
            v.value = optimize(rho, cut, Direction::max, cfg).value;
            v.method = MeasureMethod::optimizer;
            v.bound = BoundKind::lower_bound;
            return v;
    }
    return v;
}

MeasureKind parse_measure(const std::string& s) {
    if (s == "concurrence") return MeasureKind::concurrence;
    if (s == "negativity") return MeasureKind::negativity;
    if (s == "cren") return MeasureKind::cren;
    if (s == "crenoa") return MeasureKind::crenoa;
    if (s == "coa") return MeasureKind::coa;
    throw std::invalid_argument("--measure: unknown measure '" + s + "' (concurrence, negativity, cren, crenoa, coa)");
}

void cmd_measure(const StateArgs& sa, const std::string& cut_text, const std::string& measures, const OptArgs& opt,
                 const OutputArgs& oa, std::ostream& out) {
    const LoadedState s = load_state(sa);
    const Bipartition cut = resolve_cut(s, cut_text, original_party_count(sa, s));
    std::vector<MeasureKind> kinds;
    for (const auto& m : split(measures == "all" ? "concurrence,negativity,cren,crenoa,coa" : measures, ',')) kinds.push_back(parse_measure(m));
    const OptConfig cfg = opt.config();
    Sink sink(oa, out);
    Table t;
    t.columns = {"measure", "side_a", "value", "method", "bound"};
    for (MeasureKind k : kinds) {
        const MeasureValue v = measure_one(s.input, cut, k, cfg);
        t.add({str(std::string(to_string(v.kind))), str(party_label(original_labels(s, v.side_a))), num(v.value),
               str(std::string(to_string(v.method))), str(std::string(to_string(v.bound)))});
    }
    sink.emit(t);
}

void cmd_audit(const StateArgs& sa, std::size_t focus, const std::string& inequalities, const std::string& state_id,
               const OptArgs& opt, const OutputArgs& oa, std::ostream& out) {
    const LoadedState s = load_state(sa);
    if (!s.input.is_pure()) throw std::invalid_argument("audit: monogamy audits need a pure state, got a mixed one");
    const PureState& psi = *s.input.pure;
    const std::size_t n = psi.profile().parties();
    if (n < 2) throw std::invalid_argument("audit: at least two parties required");
    if (focus < 1 || focus > n) throw std::invalid_argument("--focus: party out of range 1.." + std::to_string(n));
    AuditOptions o;
    o.opt = opt.config();
    o.state_id = state_id.empty() ? s.label : state_id;
    const std::string list = inequalities == "all" ? "ckw,cren,negativity,dual_coa,dual_crenoa" : inequalities;
    std::vector<AuditReport> reports;
    for (const auto& name : split(list, ',')) {
        if (name == "ckw") {
            reports.push_back(ckw_audit(psi, focus - 1, o));
        } else if (name == "cren") {
            reports.push_back(cren_audit(psi, focus - 1, o));
        } else if (name == "negativity") {
            reports.push_back(negativity_audit(psi, focus - 1, o));
        } else if (name == "dual_coa") {
            reports.push_back(dual_audit(psi, focus - 1, DualMeasure::coa, o));
        } else if (name == "dual_crenoa") {
            reports.push_back(dual_audit(psi, focus - 1, DualMeasure::crenoa, o));
        } else {
            throw std::invalid_argument("--inequality: unknown inequality '" + name + "' (ckw, cren, negativity, dual_coa, dual_crenoa, all)");
        }
    }
    Sink sink(oa, out);
    sink.emit(audit_table(reports));
}

void cmd_sweep(const StateArgs& sa, const std::string& p_grid, const std::string& lambda_grid, const std::string& partition_text,
               std::size_t samples, std::uint64_t seed, const OutputArgs& oa, std::ostream& out) {
    std::optional<WClassSpec> w;
    if (!sa.spec.empty() && sa.family.empty()) {
        StateInput in = load_state_spec(sa.spec);
        if (!in.w) throw std::invalid_argument("sweep: --spec must be a w_class or pcs document");
        w = *in.w;
    } else if (sa.spec.empty() && sa.family == "w") {
        w = WClassSpec::symmetric_qubit(sa.n > 0 ? static_cast<std::size_t>(sa.n) : 3);
    } else {
        throw std::invalid_argument("sweep: give either --spec (w_class or pcs) or --family w");
    }
    const std::vector<double> ps = parse_grid(p_grid, "--p");
    const std::vector<double> lambdas = parse_grid(lambda_grid, "--lambda");
    std::optional<PartitionSpec> partition;
    if (!partition_text.empty()) partition = parse_partition(partition_text, w->parties());
    const std::size_t blocks = partition ? partition->size() : w->parties();

    Table t;
    t.columns = {"p", "lambda", "global_cren"};
    for (std::size_t b = 2; b <= blocks; ++b) t.columns.push_back("pair_cren_" + std::to_string(b));
    for (const char* c : {"residual", "flatness_mean", "flatness_max_dev", "verdict"}) t.columns.emplace_back(c);
    for (double p : ps)
        for (double lambda : lambdas) {
            const AnalyticWAudit a = analytic_w_audit(PCSSpec(*w, p, lambda), partition, samples, seed);
            std::vector<Cell> row{num(p), num(lambda), num(a.values.global_cren)};
            for (double v : a.values.pair_cren) row.push_back(num(v));
            row.push_back(num(a.report.residual));
            row.push_back(num(a.global_flatness.mean));
            row.push_back(num(a.global_flatness.max_abs_dev));
            row.push_back(str(std::string(to_string(a.report.verdict))));
            t.add(std::move(row));
        }
    Sink sink(oa, out);
    sink.emit(t);
}

std::size_t worker_count() {
    if (const char* env = std::getenv("CREN_THREADS")) {
        const std::size_t v = parse_count(env, "CREN_THREADS");
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void cmd_hunt(const std::string& profile_text, std::size_t trials, const OptArgs& opt, const OutputArgs& oa, std::ostream& out,
              std::ostream& err) {
    std::vector<int> dims;
    for (const auto& item : split(profile_text, ',')) dims.push_back(static_cast<int>(parse_count(item, "--profile")));
    const DimensionProfile profile(std::move(dims));
    AuditOptions o;
    o.opt = opt.config();
    const auto findings = hunt(profile, trials, opt.seed, o, worker_count());
    const auto certified = static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [](const AuditReport& r) { return r.verdict == Verdict::certified_violation; }));
    Sink sink(oa, out);
    sink.emit(audit_table(findings));
    std::ostream& summary = sink.to_file() || sink.format() == ReportFormat::table ? out : err;
    summary << "hunt " << profile.to_string() << ": trials " << trials << ", candidates " << findings.size() - certified << ", certified "
            << certified << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement measures and monogamy audits for multipartite qudit states", "cren"};
    app.require_subcommand(1);

    StateArgs sa;
    OutputArgs oa;
    OptArgs opt;
    std::string cut;

    auto* state = app.add_subcommand("state", "Summarize a state and its Schmidt data across a cut");
    add_state_options(state, sa);
    state->add_option("--trace-out", sa.trace_out, "Parties to trace out, e.g. 3 or 2,3");
    state->add_option("--cut", cut, "Parties on side A, e.g. 1 or 1,2 (default: first party)");
    add_output_options(state, oa);

    std::string measures = "concurrence,negativity";
    auto* measure = app.add_subcommand("measure", "Compute entanglement measures across a cut");
    add_state_options(measure, sa);
    measure->add_option("--trace-out", sa.trace_out, "Parties to trace out, e.g. 3 or 2,3");
    measure->add_option("--cut", cut, "Parties on side A (default: first remaining party)");
    measure->add_option("--measure", measures, "Comma list of concurrence, negativity, cren, crenoa, coa, or all");
    add_opt_options(measure, opt);
    add_output_options(measure, oa);

    std::size_t focus = 1;
    std::string inequalities = "ckw,cren,negativity";
    std::string state_id;
    auto* audit = app.add_subcommand("audit", "Audit monogamy inequalities for one focus party");
    add_state_options(audit, sa);
    audit->add_option("--focus", focus, "Focus party (1-based)");
    audit->add_option("--inequality", inequalities, "Comma list of ckw, cren, negativity, dual_coa, dual_crenoa, or all");
    audit->add_option("--state-id", state_id, "Label for the report rows");
    add_opt_options(audit, opt);
    add_output_options(audit, oa);

    std::string p_grid = "0.5", lambda_grid = "0,0.5,1", partition;
    std::size_t samples = 16;
    auto* sweep = app.add_subcommand("sweep", "Closed-form CREN values of the partially coherent W-class family over a (p, lambda) grid");
    sweep->add_option("--spec", sa.spec, "w_class or pcs state-spec file");
    sweep->add_option("--family", sa.family, "Built-in W family: w");
    sweep->add_option("--n", sa.n, "Party count for --family w");
    sweep->add_option("--p", p_grid, "Comma list of p values");
    sweep->add_option("--lambda", lambda_grid, "Comma list of lambda values");
    sweep->add_option("--partition", partition, "Blocks separated by '|', e.g. 1|23 or 1|2,3");
    sweep->add_option("--flatness-samples", samples, "Random decompositions per flatness check")->check(CLI::Range(2, 100000));
    sweep->add_option("--seed", opt.seed, "Random seed");
    add_output_options(sweep, oa);

    std::string profile;
    std::size_t trials = 100;
    auto* hunt_cmd = app.add_subcommand("hunt", "Search random pure states for CREN monogamy violations");
    hunt_cmd->add_option("--profile", profile, "Local dimensions, e.g. 3,2,2")->required();
    hunt_cmd->add_option("--trials", trials, "Number of random states");
    add_opt_options(hunt_cmd, opt);
    add_output_options(hunt_cmd, oa);

    std::vector<std::string> argv_store{"cren"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*state) {
            cmd_state(sa, cut, oa, out);
        } else if (*measure) {
            cmd_measure(sa, cut, measures, opt, oa, out);
        } else if (*audit) {
            cmd_audit(sa, focus, inequalities, state_id, opt, oa, out);
        } else if (*sweep) {
            cmd_sweep(sa, p_grid, lambda_grid, partition, samples, opt.seed, oa, out);
        } else if (*hunt_cmd) {
            cmd_hunt(profile, trials, opt, oa, out, err);
        }
    } catch (const NumericalError& e) {
        err << "cren: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::logic_error& e) {
        err << "cren: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "cren: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace cren::cli
