// Command-line front end: gate-set reports, invariant verification, RB
// simulation, decay fitting, budget tables, and depth-schedule comparisons.
// Exit codes: 0 success, 1 validation/usage error, 2 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <qrb/qrb.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace qrb;
using nlohmann::json;

namespace {

// ------------------------------------------------------------ small parsers

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const std::string& tok : split(s, ',')) {
        const std::string t = trim(tok);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": '" + t + "' is not an integer");
        }
        if (used != t.size()) throw std::invalid_argument(what + ": '" + t + "' is not an integer");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split(s, ',')) {
        const std::string t = trim(tok);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": '" + t + "' is not a number");
        }
        if (used != t.size()) throw std::invalid_argument(what + ": '" + t + "' is not a number");
        out.push_back(v);
    }
    return out;
}

ResidueVector parse_residue_list(const std::string& s, const std::string& what) {
    ResidueVector out;
    for (int v : parse_int_list(s, what)) {
        if (v < 0) throw std::invalid_argument(what + ": entries must be non-negative");
        out.push_back(static_cast<Residue>(v));
    }
    return out;
}

// Noise grammar, factors joined by '+' and applied left to right:
//   none
//   depolarizing:P | amplitude_damping:G | phase_damping:L
//   random_cptp:SEED[,rank=R][,mix=W|fidelity=F]
// `fidelity=F` dials the identity admixture so the channel's average gate
// fidelity lands exactly on F (resolved against the given dimension).
NoiseModel parse_noise(const std::string& text, int dim) {
    std::vector<NoiseModel> factors;
    for (const std::string& part : split(text, '+')) {
        const std::string spec = trim(part);
        if (spec.empty()) throw std::invalid_argument("noise: empty factor");
        const auto colon = spec.find(':');
        const std::string kind = trim(spec.substr(0, colon));
        const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
        auto one_number = [&](const char* name) {
            if (args.empty())
                throw std::invalid_argument(std::string("noise: ") + name + " needs a parameter");
            return parse_double_list(args, "noise")[0];
        };
        if (kind == "none") {
            factors.push_back(NoiseModel::none());
        } else if (kind == "depolarizing") {
            factors.push_back(NoiseModel::depolarizing(one_number("depolarizing")));
        } else if (kind == "amplitude_damping") {
            factors.push_back(NoiseModel::amplitude_damping(one_number("amplitude_damping")));
        } else if (kind == "phase_damping") {
            factors.push_back(NoiseModel::phase_damping(one_number("phase_damping")));
        } else if (kind == "random_cptp") {
            const std::vector<std::string> toks = split(args, ',');
            if (toks.empty() || trim(toks[0]).empty())
                throw std::invalid_argument("noise: random_cptp needs a seed");
            std::uint64_t seed = 0;
            try {
                seed = std::stoull(trim(toks[0]));
            } catch (const std::exception&) {
                throw std::invalid_argument("noise: random_cptp seed must be an integer");
            }
            int rank = 0;
            double mix = 0.0;
            std::optional<double> fidelity;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                const std::string t = trim(toks[i]);
                const auto eq = t.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("noise: expected key=value, got '" + t + "'");
                const std::string key = trim(t.substr(0, eq));
                const std::string val = trim(t.substr(eq + 1));
                if (key == "rank")
                    rank = parse_int_list(val, "noise rank")[0];
                else if (key == "mix")
                    mix = parse_double_list(val, "noise mix")[0];
                else if (key == "fidelity")
                    fidelity = parse_double_list(val, "noise fidelity")[0];
                else
                    throw std::invalid_argument("noise: unknown random_cptp key '" + key + "'");
            }
            if (fidelity) {
                const CMat raw =
                    kraus_to_super(compile_noise(NoiseModel::random_cptp(seed, rank), dim));
                const double f_raw = average_channel_fidelity(raw);
                if (*fidelity < f_raw || *fidelity > 1.0)
                    throw std::invalid_argument(
                        "noise: requested fidelity is below the raw channel's " +
                        std::to_string(f_raw));
                mix = (*fidelity - f_raw) / (1.0 - f_raw);
            }
            factors.push_back(NoiseModel::random_cptp(seed, rank, mix));
        } else {
            throw std::invalid_argument("noise: unknown channel kind '" + kind + "'");
        }
    }
    if (factors.size() == 1) return factors[0];
    return NoiseModel::composite(factors);
}

bool is_prime_power(int d) {
    for (int p = 2; p <= d; ++p) {
        if (d % p != 0) continue;
        int m = d;
        while (m % p == 0) m /= p;
        return m == 1;
    }
    return false;
}

std::string cyclic_structure(const std::vector<Residue>& orders) {
    std::string s;
    for (std::size_t i = 0; i < orders.size(); ++i)
        s += (i ? " x " : "") + std::string("C") + std::to_string(orders[i]);
    return s.empty() ? "trivial" : s;
}

void print_matrix(const CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::string line = "    ";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "(%+.3f%+.3fi) ", m(r, c).real(), m(r, c).imag());
            line += buf;
        }
        std::puts(line.c_str());
    }
}

// ----------------------------------------------------------------- gateset

struct GatesetArgs {
    int d = 3;
    std::string mode = "maximal";
    std::string t_phases;
    int order = 0;
};

int cmd_gateset(const GatesetArgs& a) {
    if (!is_prime_power(a.d)) {
        std::fprintf(stderr,
                     "gateset: dimension %d is not a prime power; the characterisation scheme "
                     "needs a prime-power dimension\n",
                     a.d);
        return 1;
    }
    const DiagMode mode = a.mode == "minimal" ? DiagMode::minimal : DiagMode::maximal;
    std::optional<ResidueVector> phases;
    std::optional<Residue> order;
    if (!a.t_phases.empty()) phases = parse_residue_list(a.t_phases, "t-phases");
    if (a.order > 0) order = static_cast<Residue>(a.order);

    // The ququart default follows the two-qubit construction: the diagonal
    // gate is diag(1, w8) on the first qubit, identity on the second.
    bool ququart_pair = false;
    if (a.d == 4 && !phases) {
        phases = ResidueVector{0, 0, 1, 1};
        order = 8;
        ququart_pair = true;
    }

    const GateSetSpec s = build_gateset(a.d, mode, phases, order);
    std::printf("dimension          %d\n", s.d);
    std::printf("diagonal mode      %s\n", to_string(s.mode));
    std::printf("phase order        %llu\n", static_cast<unsigned long long>(s.phase_order));
    {
        std::string t = "(";
        for (std::size_t i = 0; i < s.t_phases.size(); ++i)
            t += (i ? "," : "") + std::to_string(s.t_phases[i]);
        std::printf("T phase exponents  %s)\n", (t + "").c_str());
    }
    if (ququart_pair)
        std::printf("note               diagonal gate = diag(1, w8) x I on the qubit pair\n");
    std::printf("cyclic structure   %s\n", cyclic_structure(s.diag_orders).c_str());
    std::printf("diagonal subgroup  %lld elements\n", s.diag_subgroup_order());
    std::printf("group order        %lld  (= %d! x %lld)\n", s.group_order(), s.d,
                s.diag_subgroup_order());

    std::printf("\ndiagonal generator matrices:\n");
    for (std::size_t i = 0; i < s.diag_generators.size(); ++i) {
        std::string w = "(";
        for (int j = 0; j < s.d; ++j)
            w += (j ? "," : "") + std::to_string(s.diag_generators[i][j]);
        std::printf("  g%zu = diag(w^k), k = %s), order %llu\n", i, (w + "").c_str(),
                    static_cast<unsigned long long>(s.diag_orders[i]));
        CMat m = CMat::Zero(s.d, s.d);
        for (int j = 0; j < s.d; ++j)
            m(j, j) = root_of_unity(s.phase_order, s.diag_generators[i][j]);
        print_matrix(m);
    }

    std::printf("\npermutation generators:\n");
    std::vector<int> swap_img(static_cast<std::size_t>(s.d));
    for (int j = 0; j < s.d; ++j) swap_img[static_cast<std::size_t>(j)] = j;
    std::swap(swap_img[0], swap_img[1]);
    std::vector<int> cyc_img(static_cast<std::size_t>(s.d));
    for (int j = 0; j < s.d; ++j) cyc_img[static_cast<std::size_t>(j)] = (j + 1) % s.d;
    for (const auto& img : {swap_img, cyc_img}) {
        const Permutation p(img);
        std::printf("  %s\n", p.cycle_string().c_str());
        MonomialOp op = MonomialOp::identity(s.d, s.phase_order);
        op.perm = p.img;
        print_matrix(op.to_matrix());
    }
    return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(int d, int n, bool as_json) {
    std::vector<std::pair<std::string, bool>> checks;
    auto add = [&](const std::string& name, bool ok) { checks.emplace_back(name, ok); };

    const WeylBasis basis(d, n);
    const IrrepProjectors proj = build_projectors(d, n);

    // Projector algebra.
    {
        double worst = 0.0;
        CMat sum = CMat::Zero(basis.size(), basis.size());
        bool dims = true;
        for (int a = 0; a < 3; ++a) {
            const CMat pa = proj.matrix(a);
            sum += pa;
            worst = std::max(worst, (pa * pa - pa).cwiseAbs().maxCoeff());
            for (int b = a + 1; b < 3; ++b)
                worst = std::max(worst, (pa * proj.matrix(b)).cwiseAbs().maxCoeff());
            dims &= std::abs(pa.trace().real() - proj.block_dim(a)) < 1e-10;
        }
        worst = std::max(worst,
                         (sum - CMat::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff());
        add("projector algebra within 1e-10", worst < 1e-10);
        add("projector ranks (1, D-1, D^2-D)", dims);
    }

    // Commutation with sampled gate representatives.
    {
        double worst = 0.0;
        Rng rng(17);
        if (n == 1) {
            const GateSetSpec s = build_gateset(d);
            for (int t = 0; t < 50; ++t)
                worst = std::max(worst, block_leakage(
                    pl_of_unitary(representative(s, sample_uniform(s, rng)), basis), proj));
        } else {
            const MultiQuditGenerators gens = multiqudit_generators(d, n);
            for (int t = 0; t < 50; ++t) {
                MonomialOp word = MonomialOp::identity(basis.dim, gens.phase_order);
                const int len = 1 + static_cast<int>(rng.uniform_index(6));
                for (int step = 0; step < len; ++step)
                    word = gens.ops[rng.uniform_index(gens.ops.size())].after(word);
                worst = std::max(worst, block_leakage(pl_of_unitary(word.to_matrix(), basis), proj));
            }
        }
        add("block commutation over 50 gate samples", worst < 1e-10);
    }

    // State isolation.
    {
        const StateProjections z = state_projections(density(basis_state(basis.dim, 0)), basis, proj);
        const StateProjections p = state_projections(density(plus_state(basis.dim)), basis, proj);
        add("computational state avoids the off-diagonal block", z.norm_offdiag < 1e-10);
        add("uniform superposition avoids the diagonal block", p.norm_diag < 1e-10);
    }

    // Character identities (single-qudit gate sets only).
    double enumerated = -1.0;
    if (n == 1) {
        for (DiagMode mode : {DiagMode::maximal, DiagMode::minimal}) {
            const GateSetSpec s = build_gateset(d, mode);
            const bool enumerate = s.group_order() <= 20000;
            const CharacterReport rep = character_suite(s, enumerate);
            const std::string tag = std::string(to_string(mode)) + " mode";
            add("character average is exactly 3 (" + tag + ")", rep.decomposition_holds);
            add("class averages equal f(2f-1) (" + tag + ")", rep.matches_maximal_formula);
            if (enumerate) {
                add("enumerated character average within 1e-9 (" + tag + ")",
                    std::abs(rep.enumerated_average - 3.0) <= 1e-9);
                if (mode == DiagMode::minimal) enumerated = rep.enumerated_average;
            }
        }
    }

    // Canonical-form reference for the qutrit construction.
    if (d == 3 && n == 1) {
        const ResidueMatrix m({{0, 0, 1, 1, 8, 8}, {1, 8, 0, 8, 0, 1}, {8, 1, 8, 0, 1, 0}}, 9);
        const ResidueMatrix expected(
            {{1, 8, 0, 8, 0, 1}, {0, 0, 1, 1, 8, 8}, {0, 0, 0, 0, 0, 0}}, 9);
        add("canonical row form matches the frozen reference", howell_form(m) == expected);
        const GateSetSpec s = build_gateset(3, DiagMode::minimal);
        add("qutrit diagonal subgroup is C9 x C9",
            s.diag_orders == std::vector<Residue>({9, 9}) && s.group_order() == 486);
    }

    int failed = 0;
    for (const auto& [name, ok] : checks) failed += !ok;
    if (as_json) {
        json out;
        out["d"] = d;
        out["n"] = n;
        out["passed"] = failed == 0;
        json list = json::array();
        for (const auto& [name, ok] : checks) list.push_back({{"check", name}, {"ok", ok}});
        out["checks"] = list;
        if (enumerated >= 0.0) out["character_average"] = enumerated;
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        for (const auto& [name, ok] : checks)
            std::printf("[%s] %s\n", ok ? "ok" : "FAILED", name.c_str());
        if (enumerated >= 0.0) std::printf("|character|^2 average %.6f\n", enumerated);
        std::printf("verification %s (%zu checks, %d failed)\n", failed ? "FAILED" : "passed",
                    checks.size(), failed);
    }
    return failed ? 2 : 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config_file;
    std::string out_prefix = "rb_run";
    bool trace = false;
    // flag overrides; negative/empty means "not set"
    int d = -1, shots = -1, circuits = -1, workers = -1;
    long long seed = -1;
    std::string mode, sim_mode, depths, noise, spam;
};

void apply_config_line(ExperimentConfig& c, std::string& out_prefix, const std::string& key,
                       const std::string& value, int dim_hint) {
    if (key == "d")
        c.d = parse_int_list(value, "d")[0];
    else if (key == "mode") {
        if (value != "maximal" && value != "minimal")
            throw std::invalid_argument("mode must be maximal or minimal");
        c.gate_mode = value == "minimal" ? DiagMode::minimal : DiagMode::maximal;
    } else if (key == "sim_mode") {
        if (value != "exact_circuit" && value != "twirl_power")
            throw std::invalid_argument("sim_mode must be exact_circuit or twirl_power");
        c.mode = value == "twirl_power" ? SimMode::twirl_power : SimMode::exact_circuit;
    } else if (key == "depths")
        c.depths = parse_int_list(value, "depths");
    else if (key == "shots")
        c.shots = parse_int_list(value, "shots")[0];
    else if (key == "circuits")
        c.circuits = parse_int_list(value, "circuits")[0];
    else if (key == "variance_circuits")
        c.variance_circuits = parse_int_list(value, "variance_circuits")[0];
    else if (key == "seed")
        c.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "workers")
        c.workers = parse_int_list(value, "workers")[0];
    else if (key == "noise")
        c.noise = parse_noise(value, dim_hint);
    else if (key == "spam")
        c.spam = value == "none" ? NoiseModel::none() : parse_noise(value, dim_hint);
    else if (key == "out_prefix")
        out_prefix = value;
    else
        throw std::invalid_argument("unknown key '" + key + "'");
}

ExperimentConfig load_config(const SimulateArgs& a, std::string& out_prefix) {
    ExperimentConfig c;
    // Two passes so a d= line in the file re-resolves dimension-dependent
    // noise specs: first find d, then parse everything against it.
    int dim_hint = a.d > 0 ? a.d : c.d;
    std::vector<std::pair<int, std::pair<std::string, std::string>>> entries;
    if (!a.config_file.empty()) {
        std::ifstream in(a.config_file);
        if (!in) throw std::invalid_argument(a.config_file + ": cannot open");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(a.config_file + ":" + std::to_string(lineno) +
                                            ": expected key=value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            entries.push_back({lineno, {key, value}});
            if (key == "d" && a.d <= 0) dim_hint = parse_int_list(value, "d")[0];
        }
    }
    for (const auto& [lineno, kv] : entries) {
        try {
            apply_config_line(c, out_prefix, kv.first, kv.second, dim_hint);
        } catch (const std::exception& e) {
            throw std::invalid_argument(a.config_file + ":" + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }

    if (a.d > 0) c.d = a.d;
    if (!a.mode.empty()) apply_config_line(c, out_prefix, "mode", a.mode, c.d);
    if (!a.sim_mode.empty()) apply_config_line(c, out_prefix, "sim_mode", a.sim_mode, c.d);
    if (!a.depths.empty()) c.depths = parse_int_list(a.depths, "depths");
    if (a.shots > 0) c.shots = a.shots;
    if (a.circuits > 0) c.circuits = a.circuits;
    if (a.seed >= 0) c.seed = static_cast<std::uint64_t>(a.seed);
    if (a.workers > 0) c.workers = a.workers;
    if (!a.noise.empty()) c.noise = parse_noise(a.noise, c.d);
    if (!a.spam.empty()) c.spam = a.spam == "none" ? NoiseModel::none() : parse_noise(a.spam, c.d);
    validate(c);
    return c;
}

void print_trace(const SimContext& ctx) {
    const int depth = ctx.config.depths.front();
    Rng rng(derive_seed(ctx.config.seed, static_cast<std::uint64_t>(depth), 0, 0));
    std::vector<GroupElement> circuit;
    for (int i = 0; i < depth; ++i) circuit.push_back(sample_uniform(ctx.spec, rng));
    std::printf("trace: first circuit at depth %d\n", depth);
    for (std::size_t i = 0; i < circuit.size(); ++i)
        std::printf("  gate %zu: %s\n", i + 1, to_string(ctx.spec, circuit[i]).c_str());
    std::printf("  inversion: %s\n",
                to_string(ctx.spec, invert_sequence(ctx.spec, circuit)).c_str());
}

int cmd_simulate(const SimulateArgs& a) {
    std::string out_prefix = a.out_prefix;
    ExperimentConfig base = load_config(a, out_prefix);

    json meta;
    meta["d"] = base.d;
    meta["gate_mode"] = to_string(base.gate_mode);
    meta["sim_mode"] = to_string(base.mode);
    meta["depths"] = base.depths;
    meta["shots"] = base.shots;
    meta["circuits"] = base.circuits;
    meta["seed"] = base.seed;
    meta["noise"] = describe(base.noise);
    meta["spam"] = describe(base.spam);

    for (InitialState state : {InitialState::zero, InitialState::plus}) {
        ExperimentConfig c = base;
        c.state = state;
        const SimContext ctx(c);
        if (state == InitialState::zero) {
            meta["noise_fidelity"] = average_channel_fidelity(ctx.noise_super);
            if (a.trace) print_trace(ctx);
        }
        const RbRun run = run_experiment(ctx);
        const DecayEstimate est = fit_decay(run);

        const std::string file = out_prefix + "_" + to_string(state) + ".csv";
        std::ofstream out(file);
        if (!out) throw std::invalid_argument(file + ": cannot write");
        out << serialize_run(run);

        json st;
        st["file"] = file;
        st["decay_rate_exact"] = ctx.eta_of_state();
        st["decay_rate_fit"] = est.eta;
        st["A_fit"] = est.A;
        st["B_fit"] = est.B;
        meta["states"][to_string(state)] = st;
        std::printf("%s: wrote %s (decay rate fit %.6f, exact %.6f)\n", to_string(state),
                    file.c_str(), est.eta, ctx.eta_of_state());
    }

    const std::string meta_file = out_prefix + "_meta.json";
    std::ofstream mf(meta_file);
    if (!mf) throw std::invalid_argument(meta_file + ": cannot write");
    mf << meta.dump(2) << "\n";
    std::printf("metadata: %s\n", meta_file.c_str());
    return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const std::string& input) {
    std::ifstream in(input);
    if (!in) throw std::invalid_argument(input + ": cannot open");
    const ParsedRun run = parse_run_csv(in);
    std::vector<double> means;
    for (const auto& row : run.survival) {
        double acc = 0.0;
        for (double v : row) acc += v;
        means.push_back(acc / static_cast<double>(row.size()));
    }
    const DecayEstimate est = fit_decay(run.depths, means);
    std::printf("eta_hat = %.6f\n", est.eta);
    json out;
    out["A"] = est.A;
    out["B"] = est.B;
    out["eta"] = est.eta;
    out["rss"] = est.rss;
    out["iterations"] = est.iterations;
    out["converged"] = est.converged;
    out["degenerate"] = est.degenerate;
    if (!est.note.empty()) out["note"] = est.note;
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

// ------------------------------------------------------------------- table

struct TableArgs {
    int d = 3;
    std::string mode = "minimal";
    std::string noise = "random_cptp:7,fidelity=0.89";
    std::string budgets = "100x10,10x100,100x100";
    std::string depths = "1,2,3,4,5,6,7,8,9,10,20,40,60,80,100";
    std::string quantiles = "0.95,0.999,1";
    int reps = 1000;
    long long seed = 2026;
    int workers = 1;
    std::string out;
};

int cmd_table(const TableArgs& a) {
    TableRequest req;
    req.base.d = a.d;
    req.base.gate_mode = a.mode == "minimal" ? DiagMode::minimal : DiagMode::maximal;
    req.base.noise = parse_noise(a.noise, a.d);
    req.base.depths = parse_int_list(a.depths, "depths");
    req.base.seed = static_cast<std::uint64_t>(a.seed);
    req.base.workers = a.workers;
    req.repetitions = a.reps;
    req.quantiles = parse_double_list(a.quantiles, "quantiles");
    for (const std::string& cell : split(a.budgets, ',')) {
        const std::vector<std::string> sr = split(trim(cell), 'x');
        if (sr.size() != 2)
            throw std::invalid_argument("budgets: expected SHOTSxCIRCUITS, got '" + cell + "'");
        req.budgets.push_back({parse_int_list(sr[0], "budgets")[0],
                               parse_int_list(sr[1], "budgets")[0]});
    }
    const std::string csv = serialize_table(confidence_table(req), req.quantiles);
    if (a.out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::invalid_argument(a.out + ": cannot write");
        out << csv;
        std::printf("wrote %s\n", a.out.c_str());
    }
    return 0;
}

// -------------------------------------------------------------- strategies

struct StrategiesArgs {
    int d = 3;
    std::string mode = "minimal";
    std::string noise = "depolarizing:0.1+phase_damping:0.1";
    int shots = 100, circuits = 100, reps = 200;
    long long seed = 2026;
    int workers = 1;
};

int cmd_strategies(const StrategiesArgs& a) {
    ExperimentConfig base;
    base.d = a.d;
    base.gate_mode = a.mode == "minimal" ? DiagMode::minimal : DiagMode::maximal;
    base.noise = parse_noise(a.noise, a.d);
    base.shots = a.shots;
    base.circuits = a.circuits;
    base.seed = static_cast<std::uint64_t>(a.seed);
    base.workers = a.workers;
    const std::vector<double> quantiles = {0.95, 0.999, 1.0};
    const auto report = strategy_comparison(base, default_strategies(), a.reps, quantiles);

    std::printf("%-14s %-28s %10s %10s %10s\n", "schedule", "depths", "err_q95", "err_q999",
                "err_q100");
    for (const StrategyResult& r : report) {
        std::string depths;
        for (std::size_t i = 0; i < r.strategy.depths.size(); ++i) {
            if (i >= 6) {
                depths += ",...," + std::to_string(r.strategy.depths.back());
                break;
            }
            depths += (i ? "," : "") + std::to_string(r.strategy.depths[i]);
        }
        std::printf("%-14s %-28s %10.5f %10.5f %10.5f\n", r.strategy.name.c_str(), depths.c_str(),
                    r.err_quantiles[0], r.err_quantiles[1], r.err_quantiles[2]);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qudit gate-set benchmarking toolkit: group construction, invariant "
                 "verification, decay simulation, and estimator-error tables."};
    app.require_subcommand(1);

    GatesetArgs ga;
    auto* gateset = app.add_subcommand("gateset", "Report a gate set's group structure");
    gateset->add_option("--d", ga.d, "qudit dimension (prime power)")->required();
    gateset->add_option("--mode", ga.mode, "diagonal subgroup mode")
        ->check(CLI::IsMember({"maximal", "minimal"}));
    gateset->add_option("--t-phases", ga.t_phases, "comma list of T phase exponents");
    gateset->add_option("--order", ga.order, "phase order for explicit --t-phases");

    int vd = 3, vn = 1;
    bool vjson = false;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite for a system size");
    verify->add_option("--d", vd, "qudit dimension");
    verify->add_option("--n", vn, "qudit count");
    verify->add_flag("--json", vjson, "emit a JSON report");

    SimulateArgs sa;
    auto* simulate =
        app.add_subcommand("simulate", "Run a benchmarking experiment for both initial states");
    simulate->add_option("--config", sa.config_file, "key=value configuration file");
    simulate->add_option("--out", sa.out_prefix, "output file prefix");
    simulate->add_flag("--trace", sa.trace, "log the first circuit and its inversion gate");
    simulate->add_option("--d", sa.d, "qudit dimension");
    simulate->add_option("--mode", sa.mode, "diagonal subgroup mode")
        ->check(CLI::IsMember({"", "maximal", "minimal"}));
    simulate->add_option("--sim-mode", sa.sim_mode, "exact_circuit or twirl_power")
        ->check(CLI::IsMember({"", "exact_circuit", "twirl_power"}));
    simulate->add_option("--depths", sa.depths, "comma list of circuit depths");
    simulate->add_option("--shots", sa.shots, "shots per circuit");
    simulate->add_option("--circuits", sa.circuits, "random circuits per depth");
    simulate->add_option("--seed", sa.seed, "master seed");
    simulate->add_option("--workers", sa.workers, "worker threads");
    simulate->add_option("--noise", sa.noise, "noise spec, e.g. depolarizing:0.05");
    simulate->add_option("--spam", sa.spam, "pre-measurement error channel spec");

    std::string fit_input;
    auto* fit = app.add_subcommand("fit", "Fit the decay law to a run CSV");
    fit->add_option("--input", fit_input, "run CSV produced by simulate")->required();

    TableArgs ta;
    auto* table = app.add_subcommand("table", "Estimator-error quantiles over a budget grid");
    table->add_option("--d", ta.d, "qudit dimension");
    table->add_option("--mode", ta.mode, "diagonal subgroup mode")
        ->check(CLI::IsMember({"maximal", "minimal"}));
    table->add_option("--noise", ta.noise, "noise spec");
    table->add_option("--budgets", ta.budgets, "comma list of SHOTSxCIRCUITS cells");
    table->add_option("--depths", ta.depths, "comma list of circuit depths");
    table->add_option("--quantiles", ta.quantiles, "comma list of quantile levels");
    table->add_option("--reps", ta.reps, "repeated experiments per cell");
    table->add_option("--seed", ta.seed, "master seed");
    table->add_option("--workers", ta.workers, "worker threads");
    table->add_option("--out", ta.out, "output CSV path (default stdout)");

    StrategiesArgs sga;
    auto* strategies =
        app.add_subcommand("strategies", "Rank depth schedules by estimator error");
    strategies->add_option("--d", sga.d, "qudit dimension");
    strategies->add_option("--mode", sga.mode, "diagonal subgroup mode")
        ->check(CLI::IsMember({"maximal", "minimal"}));
    strategies->add_option("--noise", sga.noise, "noise spec");
    strategies->add_option("--shots", sga.shots, "shots per circuit");
    strategies->add_option("--circuits", sga.circuits, "random circuits per depth");
    strategies->add_option("--reps", sga.reps, "repeated experiments per schedule");
    strategies->add_option("--seed", sga.seed, "master seed");
    strategies->add_option("--workers", sga.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gateset->parsed()) return cmd_gateset(ga);
        if (verify->parsed()) return cmd_verify(vd, vn, vjson);
        if (simulate->parsed()) return cmd_simulate(sa);
        if (fit->parsed()) return cmd_fit(fit_input);
        if (table->parsed()) return cmd_table(ta);
        if (strategies->parsed()) return cmd_strategies(sga);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
