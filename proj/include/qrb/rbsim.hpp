#pragma once

// Randomised benchmarking simulator. A run draws, for every depth m and
// circuit index, m uniform gate-set elements plus the group inverse of their
// product, pushes the initial state through the noisy sequence, and records
// the measured survival frequency. Noise acts after every gate, the inverse
// included; state preparation and the final measurement are ideal unless a
// separate SPAM channel is configured.
//
// Gates are monomial, so the only dense arithmetic is one superoperator
// product per noise application. Circuits at a depth are processed in fixed
// 64-column batches (one matrix-matrix product per step instead of 64
// matrix-vector products); batch width is independent of the worker count so
// results are bit-identical for any parallelism.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrb/channels.hpp"
#include "qrb/gateset.hpp"
#include "qrb/parallel.hpp"
#include "qrb/rng.hpp"
#include "qrb/twirl.hpp"

namespace qrb {

enum class SimMode { exact_circuit, twirl_power };
enum class InitialState { zero, plus };

struct ExperimentConfig {
    int d = 3;
    DiagMode gate_mode = DiagMode::maximal;
    std::optional<ResidueVector> t_phases;
    std::optional<Residue> phase_order;
    SimMode mode = SimMode::exact_circuit;
    InitialState state = InitialState::zero;
    std::vector<int> depths = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50,
                               55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
    int shots = 100;
    int circuits = 100;
    std::uint64_t seed = 1;
    NoiseModel noise;
    NoiseModel spam;  // NoiseKind::none disables
    unsigned workers = 1;
    int variance_circuits = 100;  // twirl_power: probe circuits per depth
};

inline void validate(const ExperimentConfig& c) {
    if (c.depths.empty()) throw std::invalid_argument("config: depths must be nonempty");
    int prev = 0;
    for (int m : c.depths) {
        if (m <= prev) throw std::invalid_argument("config: depths must be positive and strictly increasing");
        prev = m;
    }
    if (c.shots < 1) throw std::invalid_argument("config: shots must be >= 1");
    if (c.circuits < 1) throw std::invalid_argument("config: circuits must be >= 1");
    if (c.variance_circuits < 2) throw std::invalid_argument("config: variance_circuits must be >= 2");
}

struct RbRun {
    ExperimentConfig config;
    std::vector<std::vector<double>> survival;  // [depth_index][circuit_index]

    std::vector<double> depth_means() const {
        std::vector<double> out;
        out.reserve(survival.size());
        for (const auto& row : survival) {
            double acc = 0.0;
            for (double v : row) acc += v;
            out.push_back(acc / static_cast<double>(row.size()));
        }
        return out;
    }
};

// ---------------------------------------------------------------- context

// Everything derived from a config that the inner loops need.
struct SimContext {
    ExperimentConfig config;
    GateSetSpec spec;
    WeylBasis basis;
    IrrepProjectors proj;
    CMat noise_super;
    CMat spam_super;  // identity-sized only when spam present
    bool has_spam = false;
    CVec init_vec;    // vec(rho_0)
    CVec meas_vec;    // vec of the measurement projector, equals init_vec
    CMat noise_pl;
    TwirledChannel eta;
    double coeff_trivial = 0.0;  // decay law Pr(m) = a_I + a_0 eta_0^m + a_+ eta_+^m
    double coeff_diag = 0.0;
    double coeff_offdiag = 0.0;

    SimContext(const ExperimentConfig& c)
        : config(c),
          spec(build_gateset(c.d, c.gate_mode, c.t_phases, c.phase_order)),
          basis(c.d, 1),
          proj(build_projectors(c.d, 1)) {
        validate(c);
        const int D = c.d;
        const KrausSet kraus = compile_noise(c.noise, D);
        noise_super = kraus_to_super(kraus);
        has_spam = (c.spam.kind != NoiseKind::none);
        if (has_spam) spam_super = kraus_to_super(compile_noise(c.spam, D));

        const CVec psi = (c.state == InitialState::zero) ? basis_state(D, 0) : plus_state(D);
        init_vec = vectorise(density(psi));
        meas_vec = init_vec;

        noise_pl = pauli_liouville(noise_super, basis);
        eta = twirl(noise_pl, proj);

        // Decay coefficients <<psi| [spam] Lambda Pi_block |psi>>.
        const CVec c_init = pl_coords(density(psi), basis);
        CVec left = c_init;
        CMat front = noise_pl;
        if (has_spam) front = pauli_liouville(spam_super, basis) * front;
        const CVec row = front.adjoint() * left;  // conj row vector of <<psi| front
        double acc[3] = {0.0, 0.0, 0.0};
        for (Eigen::Index k = 0; k < row.size(); ++k)
            acc[proj.block[static_cast<std::size_t>(k)]] += (std::conj(row(k)) * c_init(k)).real();
        coeff_trivial = acc[0];
        coeff_diag = acc[1];
        coeff_offdiag = acc[2];
    }

    // Reuse the derived operators of an existing context for a config that
    // differs only in schedule, budget, seed, mode, or worker count.
    SimContext(const SimContext& base, const ExperimentConfig& c) : SimContext(base) {
        validate(c);
        if (c.d != config.d || c.state != config.state || c.gate_mode != config.gate_mode)
            throw std::invalid_argument("SimContext reuse requires identical physics fields");
        config = c;
    }

    // The decay rate the configured initial state is sensitive to.
    double eta_of_state() const {
        return config.state == InitialState::zero ? eta.eta_diag : eta.eta_offdiag;
    }
};

// Expected survival after m twirled noise rounds (the fitting law).
inline double theoretical_decay(const SimContext& ctx, int m) {
    return ctx.coeff_trivial + ctx.coeff_diag * std::pow(ctx.eta.eta_diag, m) +
           ctx.coeff_offdiag * std::pow(ctx.eta.eta_offdiag, m);
}

// ------------------------------------------------------------ exact engine

namespace detail {

// In-place monomial conjugation on a column-stacked operator:
// out[(perm[i], perm[j])] = phase_i conj(phase_j) in[(i, j)].
inline void apply_monomial_channel(const MonomialOp& g, const std::vector<Cx>& phases,
                                   const Cx* in, Cx* out) {
    const int D = g.dim();
    for (int j = 0; j < D; ++j) {
        const Cx pj = std::conj(phases[static_cast<std::size_t>(j)]);
        const int col_in = j * D;
        const int col_out = g.perm[j] * D;
        for (int i = 0; i < D; ++i)
            out[col_out + g.perm[i]] = phases[static_cast<std::size_t>(i)] * pj * in[col_in + i];
    }
}

inline std::vector<Cx> monomial_phases(const MonomialOp& g) {
    std::vector<Cx> out(static_cast<std::size_t>(g.dim()));
    for (int i = 0; i < g.dim(); ++i) out[static_cast<std::size_t>(i)] = root_of_unity(g.order, g.phase_exp[i]);
    return out;
}

}  // namespace detail

// Survival probability of one explicit circuit (application order), with the
// inverse appended and noise after every gate. Reference path for the tests;
// run_experiment uses the batched equivalent.
inline double exact_survival(const SimContext& ctx, const std::vector<GroupElement>& circuit) {
    const int D = ctx.config.d;
    CVec v = ctx.init_vec, w(D * D);
    auto step = [&](const GroupElement& g) {
        const MonomialOp op = monomial(ctx.spec, g);
        detail::apply_monomial_channel(op, detail::monomial_phases(op), v.data(), w.data());
        v = ctx.noise_super * w;
    };
    for (const GroupElement& g : circuit) step(g);
    step(invert_sequence(ctx.spec, circuit));
    if (ctx.has_spam) v = ctx.spam_super * v;
    return (ctx.meas_vec.dot(v)).real();  // Eigen dot conjugates the left side
}

namespace detail {

// Exact survivals for `count` independently seeded circuits at one depth.
// stream_tag separates sampling uses of the same (seed, depth, index) triple.
inline std::vector<double> batched_survivals(const SimContext& ctx, int depth, int count,
                                             std::uint64_t stream_tag) {
    const int D = ctx.config.d;
    constexpr int kBatch = 64;
    std::vector<double> out(static_cast<std::size_t>(count));

    for (int base = 0; base < count; base += kBatch) {
        const int cols = std::min(kBatch, count - base);
        // Sample every circuit in the batch up front.
        std::vector<std::vector<MonomialOp>> gates(static_cast<std::size_t>(cols));
        for (int c = 0; c < cols; ++c) {
            Rng rng(derive_seed(ctx.config.seed, static_cast<std::uint64_t>(depth),
                                static_cast<std::uint64_t>(base + c), stream_tag));
            std::vector<GroupElement> circuit(static_cast<std::size_t>(depth));
            for (int t = 0; t < depth; ++t) circuit[static_cast<std::size_t>(t)] = sample_uniform(ctx.spec, rng);
            auto& ops = gates[static_cast<std::size_t>(c)];
            ops.reserve(static_cast<std::size_t>(depth) + 1);
            for (const auto& g : circuit) ops.push_back(monomial(ctx.spec, g));
            ops.push_back(monomial(ctx.spec, invert_sequence(ctx.spec, circuit)));
        }

        CMat v(D * D, cols), w(D * D, cols);
        for (int c = 0; c < cols; ++c) v.col(c) = ctx.init_vec;
        for (int t = 0; t <= depth; ++t) {
            for (int c = 0; c < cols; ++c) {
                const MonomialOp& op = gates[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
                apply_monomial_channel(op, monomial_phases(op), v.col(c).data(), w.col(c).data());
            }
            v.noalias() = ctx.noise_super * w;
        }
        if (ctx.has_spam) v = ctx.spam_super * v;
        for (int c = 0; c < cols; ++c)
            out[static_cast<std::size_t>(base + c)] = (ctx.meas_vec.dot(v.col(c))).real();
    }
    return out;
}

}  // namespace detail

// ------------------------------------------------------------- experiment

inline RbRun run_experiment(const SimContext& ctx) {
    const ExperimentConfig& c = ctx.config;
    RbRun run;
    run.config = c;
    run.survival.assign(c.depths.size(), {});

    if (c.mode == SimMode::exact_circuit) {
        parallel_for(c.depths.size(), c.workers, [&](std::size_t di) {
            const int depth = c.depths[di];
            std::vector<double> probs = detail::batched_survivals(ctx, depth, c.circuits, 0);
            std::vector<double>& freq = run.survival[di];
            freq.resize(probs.size());
            for (std::size_t ci = 0; ci < probs.size(); ++ci) {
                Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(depth), ci, 2));
                const double p = std::clamp(probs[ci], 0.0, 1.0);
                freq[ci] = static_cast<double>(rng.binomial(static_cast<std::uint64_t>(c.shots), p)) /
                           static_cast<double>(c.shots);
            }
        });
        return run;
    }

    // twirl_power: exact per-depth mean from the decay law, variance from a
    // probe of explicit circuits, then Gaussian surrogate survivals.
    parallel_for(c.depths.size(), c.workers, [&](std::size_t di) {
        const int depth = c.depths[di];
        const double mean = theoretical_decay(ctx, depth);
        const std::vector<double> probe = detail::batched_survivals(ctx, depth, c.variance_circuits, 1);
        double acc = 0.0, acc2 = 0.0;
        for (double p : probe) {
            acc += p;
            acc2 += p * p;
        }
        const double nprobe = static_cast<double>(probe.size());
        const double var = std::max(0.0, (acc2 - acc * acc / nprobe) / (nprobe - 1.0));
        const double sd = std::sqrt(var);

        std::vector<double>& freq = run.survival[di];
        freq.resize(static_cast<std::size_t>(c.circuits));
        for (int ci = 0; ci < c.circuits; ++ci) {
            Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(depth), static_cast<std::uint64_t>(ci), 2));
            const double p = std::clamp(mean + sd * rng.normal(), 0.0, 1.0);
            freq[static_cast<std::size_t>(ci)] =
                static_cast<double>(rng.binomial(static_cast<std::uint64_t>(c.shots), p)) /
                static_cast<double>(c.shots);
        }
    });
    return run;
}

// ------------------------------------------------------------------- CSV

inline const char* to_string(SimMode m) { return m == SimMode::exact_circuit ? "exact_circuit" : "twirl_power"; }
inline const char* to_string(InitialState s) { return s == InitialState::zero ? "zero" : "plus"; }
inline const char* to_string(DiagMode m) { return m == DiagMode::maximal ? "maximal" : "minimal"; }

// One run as CSV: metadata comment header, then one row per (depth, circuit).
inline std::string serialize_run(const RbRun& run) {
    const ExperimentConfig& c = run.config;
    std::ostringstream os;
    os << "# rb-run v1\n";
    os << "# d = " << c.d << "\n";
    os << "# gate_mode = " << to_string(c.gate_mode) << "\n";
    os << "# sim_mode = " << to_string(c.mode) << "\n";
    os << "# state = " << to_string(c.state) << "\n";
    os << "# noise = " << describe(c.noise) << "\n";
    os << "# spam = " << describe(c.spam) << "\n";
    os << "# shots = " << c.shots << "\n";
    os << "# circuits = " << c.circuits << "\n";
    os << "# seed = " << c.seed << "\n";
    os << "depth,circuit_index,survival_frequency\n";
    char buf[64];
    for (std::size_t di = 0; di < run.survival.size(); ++di) {
        for (std::size_t ci = 0; ci < run.survival[di].size(); ++ci) {
            std::snprintf(buf, sizeof buf, "%d,%zu,%.12g\n", c.depths[di], ci, run.survival[di][ci]);
            os << buf;
        }
    }
    return os.str();
}

struct ParsedRun {
    std::map<std::string, std::string> metadata;
    std::vector<int> depths;                     // ascending, unique
    std::vector<std::vector<double>> survival;   // [depth_index][row order]
};

inline ParsedRun parse_run_csv(std::istream& in) {
    ParsedRun out;
    std::map<int, std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto a = s.find_first_not_of(" \t#");
                    const auto b = s.find_last_not_of(" \t\r");
                    return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
                };
                out.metadata[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("depth,", 0) != 0)
                throw std::runtime_error("line " + std::to_string(lineno) + ": expected CSV header");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 3 fields");
        try {
            rows[std::stoi(a)].push_back(std::stod(c));
        } catch (const std::exception&) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (rows.empty()) throw std::runtime_error("no data rows found");
    for (auto& [depth, vals] : rows) {
        out.depths.push_back(depth);
        out.survival.push_back(std::move(vals));
    }
    return out;
}

}  // namespace qrb
