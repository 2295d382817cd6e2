#pragma once

// Decay-curve fitting and experiment-design analysis. The fitter recovers
// (A, B, eta) in the survival law  p(m) = A + B eta^m  from per-depth means;
// the table and strategy routines repeat whole simulated experiments to map
// estimator error against shot/circuit budgets and depth schedules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrb/parallel.hpp"
#include "qrb/rbsim.hpp"
#include "qrb/rng.hpp"

namespace qrb {

struct DecayEstimate {
    double A = 0.0;
    double B = 0.0;
    double eta = 0.0;
    double rss = 0.0;       // residual sum of squares at the solution
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
    std::string note;
};

// Least-squares fit of A + B eta^m to the per-depth means, eta clamped to
// [0, 1]. Seeds from a log-linear regression on the baseline-subtracted
// means, then polishes with damped Gauss-Newton steps (analytic Jacobian).
inline DecayEstimate fit_decay(const std::vector<int>& depths, const std::vector<double>& means) {
    if (depths.size() != means.size())
        throw std::invalid_argument("fit_decay: depths and means differ in length");
    {
        std::vector<int> uniq(depths);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3)
            throw std::invalid_argument("fit_decay: need at least 3 distinct depths");
    }

    const std::size_t n = depths.size();
    DecayEstimate est;

    double lo = means[0], hi = means[0];
    for (double v : means) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) {
        // Flat data: any eta fits with B = 0. Report the convention that a
        // perfect survival plateau means a noiseless decay rate.
        est.A = means[0];
        est.B = 0.0;
        est.eta = (std::abs(means[0] - 1.0) < 1e-9) ? 1.0 : 0.0;
        est.converged = true;
        est.degenerate = true;
        est.note = "constant survival data";
        return est;
    }

    // Initial guess: subtract a floor slightly below the smallest mean so
    // every shifted value is positive, then regress log(p - floor) on m.
    double A = lo - 0.05 * (hi - lo) - 1e-9;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = static_cast<double>(depths[k]);
        const double y = std::log(means[k] - A);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    double eta = 0.9, B = hi - A;
    if (std::abs(denom) > 1e-12) {
        const double slope = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / n;
        eta = std::clamp(std::exp(slope), 1e-6, 1.0);
        B = std::exp(intercept);
    }

    auto residuals = [&](double a, double b, double e, std::vector<double>& r) {
        double rss = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = a + b * std::pow(e, depths[k]) - means[k];
            rss += r[k] * r[k];
        }
        return rss;
    };

    std::vector<double> r(n), rt(n);
    double rss = residuals(A, B, eta, r);
    double lambda = 1e-3;
    int it = 0;
    for (; it < 200; ++it) {
        // Normal equations for the 3-parameter Jacobian [1, eta^m, B m eta^(m-1)].
        double JtJ[3][3] = {{0}}, Jtr[3] = {0};
        for (std::size_t k = 0; k < n; ++k) {
            const double m = static_cast<double>(depths[k]);
            const double em1 = std::pow(eta, m - 1.0);
            const double j[3] = {1.0, eta * em1, B * m * em1};
            for (int p = 0; p < 3; ++p) {
                Jtr[p] += j[p] * r[k];
                for (int q = 0; q < 3; ++q) JtJ[p][q] += j[p] * j[q];
            }
        }
        bool stepped = false;
        for (int tries = 0; tries < 30 && !stepped; ++tries) {
            double M[3][4];
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) M[p][q] = JtJ[p][q] + (p == q ? lambda * JtJ[p][p] : 0.0);
                M[p][3] = -Jtr[p];
            }
            // Gaussian elimination with partial pivoting on the 3x3 system.
            bool singular = false;
            for (int p = 0; p < 3; ++p) {
                int piv = p;
                for (int q = p + 1; q < 3; ++q)
                    if (std::abs(M[q][p]) > std::abs(M[piv][p])) piv = q;
                if (std::abs(M[piv][p]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(M[p], M[piv]);
                for (int q = p + 1; q < 3; ++q) {
                    const double f = M[q][p] / M[p][p];
                    for (int cc = p; cc < 4; ++cc) M[q][cc] -= f * M[p][cc];
                }
            }
            double step[3] = {0, 0, 0};
            if (!singular) {
                for (int p = 2; p >= 0; --p) {
                    double acc = M[p][3];
                    for (int q = p + 1; q < 3; ++q) acc -= M[p][q] * step[q];
                    step[p] = acc / M[p][p];
                }
            }
            const double a2 = A + step[0], b2 = B + step[1];
            const double e2 = std::clamp(eta + step[2], 0.0, 1.0);
            const double rss2 = singular ? rss : residuals(a2, b2, e2, rt);
            if (!singular && rss2 < rss) {
                A = a2;
                B = b2;
                eta = e2;
                std::swap(r, rt);
                const double gain = rss - rss2;
                rss = rss2;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (gain < 1e-18 * (1.0 + rss)) it = 199;  // converged, leave loop
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) break;
            }
        }
        if (!stepped) break;
    }

    est.A = A;
    est.B = B;
    est.eta = eta;
    est.rss = rss;
    est.iterations = it + 1;
    est.converged = true;
    if (eta <= 1e-9) {
        est.degenerate = true;
        est.note = "decay rate pinned at lower bound; unconstrained optimum may be negative";
    } else if (std::abs(B) < 1e-9) {
        est.degenerate = true;
        est.note = "vanishing decay amplitude";
    }
    return est;
}

inline DecayEstimate fit_decay(const RbRun& run) {
    return fit_decay(run.config.depths, run.depth_means());
}

// Nearest-rank quantile: the ceil(q*N)-th smallest sample, q in (0, 1].
inline double quantile_nearest_rank(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("quantile: q must lie in (0, 1]");
    std::sort(xs.begin(), xs.end());
    const double raw = q * static_cast<double>(xs.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, xs.size());
    return xs[rank - 1];
}

// ------------------------------------------------------------ error tables

struct BudgetCell {
    int shots = 0;
    int circuits = 0;
    std::vector<double> err_quantiles;  // aligned with the requested q list
    double fidelity = 0.0;              // average gate fidelity of the noise
};

struct TableRequest {
    ExperimentConfig base;                      // depths/noise/state template
    std::vector<std::pair<int, int>> budgets;   // (shots, circuits) grid
    int repetitions = 1000;
    std::vector<double> quantiles = {0.95, 0.999, 1.0};
};

// Absolute estimation error |eta_hat - eta| where eta is the configured
// state's exact twirled decay rate. One full experiment + fit per repetition;
// repetition k of every budget cell replays the same master seed stream so
// different cells (and different noise strengths) see common random numbers.
inline std::vector<BudgetCell> confidence_table(const TableRequest& req) {
    SimContext ctx(req.base);
    const double eta_true = ctx.eta_of_state();
    const double fid = average_channel_fidelity(ctx.noise_super);

    std::vector<BudgetCell> table;
    for (const auto& [shots, circuits] : req.budgets) {
        std::vector<double> errs(static_cast<std::size_t>(req.repetitions));
        parallel_for(errs.size(), req.base.workers, [&](std::size_t rep) {
            ExperimentConfig c = req.base;
            c.shots = shots;
            c.circuits = circuits;
            c.workers = 1;
            c.seed = derive_seed(req.base.seed, 0x7AB1E, rep);
            SimContext rep_ctx(ctx, c);
            const RbRun run = run_experiment(rep_ctx);
            errs[rep] = std::abs(fit_decay(run).eta - eta_true);
        });
        BudgetCell cell;
        cell.shots = shots;
        cell.circuits = circuits;
        cell.fidelity = fid;
        for (double q : req.quantiles) cell.err_quantiles.push_back(quantile_nearest_rank(errs, q));
        table.push_back(std::move(cell));
    }
    return table;
}

inline std::string serialize_table(const std::vector<BudgetCell>& table,
                                   const std::vector<double>& quantiles) {
    std::ostringstream os;
    os << "shots,circuits";
    for (double q : quantiles) {
        std::ostringstream tag;
        tag << q;
        std::string digits = tag.str().substr(tag.str().find('.') != std::string::npos
                                                  ? tag.str().find('.') + 1
                                                  : tag.str().size());
        os << ",err_q" << (digits.empty() ? "100" : digits);
    }
    os << ",fidelity\n";
    char buf[64];
    for (const auto& cell : table) {
        os << cell.shots << "," << cell.circuits;
        for (double e : cell.err_quantiles) {
            std::snprintf(buf, sizeof buf, ",%.12g", e);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.12g\n", cell.fidelity);
        os << buf;
    }
    return os.str();
}

// --------------------------------------------------------- depth schedules

struct StrategySpec {
    std::string name;
    std::vector<int> depths;
};

inline std::vector<StrategySpec> default_strategies() {
    std::vector<StrategySpec> out;
    out.push_back({"geometric", {2, 4, 8, 16, 32, 64}});
    {
        StrategySpec s{"linear_short", {}};
        for (int m = 1; m <= 8; ++m) s.depths.push_back(m);
        out.push_back(std::move(s));
    }
    {
        StrategySpec s{"linear_tiny", {}};
        for (int m = 1; m <= 5; ++m) s.depths.push_back(m);
        out.push_back(std::move(s));
    }
    {
        StrategySpec s{"coarse_deep", {}};
        for (int m = 5; m <= 100; m += 5) s.depths.push_back(m);
        out.push_back(std::move(s));
    }
    return out;
}

struct StrategyResult {
    StrategySpec strategy;
    std::vector<double> err_quantiles;
};

// Same repeated-experiment protocol as confidence_table, but varying the
// depth schedule at a fixed (shots, circuits) budget. Results are returned
// sorted by the first requested quantile, best first.
inline std::vector<StrategyResult> strategy_comparison(const ExperimentConfig& base,
                                                       const std::vector<StrategySpec>& strategies,
                                                       int repetitions,
                                                       const std::vector<double>& quantiles) {
    if (strategies.empty()) throw std::invalid_argument("strategy_comparison: no strategies");
    std::vector<StrategyResult> out;
    for (const StrategySpec& s : strategies) {
        ExperimentConfig c = base;
        c.depths = s.depths;
        SimContext ctx(c);
        const double eta_true = ctx.eta_of_state();
        std::vector<double> errs(static_cast<std::size_t>(repetitions));
        parallel_for(errs.size(), base.workers, [&](std::size_t rep) {
            ExperimentConfig rc = c;
            rc.workers = 1;
            rc.seed = derive_seed(base.seed, 0x57A7, rep);
            SimContext rep_ctx(ctx, rc);
            const RbRun run = run_experiment(rep_ctx);
            errs[rep] = std::abs(fit_decay(run).eta - eta_true);
        });
        StrategyResult res;
        res.strategy = s;
        for (double q : quantiles) res.err_quantiles.push_back(quantile_nearest_rank(errs, q));
        out.push_back(std::move(res));
    }
    std::stable_sort(out.begin(), out.end(), [](const StrategyResult& a, const StrategyResult& b) {
        return a.err_quantiles.front() < b.err_quantiles.front();
    });
    return out;
}

}  // namespace qrb
