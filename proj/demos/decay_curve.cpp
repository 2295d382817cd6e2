// Runs one small benchmarking experiment under depolarizing noise and shows
// the measured survival means against the closed-form decay law, followed by
// the fitted parameters. A compact tour of the simulate -> fit pipeline.

#include <qrb/qrb.hpp>

#include <cstdio>

using namespace qrb;

int main() {
    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.gate_mode = DiagMode::minimal;
    cfg.noise = NoiseModel::depolarizing(0.05);
    cfg.depths = {1, 2, 4, 6, 8, 10, 15, 20, 30, 40, 60, 80, 100};
    cfg.shots = 200;
    cfg.circuits = 200;
    cfg.seed = 42;

    const SimContext ctx(cfg);
    std::printf("gate set: d=%d %s mode, %lld elements\n", cfg.d, to_string(cfg.gate_mode),
                ctx.spec.group_order());
    std::printf("noise: %s, average gate fidelity %.6f\n", describe(cfg.noise).c_str(),
                average_channel_fidelity(ctx.noise_super));
    std::printf("decay law: Pr(m) = %.4f + %.4f * %.4f^m\n\n", ctx.coeff_trivial, ctx.coeff_diag,
                ctx.eta_of_state());

    const RbRun run = run_experiment(ctx);
    const std::vector<double> means = run.depth_means();

    std::printf("%6s %10s %10s %s\n", "depth", "measured", "predicted", "");
    for (std::size_t di = 0; di < means.size(); ++di) {
        const double pred = theoretical_decay(ctx, cfg.depths[di]);
        const int bar = static_cast<int>(means[di] * 40);
        std::string plot(static_cast<std::size_t>(bar), '#');
        std::printf("%6d %10.4f %10.4f  %s\n", cfg.depths[di], means[di], pred, plot.c_str());
    }

    const DecayEstimate est = fit_decay(run);
    std::printf("\nfit: A = %.4f, B = %.4f, decay rate = %.6f (exact %.6f)\n", est.A, est.B,
                est.eta, ctx.eta_of_state());
    std::printf("average gate fidelity from the decay rates: %.6f\n",
                agf_from_eta(ctx.eta, cfg.d));
    return 0;
}
