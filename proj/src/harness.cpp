#include "qprobe/harness.hpp"

#include <algorithm>
#include <cmath>

#include "qprobe/rng.hpp"
#include "qprobe/tomography.hpp"

namespace qprobe {

namespace {

enum : std::uint64_t {
    kChanLabel = 1,
    kProbeLabel = 2,
    kInputLabel = 3,
    kTomoLabel = 4,
};

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

PathStats stats_of(const std::vector<double>& distances) {
    PathStats s;
    s.trials = static_cast<int>(distances.size());
    for (double d : distances) s.max = std::max(s.max, d);
    s.median = median_of(distances);
    return s;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t purpose, int n, int trial) {
    return rng::mix64(rng::mix64(seed, purpose), (static_cast<std::uint64_t>(n) << 32) |
                                                     static_cast<std::uint64_t>(trial));
}

/// Alternates trace-preserving and truncated (non-trace-preserving) channels.
KrausChannel trial_channel(int n, std::uint64_t seed, int trial) {
    const bool non_tp = trial % 2 == 1;
    const int max_env = n * n;
    const int env = non_tp ? 2 + trial % (max_env - 1) : 1 + trial % max_env;
    KrausChannel tp = random_channel(n, env, seed);
    if (!non_tp) return tp;
    std::vector<CMatrix> ks(tp.kraus().begin(), tp.kraus().end() - 1);
    return KrausChannel(n, std::move(ks), tp.label() + ",truncated");
}

DensityMatrix trial_input(int dim, std::uint64_t seed) {
    auto g = rng::substream(seed, kInputLabel);
    return rng::random_density_matrix(dim, g);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    if (opts.trials < 1) throw ParamError("run_verify: trials must be >= 1");
    VerifyReport report;
    report.tolerance = opts.tolerance;

    for (int n : opts.dims) {
        std::vector<double> single_oracle, single_paths, probe_invariance, special_case;
        for (int t = 0; t < opts.trials; ++t) {
            const KrausChannel ch = trial_channel(n, trial_seed(opts.seed, kChanLabel, n, t), t);
            const ProbeState probe =
                random_probe(n, trial_seed(opts.seed, kProbeLabel, n, t), opts.probe_min_cond);
            const DensityMatrix rho0 = trial_input(n, trial_seed(opts.seed, kInputLabel, n, t));
            const Side side = t % 4 < 2 ? Side::First : Side::Second;

            const SimulatedProbeOutput sim = simulate_probe_output(ch, probe, side);
            const DensityMatrix rec = reconstruct_single(rho0, sim.output);
            const DensityMatrix oracle = apply(ch, rho0).state;
            single_oracle.push_back(trace_distance(rec, oracle));
            single_paths.push_back(
                trace_distance(rec, reconstruct_single_via_choi(rho0, sim.output)));

            // Same channel and input seen through a second, independent probe.
            const ProbeState probe2 = random_probe(
                n, trial_seed(opts.seed, kProbeLabel ^ 0xffff, n, t), opts.probe_min_cond);
            const SimulatedProbeOutput sim2 = simulate_probe_output(ch, probe2, side);
            probe_invariance.push_back(
                trace_distance(rec, reconstruct_single(rho0, sim2.output)));

            // Maximally entangled probe vs the generic path with P = 1/sqrt(N).
            const SimulatedProbeOutput sim_me =
                simulate_probe_output(ch, maximally_entangled_probe(n), Side::First);
            const SimulatedProbeOutput sim_id = simulate_probe_output(
                ch, probe_from_matrix(CMatrix::Identity(n, n)), Side::First);
            special_case.push_back(trace_distance(reconstruct_single(rho0, sim_me.output),
                                                  reconstruct_single(rho0, sim_id.output)));
        }
        const std::string suffix = "_n" + std::to_string(n);
        report.distances["single_oracle" + suffix] = single_oracle;
        report.distances["single_path_equiv" + suffix] = single_paths;
        report.distances["probe_invariance" + suffix] = probe_invariance;
        report.distances["special_case" + suffix] = special_case;
        report.paths["single_oracle" + suffix] = stats_of(single_oracle);
        report.paths["single_path_equiv" + suffix] = stats_of(single_paths);
        report.paths["probe_invariance" + suffix] = stats_of(probe_invariance);
        report.paths["special_case" + suffix] = stats_of(special_case);

        // Bipartite sweeps are the expensive ones; dims above 2 run a fifth
        // of the trials (20 when trials = 100).
        const int btrials = n == 2 ? opts.trials : std::max(1, opts.trials / 5);
        std::vector<double> bipartite_oracle, eq4_paths;
        for (int t = 0; t < btrials; ++t) {
            const KrausChannel ch1 =
                trial_channel(n, trial_seed(opts.seed, kChanLabel + 10, n, t), t);
            const KrausChannel ch2 =
                trial_channel(n, trial_seed(opts.seed, kChanLabel + 11, n, t), t + 1);
            const ProbeState pa =
                random_probe(n, trial_seed(opts.seed, kProbeLabel + 10, n, t), opts.probe_min_cond);
            const ProbeState pb =
                random_probe(n, trial_seed(opts.seed, kProbeLabel + 11, n, t), opts.probe_min_cond);
            const DensityMatrix rho0 =
                trial_input(n * n, trial_seed(opts.seed, kInputLabel + 10, n, t));

            const SimulatedProbeOutput po1 = simulate_probe_output(ch1, pa, Side::First);
            const SimulatedProbeOutput po2 = simulate_probe_output(ch2, pb, Side::Second);
            const DensityMatrix rec = reconstruct_bipartite(rho0, po1.output, po2.output);
            const DensityMatrix oracle = apply_two_sided(ch1, ch2, rho0).state;
            bipartite_oracle.push_back(trace_distance(rec, oracle));
            eq4_paths.push_back(trace_distance(rec, eq4_literal(rho0, po1.output, po2.output)));
        }
        report.distances["bipartite_oracle" + suffix] = bipartite_oracle;
        report.distances["eq4_path_equiv" + suffix] = eq4_paths;
        report.paths["bipartite_oracle" + suffix] = stats_of(bipartite_oracle);
        report.paths["eq4_path_equiv" + suffix] = stats_of(eq4_paths);
    }

    // Composite/nonlocal case: a dim-4 channel reconstructed through a
    // single dim-4 probe, the 2 (x) 2 system mapped to one qudit.
    std::vector<double> composite;
    const int ctrials = std::max(1, opts.trials / 5);
    for (int t = 0; t < ctrials; ++t) {
        const KrausChannel ch = trial_channel(4, trial_seed(opts.seed, kChanLabel + 20, 4, t), t);
        const ProbeState probe =
            random_probe(4, trial_seed(opts.seed, kProbeLabel + 20, 4, t), opts.probe_min_cond);
        const DensityMatrix rho0 = trial_input(4, trial_seed(opts.seed, kInputLabel + 20, 4, t));
        const SimulatedProbeOutput sim = simulate_probe_output(ch, probe, Side::First);
        const DensityMatrix rec = reconstruct_composite(rho0, sim.output, {2, 2});
        composite.push_back(trace_distance(rec, apply(ch, rho0).state));
    }
    report.distances["composite_oracle_4"] = composite;
    report.paths["composite_oracle_4"] = stats_of(composite);

    report.passed = true;
    for (const auto& [name, stats] : report.paths)
        if (stats.max > opts.tolerance) report.passed = false;
    return report;
}

double loglog_slope(const std::vector<std::pair<long long, double>>& points) {
    if (points.size() < 2) throw ParamError("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [shots, err] : points) {
        const double x = std::log10(static_cast<double>(shots));
        const double y = std::log10(std::max(err, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(points.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

ScalingReport run_scaling(const ScalingOptions& opts) {
    if (opts.shots_list.empty()) throw ParamError("run_scaling: empty shots list");
    if (!std::is_sorted(opts.shots_list.begin(), opts.shots_list.end()))
        throw ParamError("run_scaling: shots list must be ascending");
    if (opts.trials < 1) throw ParamError("run_scaling: trials must be >= 1");

    const KrausChannel ch = random_channel(opts.dim, opts.dim, rng::mix64(opts.seed, kChanLabel));
    const ProbeState probe =
        random_probe(opts.dim, rng::mix64(opts.seed, kProbeLabel), opts.probe_min_cond);
    const SimulatedProbeOutput exact = simulate_probe_output(ch, probe, Side::First);

    std::vector<DensityMatrix> inputs;
    inputs.reserve(opts.trials);
    for (int t = 0; t < opts.trials; ++t)
        inputs.push_back(trial_input(opts.dim, trial_seed(opts.seed, kInputLabel, opts.dim, t)));
    std::vector<DensityMatrix> oracles;
    oracles.reserve(opts.trials);
    for (const auto& rho0 : inputs) oracles.push_back(apply(ch, rho0).state);

    ScalingReport report;
    auto run_row = [&](long long shots) {
        std::vector<double> tomo_errs, recon_errs;
        for (int t = 0; t < opts.trials; ++t) {
            const std::uint64_t s =
                rng::mix64(trial_seed(opts.seed, kTomoLabel, opts.dim, t),
                           static_cast<std::uint64_t>(shots));
            const TomographyEstimate est = tomograph(exact.output.rho_out, shots, s);
            tomo_errs.push_back(trace_distance(est.estimate, exact.output.rho_out));
            const ProbeOutput noisy(probe, est.estimate, Side::First,
                                    shots == kExactShots ? ProbeSource::exact()
                                                         : ProbeSource::tomography(shots, s));
            recon_errs.push_back(
                trace_distance(reconstruct_single(inputs[t], noisy), oracles[t]));
        }
        report.rows.push_back(
            ScalingRow{shots, median_of(tomo_errs), median_of(recon_errs), probe.condition()});
    };

    if (opts.include_exact_row) run_row(kExactShots);
    for (long long shots : opts.shots_list) run_row(shots);

    std::vector<std::pair<long long, double>> tomo_pts, recon_pts;
    for (const auto& row : report.rows) {
        if (row.shots == kExactShots) continue;
        tomo_pts.emplace_back(row.shots, row.tomo_err_median);
        recon_pts.emplace_back(row.shots, row.recon_err_median);
    }
    if (tomo_pts.size() >= 2) {
        report.tomo_slope = loglog_slope(tomo_pts);
        report.recon_slope = loglog_slope(recon_pts);
    }
    return report;
}

}  // namespace qprobe
