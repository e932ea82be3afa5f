// qprobe command-line front end: generate channels/probes/states, simulate
// probe outputs (exact or finite-shot tomography), run reconstructions and
// the verification/scaling harnesses. Every command is deterministic given
// its --seed; PROBE_CHANNEL_SEED provides the default seed.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parameter error,
// 3 degenerate-physics error (zero probability / unusable estimate).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qprobe/harness.hpp"
#include "qprobe/io.hpp"
#include "qprobe/rng.hpp"
#include "qprobe/tomography.hpp"

namespace {

using namespace qprobe;
using io::json;

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PROBE_CHANNEL_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

void emit_report(const std::string& path, io::RunReport report, const Stopwatch& timer) {
    if (path.empty()) return;
    report.metrics["elapsed_ms"] = timer.elapsed_ms();
    io::write_json_file(path, io::report_to_json(report));
}

Side parse_side(const std::string& s) {
    if (s == "first") return Side::First;
    if (s == "second") return Side::Second;
    throw ParamError("side must be 'first' or 'second'");
}

// ---- gen ------------------------------------------------------------------

struct GenChannelArgs {
    std::string family;
    int dim = 2;
    std::optional<double> p;
    std::optional<double> gamma;
    std::optional<int> index;
    int env = 0;
    std::uint64_t seed = default_seed();
    std::string matrix_file;
    std::string out;
    std::string report;
};

int run_gen_channel(const GenChannelArgs& a) {
    Stopwatch timer;
    std::optional<KrausChannel> ch;
    if (a.family == "random") {
        ch = random_channel(a.dim, a.env > 0 ? a.env : a.dim, a.seed);
    } else {
        std::vector<double> params;
        if (a.p) params.push_back(*a.p);
        else if (a.gamma) params.push_back(*a.gamma);
        else if (a.index) params.push_back(static_cast<double>(*a.index));
        std::optional<CMatrix> matrix;
        if (!a.matrix_file.empty())
            matrix = io::matrix_from_json(io::read_json_file(a.matrix_file));
        ch = standard_channel(a.family, a.dim, params, matrix ? &*matrix : nullptr);
    }
    io::write_json_file(a.out, io::channel_to_json(*ch));

    io::RunReport report;
    report.command = "gen channel";
    report.seed = a.seed;
    report.inputs = {{"family", a.family}, {"dim", a.dim}};
    report.metrics["kraus_count"] = static_cast<double>(ch->kraus().size());
    report.metrics["trace_preserving"] = ch->trace_preserving() ? 1.0 : 0.0;
    report.artifacts = {a.out};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.out << " (" << ch->label() << ", "
              << (ch->trace_preserving() ? "trace-preserving" : "non-trace-preserving") << ")\n";
    return 0;
}

struct GenProbeArgs {
    int dim = 2;
    std::uint64_t seed = default_seed();
    double min_cond = 0.05;
    bool max_entangled = false;
    std::string matrix_file;
    std::string out;
    std::string report;
};

int run_gen_probe(const GenProbeArgs& a) {
    Stopwatch timer;
    std::optional<ProbeState> probe;
    if (a.max_entangled)
        probe = maximally_entangled_probe(a.dim);
    else if (!a.matrix_file.empty())
        probe = probe_from_matrix(io::matrix_from_json(io::read_json_file(a.matrix_file)));
    else
        probe = random_probe(a.dim, a.seed, a.min_cond);
    if (probe->condition() < 0.1)
        std::cerr << "warning: probe condition " << probe->condition()
                  << " is small; reconstruction will amplify tomography noise\n";
    io::write_json_file(a.out, io::probe_to_json(*probe));

    io::RunReport report;
    report.command = "gen probe";
    report.seed = a.seed;
    report.inputs = {{"dim", a.dim}, {"max_entangled", a.max_entangled}};
    report.metrics["condition"] = probe->condition();
    report.artifacts = {a.out};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.out << " (condition " << probe->condition() << ")\n";
    return 0;
}

struct GenStateArgs {
    int dim = 2;
    std::string pure;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string report;
};

int run_gen_state(const GenStateArgs& a) {
    Stopwatch timer;
    std::optional<DensityMatrix> rho;
    if (!a.pure.empty()) {
        if (a.pure == "plus") {
            rho = DensityMatrix::pure(CVector::Ones(a.dim));
        } else {
            int k = 0;
            try {
                k = std::stoi(a.pure);
            } catch (const std::exception&) {
                throw ParamError("gen state: --pure expects 'plus' or a basis index");
            }
            if (k < 0 || k >= a.dim) throw ParamError("gen state: basis index out of range");
            CVector v = CVector::Zero(a.dim);
            v(k) = 1.0;
            rho = DensityMatrix::pure(v);
        }
    } else if (a.seed) {
        auto g = rng::substream(*a.seed, 0x7374ULL);
        rho = rng::random_density_matrix(a.dim, g);
    } else {
        throw ParamError("gen state: provide --pure or --seed");
    }
    io::write_json_file(a.out, io::state_to_json(*rho));

    io::RunReport report;
    report.command = "gen state";
    report.seed = a.seed.value_or(0);
    report.inputs = {{"dim", a.dim}, {"pure", a.pure}};
    report.metrics["purity"] = purity(*rho);
    report.artifacts = {a.out};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string channel_file;
    std::string probe_file;
    std::string side = "first";
    std::string shots = "exact";
    std::uint64_t seed = default_seed();
    std::string out;
    std::string report;
};

int run_simulate(const SimulateArgs& a) {
    Stopwatch timer;
    const KrausChannel ch = io::channel_from_json(io::read_json_file(a.channel_file));
    const ProbeState probe = io::probe_from_json(io::read_json_file(a.probe_file));
    const Side side = parse_side(a.side);

    std::optional<SimulatedProbeOutput> sim;
    if (a.shots == "exact") {
        sim = simulate_probe_output(ch, probe, side);
    } else {
        long long shots = 0;
        try {
            shots = std::stoll(a.shots);
        } catch (const std::exception&) {
            throw ParamError("simulate: --shots expects 'exact' or a positive integer");
        }
        if (shots < 1) throw ParamError("simulate: shots must be >= 1");
        sim = simulate_probe_output_tomographed(ch, probe, side, shots, a.seed);
    }
    io::write_json_file(a.out, io::probe_output_to_json(sim->output));

    io::RunReport report;
    report.command = "simulate";
    report.seed = a.seed;
    report.inputs = {{"channel", a.channel_file},
                     {"probe", a.probe_file},
                     {"side", a.side},
                     {"shots", a.shots}};
    report.metrics["probability"] = sim->probability;
    report.metrics["probe_condition"] = probe.condition();
    report.artifacts = {a.out};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.out << " (probability " << sim->probability << ")\n";
    return 0;
}

// ---- reconstruct ------------------------------------------------------------

struct ReconstructArgs {
    std::string mode = "single";
    std::string probe_output;
    std::string probe_output2;
    std::string input;
    std::string out;
    std::string oracle;
    std::string oracle2;
    std::vector<int> dims;
    bool raw_choi = false;
    std::string report;
};

int run_reconstruct(const ReconstructArgs& a) {
    Stopwatch timer;
    const DensityMatrix rho0 = io::state_from_json(io::read_json_file(a.input));
    const ProbeOutput po1 = io::probe_output_from_json(io::read_json_file(a.probe_output));
    ReconstructOptions opts;
    opts.project_noisy_choi = !a.raw_choi;

    io::RunReport report;
    report.command = "reconstruct";
    report.inputs = {{"mode", a.mode}, {"probe_output", a.probe_output}, {"input", a.input}};
    NormalizationReport norm;

    std::optional<DensityMatrix> result;
    std::optional<DensityMatrix> oracle_state;
    if (a.mode == "single" || a.mode == "composite") {
        if (a.mode == "composite") {
            std::pair<int, int> dims = {po1.probe.dim(), 1};
            if (a.dims.size() == 2) dims = {a.dims[0], a.dims[1]};
            result = reconstruct_composite(rho0, po1, dims);
        } else {
            result = reconstruct_single(rho0, po1);
        }
        if (!a.oracle.empty()) {
            const KrausChannel ch = io::channel_from_json(io::read_json_file(a.oracle));
            ChannelOutput direct = apply(ch, rho0);
            norm.p_s = direct.probability;
            norm.p_iii = simulate_probe_output(ch, po1.probe, po1.side).probability;
            oracle_state = std::move(direct.state);
        }
    } else if (a.mode == "bipartite") {
        if (a.probe_output2.empty())
            throw ParamError("reconstruct: bipartite mode needs --probe-output2");
        const ProbeOutput po2 = io::probe_output_from_json(io::read_json_file(a.probe_output2));
        result = reconstruct_bipartite(rho0, po1, po2, opts);
        if (!a.oracle.empty()) {
            if (a.oracle2.empty())
                throw ParamError("reconstruct: bipartite oracle needs --oracle2");
            const KrausChannel ch1 = io::channel_from_json(io::read_json_file(a.oracle));
            const KrausChannel ch2 = io::channel_from_json(io::read_json_file(a.oracle2));
            ChannelOutput direct = apply_two_sided(ch1, ch2, rho0);
            norm.p = direct.probability;
            norm.p_i = simulate_probe_output(ch1, po1.probe, Side::First).probability;
            norm.p_ii = simulate_probe_output(ch2, po2.probe, Side::Second).probability;
            oracle_state = std::move(direct.state);
        }
    } else {
        throw ParamError("reconstruct: unknown mode '" + a.mode + "'");
    }

    io::write_json_file(a.out, io::state_to_json(*result));
    report.metrics["purity"] = purity(*result);
    if (oracle_state) {
        report.metrics["oracle_trace_distance"] = trace_distance(*result, *oracle_state);
        norm.validate();
        if (norm.p) report.metrics["p"] = *norm.p;
        if (norm.p_i) report.metrics["p_I"] = *norm.p_i;
        if (norm.p_ii) report.metrics["p_II"] = *norm.p_ii;
        if (norm.p_iii) report.metrics["p_III"] = *norm.p_iii;
        if (norm.p_s) report.metrics["p_s"] = *norm.p_s;
    }
    report.artifacts = {a.out};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.out;
    if (oracle_state)
        std::cout << " (oracle trace distance "
                  << trace_distance(*result, *oracle_state) << ")";
    std::cout << "\n";
    return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
    int trials = 100;
    std::vector<int> dims = {2, 3};
    std::uint64_t seed = default_seed();
    double tol = 1e-9;
    double min_cond = 0.1;
    std::string report;
};

int run_verify_cmd(const VerifyArgs& a) {
    Stopwatch timer;
    VerifyOptions opts;
    opts.trials = a.trials;
    opts.dims = a.dims;
    opts.seed = a.seed;
    opts.tolerance = a.tol;
    opts.probe_min_cond = a.min_cond;
    const VerifyReport result = run_verify(opts);

    io::RunReport report;
    report.command = "verify";
    report.seed = a.seed;
    report.inputs = {{"trials", a.trials}, {"dims", a.dims}, {"tol", a.tol}};
    for (const auto& [name, stats] : result.paths) {
        report.metrics[name + "_max"] = stats.max;
        report.metrics[name + "_median"] = stats.median;
        std::printf("%-28s trials=%-4d max=%.3e median=%.3e %s\n", name.c_str(), stats.trials,
                    stats.max, stats.median, stats.max <= a.tol ? "ok" : "FAIL");
        if (stats.max > a.tol) {
            const auto& d = result.distances.at(name);
            for (std::size_t t = 0; t < d.size(); ++t)
                if (d[t] > a.tol)
                    std::printf("  trial %zu: distance %.6e exceeds %.1e\n", t, d[t], a.tol);
        }
    }
    emit_report(a.report, std::move(report), timer);
    std::cout << (result.passed ? "verify: all paths within tolerance "
                                : "verify: FAILED at tolerance ")
              << a.tol << "\n";
    return result.passed ? 0 : 1;
}

// ---- scaling ----------------------------------------------------------------

struct ScalingArgs {
    std::vector<long long> shots = {1000, 10000, 100000, 1000000};
    int trials = 50;
    std::uint64_t seed = default_seed();
    int dim = 2;
    double min_cond = 0.5;
    bool exact_row = false;
    std::string csv;
    std::string report;
};

int run_scaling_cmd(const ScalingArgs& a) {
    Stopwatch timer;
    ScalingOptions opts;
    opts.shots_list = a.shots;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.dim = a.dim;
    opts.probe_min_cond = a.min_cond;
    opts.include_exact_row = a.exact_row;
    const ScalingReport result = run_scaling(opts);

    std::FILE* f = std::fopen(a.csv.c_str(), "w");
    if (!f) throw ParamError("scaling: cannot write '" + a.csv + "'");
    std::fprintf(f, "shots,tomo_err_median,recon_err_median,probe_cond\n");
    for (const auto& row : result.rows)
        std::fprintf(f, "%lld,%.17g,%.17g,%.17g\n", row.shots, row.tomo_err_median,
                     row.recon_err_median, row.probe_cond);
    std::fclose(f);

    io::RunReport report;
    report.command = "scaling";
    report.seed = a.seed;
    report.inputs = {{"shots", a.shots}, {"trials", a.trials}, {"dim", a.dim}};
    report.metrics["tomo_slope"] = result.tomo_slope;
    report.metrics["recon_slope"] = result.recon_slope;
    // Empirical noise amplification through the probe inverse, per shot row.
    for (const auto& row : result.rows)
        if (row.shots != kExactShots && row.tomo_err_median > 0.0)
            report.metrics["recon_to_tomo_ratio_" + std::to_string(row.shots)] =
                row.recon_err_median / row.tomo_err_median;
    report.artifacts = {a.csv};
    emit_report(a.report, std::move(report), timer);
    std::cout << "wrote " << a.csv << " (tomography slope " << result.tomo_slope << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe-state channel reconstruction toolkit"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate channel/probe/state JSON files");
    gen->require_subcommand(1);

    GenChannelArgs gc;
    auto* gen_channel = gen->add_subcommand("channel", "Write a Kraus channel");
    gen_channel->add_option("--family", gc.family,
                            "identity|depolarizing|amplitude_damping|phase_damping|"
                            "unitary|projector|random")
        ->required();
    gen_channel->add_option("--dim", gc.dim);
    gen_channel->add_option("--p", gc.p, "probability parameter");
    gen_channel->add_option("--gamma", gc.gamma, "damping parameter");
    gen_channel->add_option("--index", gc.index, "projector basis index");
    gen_channel->add_option("--env", gc.env, "environment dimension (random family)");
    gen_channel->add_option("--seed", gc.seed);
    gen_channel->add_option("--matrix", gc.matrix_file, "matrix JSON (unitary family)");
    gen_channel->add_option("--out", gc.out)->required();
    gen_channel->add_option("--report", gc.report);

    GenProbeArgs gp;
    auto* gen_probe = gen->add_subcommand("probe", "Write a probe state");
    gen_probe->add_option("--dim", gp.dim);
    gen_probe->add_option("--seed", gp.seed);
    gen_probe->add_option("--min-cond", gp.min_cond);
    gen_probe->add_flag("--max-entangled", gp.max_entangled);
    gen_probe->add_option("--matrix", gp.matrix_file);
    gen_probe->add_option("--out", gp.out)->required();
    gen_probe->add_option("--report", gp.report);

    GenStateArgs gs;
    auto* gen_state = gen->add_subcommand("state", "Write a density matrix");
    gen_state->add_option("--dim", gs.dim);
    gen_state->add_option("--pure", gs.pure, "'plus' or a basis index");
    gen_state->add_option("--seed", gs.seed, "random mixed state");
    gen_state->add_option("--out", gs.out)->required();
    gen_state->add_option("--report", gs.report);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Apply a channel to one side of a probe");
    simulate->add_option("--channel", sim.channel_file)->required();
    simulate->add_option("--probe", sim.probe_file)->required();
    simulate->add_option("--side", sim.side, "first|second");
    simulate->add_option("--shots", sim.shots, "'exact' or shots per setting");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--out", sim.out)->required();
    simulate->add_option("--report", sim.report);

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a channel output");
    reconstruct->add_option("--mode", rec.mode, "single|bipartite|composite");
    reconstruct->add_option("--probe-output", rec.probe_output)->required();
    reconstruct->add_option("--probe-output2", rec.probe_output2);
    reconstruct->add_option("--input", rec.input)->required();
    reconstruct->add_option("--out", rec.out)->required();
    reconstruct->add_option("--oracle", rec.oracle, "channel JSON for ground-truth comparison");
    reconstruct->add_option("--oracle2", rec.oracle2);
    reconstruct->add_option("--dims", rec.dims, "composite factor dims, e.g. 2,2")
        ->delimiter(',');
    reconstruct->add_flag("--raw-choi", rec.raw_choi, "skip PSD projection of noisy Choi");
    reconstruct->add_option("--report", rec.report);

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Random-trial oracle equivalence suite");
    verify->add_option("--trials", ver.trials);
    verify->add_option("--dims", ver.dims)->delimiter(',');
    verify->add_option("--seed", ver.seed);
    verify->add_option("--tol", ver.tol);
    verify->add_option("--min-cond", ver.min_cond);
    verify->add_option("--report", ver.report);

    ScalingArgs sc;
    auto* scaling = app.add_subcommand("scaling", "Tomography shot-scaling study");
    scaling->add_option("--shots", sc.shots)->delimiter(',');
    scaling->add_option("--trials", sc.trials);
    scaling->add_option("--seed", sc.seed);
    scaling->add_option("--dim", sc.dim);
    scaling->add_option("--min-cond", sc.min_cond);
    scaling->add_flag("--exact-row", sc.exact_row);
    scaling->add_option("--csv", sc.csv)->required();
    scaling->add_option("--report", sc.report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen_channel->parsed()) return run_gen_channel(gc);
        if (gen_probe->parsed()) return run_gen_probe(gp);
        if (gen_state->parsed()) return run_gen_state(gs);
        if (simulate->parsed()) return run_simulate(sim);
        if (reconstruct->parsed()) return run_reconstruct(rec);
        if (verify->parsed()) return run_verify_cmd(ver);
        if (scaling->parsed()) return run_scaling_cmd(sc);
    } catch (const ZeroProbabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateEstimateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
