#pragma once

// Seeded random-trial harnesses: oracle-equivalence / probe-invariance /
// path-equivalence sweeps (verify) and the tomography shot-scaling study
// (scaling). Both are deterministic per seed; every trial derives its own
// substream so trial order never matters.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qprobe/reconstruct.hpp"

namespace qprobe {

struct PathStats {
    double max = 0.0;
    double median = 0.0;
    int trials = 0;
};

struct VerifyOptions {
    int trials = 100;
    std::vector<int> dims = {2, 3};
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    double probe_min_cond = 0.1;
};

struct VerifyReport {
    // Keyed by path name, e.g. "single_oracle_n2", "bipartite_oracle_n3".
    std::map<std::string, PathStats> paths;
    // Per-trial distances behind each stats entry, for failure diagnostics.
    std::map<std::string, std::vector<double>> distances;
    double tolerance = 0.0;
    bool passed = false;
};

/// Runs, for every dim: single-system and bipartite oracle equivalence
/// (alternating trace-preserving and non-trace-preserving channels, fresh
/// random probes), probe invariance, Choi-vs-literal path equivalence and
/// the maximally-entangled special case. Bipartite sweeps use trials/5 at
/// dims above 2 (they are the expensive ones).
VerifyReport run_verify(const VerifyOptions& opts);

struct ScalingOptions {
    std::vector<long long> shots_list = {1000, 10000, 100000, 1000000};
    int trials = 50;
    std::uint64_t seed = 0;
    int dim = 2;             // system dimension; tomography runs at dim^2
    double probe_min_cond = 0.5;
    bool include_exact_row = false;
};

struct ScalingRow {
    long long shots = 0;  // 0 marks the exact-mode row
    double tomo_err_median = 0.0;
    double recon_err_median = 0.0;
    double probe_cond = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double tomo_slope = 0.0;   // log-log fit over the sampled rows
    double recon_slope = 0.0;
};

ScalingReport run_scaling(const ScalingOptions& opts);

/// Least-squares slope of log10(err) against log10(shots).
double loglog_slope(const std::vector<std::pair<long long, double>>& points);

}  // namespace qprobe
