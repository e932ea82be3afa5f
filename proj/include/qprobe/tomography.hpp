#pragma once

// Simulated state tomography: an informationally complete observable set
// built from the Weyl unitaries, finite-shot Born sampling, linear-inversion
// estimation and PSD repair. Exact mode (shots = kExactShots) skips sampling
// and must reproduce the input state to machine precision.

#include <cstdint>
#include <vector>

#include "qprobe/linalg.hpp"

namespace qprobe {

/// Sentinel for the infinite-shot (exact expectation values) mode.
inline constexpr long long kExactShots = 0;

struct TomographyEstimate {
    DensityMatrix estimate;       // PSD-repaired
    int dim = 0;
    long long shots_per_setting;  // kExactShots for exact mode
    std::uint64_t seed = 0;
    double negative_mass = 0.0;   // total clipped eigenvalue magnitude
    int settings_count = 0;
};

/// Hermitian observables spanning the full dim^2 operator space: the
/// identity plus, for every nontrivial Weyl unitary W, the nonzero and
/// deduplicated (up to sign) pair (W + W^dag)/2 and (W - W^dag)/(2i).
/// For dim = 2 this is {I, X, Z, Y}.
std::vector<CMatrix> measurement_settings(int dim);

/// Tr(rho * O) for each observable.
std::vector<double> exact_expectations(const DensityMatrix& rho,
                                       const std::vector<CMatrix>& settings);

/// Empirical means of `shots` Born-rule draws in each observable's
/// eigenbasis. Setting k consumes the substream (seed, k), so results are
/// independent of evaluation order.
std::vector<double> sample_expectations(const DensityMatrix& rho,
                                        const std::vector<CMatrix>& settings, long long shots,
                                        std::uint64_t seed);

/// Least-squares solve of Tr(rho_hat O_k) = estimate_k plus Tr(rho_hat) = 1
/// over the Hermitian operator space. Exact estimates give exact recovery;
/// the result may be non-PSD and is repaired downstream. Throws
/// IncompleteSettingsError when the settings do not span the space.
CMatrix linear_inversion(const std::vector<double>& estimates,
                         const std::vector<CMatrix>& settings, int dim);

/// settings -> sampling -> inversion -> PSD repair.
TomographyEstimate tomograph(const DensityMatrix& rho_true, long long shots, std::uint64_t seed);

}  // namespace qprobe
