#pragma once

// Quantum channels as Kraus-operator lists. Direct application of a known
// channel (apply / apply_one_sided / apply_two_sided) is the ground-truth
// oracle that every reconstruction is verified against. Non-trace-preserving
// channels are first class: the returned probability is the trace of the
// unnormalized output (the post-selection success probability).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qprobe/linalg.hpp"

namespace qprobe {

class KrausChannel {
public:
    /// Validates that every operator is dim x dim and that
    /// sum K^dag K <= identity (within 1e-10).
    KrausChannel(int dim, std::vector<CMatrix> kraus, std::string label = "");

    int dim() const { return dim_; }
    const std::vector<CMatrix>& kraus() const { return kraus_; }
    const std::string& label() const { return label_; }

    /// sum_i K_i^dag K_i.
    CMatrix kraus_sum() const;

    /// True when kraus_sum() equals the identity within 1e-10.
    bool trace_preserving() const;

private:
    int dim_;
    std::vector<CMatrix> kraus_;
    std::string label_;
};

struct ChannelOutput {
    DensityMatrix state;  // renormalized to unit trace
    double probability;   // trace of the unnormalized output
};

/// sum K rho K^dag, renormalized; probability is its trace.
/// Throws ZeroProbabilityError when the channel annihilates the state.
ChannelOutput apply(const KrausChannel& ch, const DensityMatrix& rho);

/// Applies K (x) 1 (side first) or 1 (x) K (side second) on a bipartite
/// state with factor dimensions dims.
ChannelOutput apply_one_sided(const KrausChannel& ch, const DensityMatrix& rho, Side side,
                              std::pair<int, int> dims);

/// ch1 on the first factor, ch2 on the second; the probability is the trace
/// of the joint unnormalized output (no product structure assumed).
ChannelOutput apply_two_sided(const KrausChannel& ch1, const KrausChannel& ch2,
                              const DensityMatrix& rho);

// Standard zoo.
KrausChannel identity_channel(int dim);
KrausChannel depolarizing_channel(int dim, double p);
KrausChannel amplitude_damping_channel(double gamma);
KrausChannel phase_damping_channel(double gamma);
KrausChannel unitary_channel(const CMatrix& u);
KrausChannel projector_channel(int dim, int basis_index);

/// Name-based factory used by the CLI. `matrix` is consumed by the unitary
/// family; scalar families read params[0].
KrausChannel standard_channel(const std::string& family, int dim,
                              const std::vector<double>& params,
                              const CMatrix* matrix = nullptr);

/// Trace-preserving channel with env_dim Kraus operators cut from a
/// Haar-random isometry; deterministic per seed.
KrausChannel random_channel(int dim, int env_dim, std::uint64_t seed);

}  // namespace qprobe
