#pragma once

// Probe states: full-rank pure bipartite states |P> = sum a_ij |ij> stored as
// their N x N coefficient matrix. The inverse is cached because every
// reconstruction multiplies by it twice; the singular-value ratio
// sigma_min/sigma_max is kept as a conditioning diagnostic (1 = maximally
// entangled, ~0 = nearly degenerate and useless under noise).

#include <cstdint>

#include "qprobe/linalg.hpp"

namespace qprobe {

class ProbeState {
public:
    int dim() const { return static_cast<int>(p_.rows()); }
    const CMatrix& p_matrix() const { return p_; }
    const CMatrix& p_inverse() const { return p_inv_; }

    /// sigma_min / sigma_max of the coefficient matrix, in (0, 1].
    double condition() const { return cond_; }

private:
    friend ProbeState probe_from_matrix(const CMatrix&, double);
    friend ProbeState maximally_entangled_probe(int);
    ProbeState(CMatrix p, CMatrix p_inv, double cond)
        : p_(std::move(p)), p_inv_(std::move(p_inv)), cond_(cond) {}

    CMatrix p_;
    CMatrix p_inv_;
    double cond_;
};

/// Normalizes p to Tr(P^dag P) = 1, verifies full rank (sigma_min >=
/// rank_tol * sigma_max) and caches the inverse. Throws RankError with the
/// offending singular-value ratio, DimensionError for non-square input.
ProbeState probe_from_matrix(const CMatrix& p, double rank_tol = 1e-8);

/// P = identity/sqrt(N): the state (1/sqrt(N)) sum_k |kk>.
ProbeState maximally_entangled_probe(int n);

/// Seeded complex Gaussian coefficient matrix, resampled until the
/// singular-value ratio reaches min_cond (at most 1000 attempts).
ProbeState random_probe(int n, std::uint64_t seed, double min_cond = 0.05);

/// The length-N^2 state vector; unit norm.
CVector probe_vector(const ProbeState& ps);

}  // namespace qprobe
