#pragma once

// The reconstruction laws: given the tomographed (or exact) output of a
// channel acting on one side of an entangled probe, predict the channel's
// output for ANY input state.
//
// Two independent routes are implemented and cross-checked:
//   * the literal basis double sum (reconstruct_single / eq4_literal),
//   * Choi-matrix extraction followed by contraction (choi_from_probe_output
//     + apply_choi), undoing the probe via
//     |P> = (1 (x) P^T) sum_k |kk> = (P (x) 1) sum_k |kk>.
//
// Absolute success probabilities are not observable from unit-trace probe
// data; every reconstruction returns a unit-trace state and the probability
// bookkeeping (NormalizationReport) is filled only in oracle mode.

#include <cstdint>
#include <optional>

#include "qprobe/channels.hpp"
#include "qprobe/linalg.hpp"
#include "qprobe/probe.hpp"

namespace qprobe {

enum class SourceKind { Exact, Tomography };

struct ProbeSource {
    SourceKind kind = SourceKind::Exact;
    long long shots = 0;
    std::uint64_t seed = 0;

    static ProbeSource exact() { return {}; }
    static ProbeSource tomography(long long shots, std::uint64_t seed) {
        return {SourceKind::Tomography, shots, seed};
    }
};

/// A probe state together with the channel's (normalized) action on it.
/// side = First means the stored state is ($ (x) 1)|P><P| / p,
/// side = Second means (1 (x) $)|P><P| / p.
struct ProbeOutput {
    ProbeOutput(ProbeState probe, DensityMatrix rho_out, Side side, ProbeSource source);

    ProbeState probe;
    DensityMatrix rho_out;
    Side side;
    ProbeSource source;
};

/// Success probabilities, known only when the Kraus operators are (trace of
/// the unnormalized outputs). Each present value must lie in (0, 1].
struct NormalizationReport {
    std::optional<double> p;       // joint two-sided probability
    std::optional<double> p_i;     // ($1 (x) 1) probe output trace
    std::optional<double> p_ii;    // (1 (x) $2) probe output trace
    std::optional<double> p_iii;   // ($ (x) 1) probe output trace, single law
    std::optional<double> p_s;     // Tr($ rho0)

    void validate() const;
};

struct ReconstructOptions {
    /// Project the extracted Choi matrix to PSD (trace preserved) when the
    /// probe output came from tomography. Disable for raw error-scaling runs.
    bool project_noisy_choi = true;
};

/// Undo the probe: the unnormalized Choi matrix J = ($ (x) 1) sum_kl |kk><ll|
/// recovered as (1 (x) (P^T)^-1) rho_out (1 (x) (P^*)^-1) for side = First and
/// the swap-mirrored expression for side = Second. A trace-preserving channel
/// yields Tr(J) = N.
CMatrix choi_from_probe_output(const ProbeOutput& po);

struct ChoiApplication {
    DensityMatrix state;
    double scale;  // trace of the unnormalized output; p_s for a correctly scaled J
};

/// Contract a channel's Choi matrix with a state:
/// output = Tr_2[ J (1 (x) rho^T) ], renormalized.
ChoiApplication apply_choi(const CMatrix& choi, const DensityMatrix& rho);

/// The single-system law, evaluated literally as the basis double sum
///   sum_mn <Phi_m| rho_out |Phi_n>  Phi_m P^-1 rho0 (P^-1)^dag Phi_n^dag
/// then renormalized to unit trace. side = Second outputs are first mapped to
/// the equivalent side = First data (probe P^T, state S rho_out S).
DensityMatrix reconstruct_single(const DensityMatrix& rho0, const ProbeOutput& po);

/// Same map via Choi extraction; the independent cross-check route.
DensityMatrix reconstruct_single_via_choi(const DensityMatrix& rho0, const ProbeOutput& po,
                                          ReconstructOptions opts = {});

/// Two-sided bipartite law: po1 (side First) describes the channel on the
/// first factor, po2 (side Second) the one on the second; the two probes may
/// differ. Implemented via the two extracted Choi matrices.
DensityMatrix reconstruct_bipartite(const DensityMatrix& rho0, const ProbeOutput& po1,
                                    const ProbeOutput& po2, ReconstructOptions opts = {});

/// The bipartite law as the literal double sum
///   rho_f ~ sum_mn Tr{ S (Pb^-1 (x) Phi_m^*) out2 ((Pb^dag)^-1 (x) Phi_n^T) S rho0^* }
///           * (1 (x) Phi_m^T (Pa^T)^-1) out1 (1 (x) (Pa^*)^-1 Phi_n^*),
/// where out1/out2 are the side-First/side-Second probe outputs with probes
/// Pa/Pb and rho0^* is the entrywise conjugate in the computational basis.
/// The trace factor equals <Phi_m|(1 (x) $2) rho0|Phi_n> and the outer factor
/// equals ($1 (x) 1)|Phi_m><Phi_n|, so the sum rebuilds ($1 (x) $2) rho0;
/// agreement with reconstruct_bipartite is asserted by the test suite.
DensityMatrix eq4_literal(const DensityMatrix& rho0, const ProbeOutput& po1,
                          const ProbeOutput& po2);

/// Composite systems: an N1 (x) N2 system is treated as a single system of
/// dimension N1*N2 (covers nonlocal channels such as entangling gates).
DensityMatrix reconstruct_composite(const DensityMatrix& rho0, const ProbeOutput& po,
                                    std::pair<int, int> dims);

// ---- oracle-mode helpers -------------------------------------------------

struct SimulatedProbeOutput {
    ProbeOutput output;
    double probability;  // p_I, p_II or p_III depending on side/usage
};

/// Apply a known channel to one side of |P><P| exactly.
SimulatedProbeOutput simulate_probe_output(const KrausChannel& ch, const ProbeState& probe,
                                           Side side);

/// Same, followed by simulated tomography of the output.
SimulatedProbeOutput simulate_probe_output_tomographed(const KrausChannel& ch,
                                                       const ProbeState& probe, Side side,
                                                       long long shots, std::uint64_t seed);

}  // namespace qprobe
