#include "qprobe/reconstruct.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qprobe/bases.hpp"
#include "qprobe/tomography.hpp"

namespace qprobe {

namespace {

/// Renormalize an unnormalized reconstruction result to a unit-trace state.
/// Raw (unprojected) noisy paths can leave eigenvalues slightly below the
/// density-matrix floor; those are clipped before validation.
DensityMatrix finalize_state(CMatrix unnorm, const char* who) {
    const double tr = unnorm.trace().real();
    if (tr <= tol::kZeroProbability)
        throw ZeroProbabilityError(std::string(who) + ": output trace " + std::to_string(tr));
    CMatrix m = (unnorm + unnorm.adjoint()) / (2.0 * tr);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::kEigenFloor) {
        m = clip_negative_eigenvalues(m);
        m /= m.trace().real();
    }
    return DensityMatrix(std::move(m));
}

/// Map a side = Second probe output to the equivalent side = First data:
/// S (1 (x) $)|P><P| S = ($ (x) 1)|P'><P'| with P' = P^T.
ProbeOutput to_first_side(const ProbeOutput& po) {
    if (po.side == Side::First) return po;
    const CMatrix s = swap_operator(po.probe.dim());
    return ProbeOutput(probe_from_matrix(po.probe.p_matrix().transpose()),
                       DensityMatrix(s * po.rho_out.matrix() * s), Side::First, po.source);
}

CMatrix maybe_project_choi(CMatrix j, const ProbeSource& source, const ReconstructOptions& opts) {
    if (source.kind != SourceKind::Tomography || !opts.project_noisy_choi) return j;
    const double target_trace = j.trace().real();
    if (target_trace <= 0.0)
        throw DegenerateEstimateError("choi projection: non-positive trace");
    CMatrix clipped = clip_negative_eigenvalues(j);
    const double tr = clipped.trace().real();
    if (tr <= 0.0) throw DegenerateEstimateError("choi projection: all eigenvalues clipped");
    return clipped * (target_trace / tr);
}

/// Contract a Choi matrix into one factor of a bipartite state (matrix form,
/// unnormalized): side First gives
///   out[(a,con),(b,cop)] = sum_{a',b'} J[(a,a'),(b,b')] m[(a',con),(b',cop)].
CMatrix apply_choi_to_factor(const CMatrix& j, const CMatrix& m, Side side,
                             std::pair<int, int> dims) {
    const auto [d1, d2] = dims;
    const int acted = side == Side::First ? d1 : d2;
    const int spect = side == Side::First ? d2 : d1;
    if (j.rows() != static_cast<Eigen::Index>(acted) * acted)
        throw DimensionError("apply_choi_to_factor: Choi dim mismatch");
    if (m.rows() != static_cast<Eigen::Index>(d1) * d2)
        throw DimensionError("apply_choi_to_factor: state dim mismatch");
    auto row = [&](int factor_idx, int spectator_idx) {
        return side == Side::First ? factor_idx * d2 + spectator_idx
                                   : spectator_idx * d2 + factor_idx;
    };
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (int a = 0; a < acted; ++a)
        for (int b = 0; b < acted; ++b)
            for (int ap = 0; ap < acted; ++ap)
                for (int bp = 0; bp < acted; ++bp) {
                    const Complex jv = j(a * acted + ap, b * acted + bp);
                    if (jv == Complex(0.0, 0.0)) continue;
                    for (int al = 0; al < spect; ++al)
                        for (int be = 0; be < spect; ++be)
                            out(row(a, al), row(b, be)) += jv * m(row(ap, al), row(bp, be));
                }
    return out;
}

void require_pair_sides(const ProbeOutput& po1, const ProbeOutput& po2, const char* who) {
    if (po1.side != Side::First || po2.side != Side::Second)
        throw ParamError(std::string(who) +
                         ": expected probe outputs with sides (first, second)");
    if (po1.probe.dim() != po2.probe.dim())
        throw DimensionError(std::string(who) + ": probe dims differ");
}

}  // namespace

ProbeOutput::ProbeOutput(ProbeState probe_, DensityMatrix rho_out_, Side side_,
                         ProbeSource source_)
    : probe(std::move(probe_)), rho_out(std::move(rho_out_)), side(side_), source(source_) {
    if (rho_out.dim() != probe.dim() * probe.dim())
        throw DimensionError("ProbeOutput: state dim " + std::to_string(rho_out.dim()) +
                             " is not probe dim " + std::to_string(probe.dim()) + " squared");
}

void NormalizationReport::validate() const {
    for (const auto* v : {&p, &p_i, &p_ii, &p_iii, &p_s}) {
        if (!v->has_value()) continue;
        if (**v <= 0.0 || **v > 1.0 + 1e-12)
            throw ParamError("NormalizationReport: probability " + std::to_string(**v) +
                             " outside (0, 1]");
    }
}

CMatrix choi_from_probe_output(const ProbeOutput& po) {
    const int n = po.probe.dim();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix& pinv = po.probe.p_inverse();
    if (po.side == Side::First) {
        // rho_out = (1 (x) P^T) J (1 (x) P^*) / p, so invert the dressing.
        return tensor(id, pinv.transpose()) * po.rho_out.matrix() * tensor(id, pinv.conjugate());
    }
    const CMatrix s = swap_operator(n);
    const CMatrix mirrored =
        tensor(pinv, id) * po.rho_out.matrix() * tensor(pinv.adjoint(), id);
    return s * mirrored * s;
}

ChoiApplication apply_choi(const CMatrix& choi, const DensityMatrix& rho) {
    const int n = rho.dim();
    if (choi.rows() != choi.cols() || choi.rows() != static_cast<Eigen::Index>(n) * n)
        throw DimensionError("apply_choi: Choi is " + std::to_string(choi.rows()) + "x" +
                             std::to_string(choi.cols()) + " for state dim " + std::to_string(n));
    const double herm = hermiticity_error(choi);
    if (herm > 1e-9)
        throw HermiticityError("apply_choi: |J - J^dag| = " + std::to_string(herm));
    const CMatrix prod =
        choi * tensor(CMatrix::Identity(n, n), rho.matrix().transpose());
    CMatrix unnorm = partial_trace(prod, Side::Second, {n, n});
    const double scale = unnorm.trace().real();
    if (scale <= tol::kZeroProbability)
        throw ZeroProbabilityError("apply_choi: output trace " + std::to_string(scale));
    return ChoiApplication{finalize_state(std::move(unnorm), "apply_choi"), scale};
}

DensityMatrix reconstruct_single(const DensityMatrix& rho0, const ProbeOutput& po) {
    const int n = po.probe.dim();
    if (rho0.dim() != n)
        throw DimensionError("reconstruct_single: input dim " + std::to_string(rho0.dim()) +
                             " vs probe dim " + std::to_string(n));
    const ProbeOutput first = to_first_side(po);
    const WeylBasis basis = weyl_basis(n);
    const CMatrix& pinv = first.probe.p_inverse();

    // Dressed sandwich factors Phi_m P^-1 rho0 (P^-1)^dag, reused across n.
    std::vector<CMatrix> lhs(basis.vectors.size());
    for (std::size_t m = 0; m < lhs.size(); ++m)
        lhs[m] = basis.matrices[m] * pinv * rho0.matrix() * pinv.adjoint();

    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t m = 0; m < basis.vectors.size(); ++m)
        for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
            const Complex c =
                basis.vectors[m].dot(first.rho_out.matrix() * basis.vectors[k]);
            acc += c * lhs[m] * basis.matrices[k].adjoint();
        }
    return finalize_state(std::move(acc), "reconstruct_single");
}

DensityMatrix reconstruct_single_via_choi(const DensityMatrix& rho0, const ProbeOutput& po,
                                          ReconstructOptions opts) {
    if (rho0.dim() != po.probe.dim())
        throw DimensionError("reconstruct_single_via_choi: input dim " +
                             std::to_string(rho0.dim()) + " vs probe dim " +
                             std::to_string(po.probe.dim()));
    const CMatrix j = maybe_project_choi(choi_from_probe_output(po), po.source, opts);
    return apply_choi(j, rho0).state;
}

DensityMatrix reconstruct_bipartite(const DensityMatrix& rho0, const ProbeOutput& po1,
                                    const ProbeOutput& po2, ReconstructOptions opts) {
    require_pair_sides(po1, po2, "reconstruct_bipartite");
    const int n = po1.probe.dim();
    if (rho0.dim() != n * n)
        throw DimensionError("reconstruct_bipartite: input dim " + std::to_string(rho0.dim()) +
                             " vs probe dim " + std::to_string(n) + " squared");
    const CMatrix j1 = maybe_project_choi(choi_from_probe_output(po1), po1.source, opts);
    const CMatrix j2 = maybe_project_choi(choi_from_probe_output(po2), po2.source, opts);
    CMatrix out = apply_choi_to_factor(j1, rho0.matrix(), Side::First, {n, n});
    out = apply_choi_to_factor(j2, out, Side::Second, {n, n});
    return finalize_state(std::move(out), "reconstruct_bipartite");
}

DensityMatrix eq4_literal(const DensityMatrix& rho0, const ProbeOutput& po1,
                          const ProbeOutput& po2) {
    require_pair_sides(po1, po2, "eq4_literal");
    const int n = po1.probe.dim();
    if (rho0.dim() != n * n)
        throw DimensionError("eq4_literal: input dim " + std::to_string(rho0.dim()) +
                             " vs probe dim " + std::to_string(n) + " squared");
    const WeylBasis basis = weyl_basis(n);
    const int b = n * n;
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix s = swap_operator(n);
    const CMatrix& pa_inv = po1.probe.p_inverse();
    const CMatrix& pb_inv = po2.probe.p_inverse();
    const CMatrix rho0_conj = rho0.matrix().conjugate();
    const CMatrix& out1 = po1.rho_out.matrix();
    const CMatrix& out2 = po2.rho_out.matrix();

    // Coefficient dressings S (Pb^-1 (x) Phi_m^*) out2 and the outer
    // dressings (1 (x) Phi_m^T (Pa^T)^-1) out1, both precomputed per index.
    std::vector<CMatrix> coeff_left(b), coeff_right(b), outer_left(b), outer_right(b);
    for (int m = 0; m < b; ++m) {
        coeff_left[m] = s * tensor(pb_inv, basis.matrices[m].conjugate()) * out2;
        coeff_right[m] = tensor(pb_inv.adjoint(), basis.matrices[m].transpose()) * s * rho0_conj;
        outer_left[m] = tensor(id, basis.matrices[m].transpose() * pa_inv.transpose()) * out1;
        outer_right[m] = tensor(id, pa_inv.conjugate() * basis.matrices[m].conjugate());
    }

    CMatrix acc = CMatrix::Zero(n * n, n * n);
    for (int m = 0; m < b; ++m)
        for (int k = 0; k < b; ++k) {
            const Complex t = (coeff_left[m] * coeff_right[k]).trace();
            acc += t * outer_left[m] * outer_right[k];
        }
    return finalize_state(std::move(acc), "eq4_literal");
}

DensityMatrix reconstruct_composite(const DensityMatrix& rho0, const ProbeOutput& po,
                                    std::pair<int, int> dims) {
    const auto [n1, n2] = dims;
    if (n1 < 1 || n2 < 1 || n1 * n2 != po.probe.dim())
        throw DimensionError("reconstruct_composite: factors " + std::to_string(n1) + "x" +
                             std::to_string(n2) + " vs probe dim " +
                             std::to_string(po.probe.dim()));
    return reconstruct_single(rho0, po);
}

SimulatedProbeOutput simulate_probe_output(const KrausChannel& ch, const ProbeState& probe,
                                           Side side) {
    if (ch.dim() != probe.dim())
        throw DimensionError("simulate_probe_output: channel dim " + std::to_string(ch.dim()) +
                             " vs probe dim " + std::to_string(probe.dim()));
    const int n = probe.dim();
    const DensityMatrix probe_state = DensityMatrix::pure(probe_vector(probe));
    ChannelOutput out = apply_one_sided(ch, probe_state, side, {n, n});
    return SimulatedProbeOutput{
        ProbeOutput(probe, std::move(out.state), side, ProbeSource::exact()), out.probability};
}

SimulatedProbeOutput simulate_probe_output_tomographed(const KrausChannel& ch,
                                                       const ProbeState& probe, Side side,
                                                       long long shots, std::uint64_t seed) {
    SimulatedProbeOutput exact = simulate_probe_output(ch, probe, side);
    TomographyEstimate est = tomograph(exact.output.rho_out, shots, seed);
    return SimulatedProbeOutput{ProbeOutput(probe, std::move(est.estimate), side,
                                            ProbeSource::tomography(shots, seed)),
                                exact.probability};
}

}  // namespace qprobe
