#include "qprobe/reconstruct.hpp"

#include <cmath>

#include "doctest.h"
#include "qprobe/bases.hpp"
#include "test_util.hpp"

using namespace qprobe;
using testutil::max_abs_diff;
using testutil::random_density;

namespace {

// Independent Choi oracle straight from the Kraus list:
// J = sum_K (K (x) 1) |Omega><Omega| (K (x) 1)^dag, |Omega> = sum_k |kk>.
CMatrix choi_from_kraus(const KrausChannel& ch) {
    const int n = ch.dim();
    CVector omega = CVector::Zero(n * n);
    for (int k = 0; k < n; ++k) omega(k * n + k) = 1.0;
    CMatrix j = CMatrix::Zero(n * n, n * n);
    for (const auto& k : ch.kraus()) {
        const CVector col = tensor(k, CMatrix::Identity(n, n)) * omega;
        j += col * col.adjoint();
    }
    return j;
}

KrausChannel truncated_random_channel(int dim, int env, std::uint64_t seed) {
    const KrausChannel tp = random_channel(dim, env, seed);
    std::vector<CMatrix> ks(tp.kraus().begin(), tp.kraus().end() - 1);
    return KrausChannel(dim, std::move(ks), "truncated");
}

DensityMatrix pure_from(std::initializer_list<Complex> amps) {
    CVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (Complex a : amps) v(i++) = a;
    return DensityMatrix::pure(v);
}

}  // namespace

TEST_CASE("choi_from_probe_output: identity channel gives the entangled projector") {
    const KrausChannel ident = identity_channel(2);
    CMatrix expected = CMatrix::Zero(4, 4);  // sum_ij |ii><jj|
    expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;

    const SimulatedProbeOutput me =
        simulate_probe_output(ident, maximally_entangled_probe(2), Side::First);
    const CMatrix j_me = choi_from_probe_output(me.output);
    CHECK(max_abs_diff(j_me, expected) < 1e-12);
    CHECK(j_me.trace().real() == doctest::Approx(2.0).epsilon(1e-12));

    // Probe independence: a generic full-rank probe extracts the same Choi.
    const SimulatedProbeOutput rnd =
        simulate_probe_output(ident, random_probe(2, 5, 0.2), Side::First);
    CHECK(max_abs_diff(choi_from_probe_output(rnd.output), expected) < 1e-10);
}

TEST_CASE("choi_from_probe_output: depolarizing closed form") {
    const double p = 0.3;
    const SimulatedProbeOutput sim = simulate_probe_output(
        depolarizing_channel(2, p), maximally_entangled_probe(2), Side::First);
    CMatrix bellproj = CMatrix::Zero(4, 4);
    bellproj(0, 0) = bellproj(0, 3) = bellproj(3, 0) = bellproj(3, 3) = 1.0;
    const CMatrix expected = (1.0 - p) * bellproj + (p / 2.0) * CMatrix::Identity(4, 4);
    CHECK(max_abs_diff(choi_from_probe_output(sim.output), expected) < 1e-12);
}

TEST_CASE("choi_from_probe_output: matches the Kraus-level Choi on both sides") {
    for (int n : {2, 3}) {
        for (int t = 0; t < 6; ++t) {
            const KrausChannel ch = t % 2 == 0 ? random_channel(n, 2 + t, 300 + t)
                                               : truncated_random_channel(n, 3, 300 + t);
            const CMatrix expected = choi_from_kraus(ch);
            const Side side = t % 4 < 2 ? Side::First : Side::Second;
            const SimulatedProbeOutput sim =
                simulate_probe_output(ch, random_probe(n, 400 + t, 0.15), side);
            // Tomography-normalized data loses the absolute scale for
            // non-trace-preserving channels; compare after matching traces.
            CMatrix j = choi_from_probe_output(sim.output);
            j *= expected.trace().real() / j.trace().real();
            CHECK(max_abs_diff(j, expected) < 1e-9);
        }
    }
}

TEST_CASE("apply_choi: fixtures") {
    const DensityMatrix rho = random_density(2, 8);
    const ChoiApplication ident = apply_choi(choi_from_kraus(identity_channel(2)), rho);
    CHECK(max_abs_diff(ident.state.matrix(), rho.matrix()) < 1e-13);
    CHECK(ident.scale == doctest::Approx(1.0).epsilon(1e-12));

    const ChoiApplication depol = apply_choi(choi_from_kraus(depolarizing_channel(2, 1.0)), rho);
    CHECK(max_abs_diff(depol.state.matrix(), CMatrix::Identity(2, 2) / 2.0) < 1e-13);

    const DensityMatrix plus = pure_from({1.0, 1.0});
    const ChoiApplication proj = apply_choi(choi_from_kraus(projector_channel(2, 0)), plus);
    const ChannelOutput oracle = apply(projector_channel(2, 0), plus);
    CHECK(max_abs_diff(proj.state.matrix(), oracle.state.matrix()) < 1e-13);
    CHECK(proj.scale == doctest::Approx(oracle.probability).epsilon(1e-10));
}

TEST_CASE("apply_choi: guards") {
    const DensityMatrix rho = random_density(2, 3);
    CHECK_THROWS_AS(apply_choi(CMatrix::Identity(9, 9), rho), DimensionError);
    CMatrix nonherm = choi_from_kraus(identity_channel(2));
    nonherm(0, 1) += Complex(0.0, 1e-3);
    CHECK_THROWS_AS(apply_choi(nonherm, rho), HermiticityError);
}

TEST_CASE("reconstruct_single: identity channel reproduces any input") {
    const DensityMatrix plus = pure_from({1.0, 1.0});
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const SimulatedProbeOutput sim = simulate_probe_output(
            identity_channel(2), random_probe(2, seed, 0.2), Side::First);
        CHECK(max_abs_diff(reconstruct_single(plus, sim.output).matrix(), plus.matrix()) <
              1e-12);
    }
}

TEST_CASE("reconstruct_single: amplitude damping fixture") {
    const SimulatedProbeOutput sim = simulate_probe_output(
        amplitude_damping_channel(0.3), maximally_entangled_probe(2), Side::First);
    const DensityMatrix rec = reconstruct_single(pure_from({0.0, 1.0}), sim.output);
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.3;
    expected(1, 1) = 0.7;
    CHECK(max_abs_diff(rec.matrix(), expected) < 1e-12);
}

TEST_CASE("reconstruct_single: oracle equivalence on fixed seeds") {
    const KrausChannel ch = random_channel(3, 4, 7);
    const ProbeState probe = random_probe(3, 11, 0.1);
    const DensityMatrix rho0 = random_density(3, 13);
    const SimulatedProbeOutput sim = simulate_probe_output(ch, probe, Side::First);
    const DensityMatrix rec = reconstruct_single(rho0, sim.output);
    CHECK(trace_distance(rec, apply(ch, rho0).state) < 1e-10);
}

TEST_CASE("reconstruct_single: handles side = second probe outputs") {
    for (int t = 0; t < 5; ++t) {
        const KrausChannel ch = t % 2 == 0 ? random_channel(2, 3, 500 + t)
                                           : truncated_random_channel(2, 3, 500 + t);
        const DensityMatrix rho0 = random_density(2, 600 + t);
        const SimulatedProbeOutput sim =
            simulate_probe_output(ch, random_probe(2, 700 + t, 0.15), Side::Second);
        CHECK(trace_distance(reconstruct_single(rho0, sim.output), apply(ch, rho0).state) <
              1e-10);
    }
}

TEST_CASE("reconstruct_single: literal sum agrees with the Choi route") {
    for (int t = 0; t < 5; ++t) {
        const KrausChannel ch = truncated_random_channel(3, 4, 800 + t);
        const DensityMatrix rho0 = random_density(3, 810 + t);
        const SimulatedProbeOutput sim =
            simulate_probe_output(ch, random_probe(3, 820 + t, 0.1), Side::First);
        CHECK(trace_distance(reconstruct_single(rho0, sim.output),
                             reconstruct_single_via_choi(rho0, sim.output)) < 1e-10);
    }
}

TEST_CASE("reconstruct_single: linearity for trace-preserving channels") {
    const KrausChannel ch = random_channel(2, 3, 901);
    const SimulatedProbeOutput sim =
        simulate_probe_output(ch, random_probe(2, 902, 0.2), Side::First);
    const DensityMatrix a = random_density(2, 903), b = random_density(2, 904);
    const double alpha = 0.3;
    const DensityMatrix mix(alpha * a.matrix() + (1 - alpha) * b.matrix());
    const CMatrix combined = alpha * reconstruct_single(a, sim.output).matrix() +
                             (1 - alpha) * reconstruct_single(b, sim.output).matrix();
    CHECK(max_abs_diff(reconstruct_single(mix, sim.output).matrix(), combined) < 1e-10);
}

TEST_CASE("reconstruct_single: zero-probability and dimension guards") {
    // Probe output of the |0><0| projector channel cannot predict anything
    // about |1><1|: the reconstruction trace vanishes.
    const SimulatedProbeOutput sim = simulate_probe_output(
        projector_channel(2, 0), maximally_entangled_probe(2), Side::First);
    CHECK_THROWS_AS(reconstruct_single(pure_from({0.0, 1.0}), sim.output),
                    ZeroProbabilityError);
    CHECK_THROWS_AS(reconstruct_single(random_density(3, 1), sim.output), DimensionError);
}

TEST_CASE("reconstruct_bipartite: identity channels are a no-op") {
    const DensityMatrix rho0 = random_density(4, 20);
    const SimulatedProbeOutput po1 = simulate_probe_output(
        identity_channel(2), random_probe(2, 21, 0.2), Side::First);
    const SimulatedProbeOutput po2 = simulate_probe_output(
        identity_channel(2), random_probe(2, 22, 0.2), Side::Second);
    CHECK(max_abs_diff(reconstruct_bipartite(rho0, po1.output, po2.output).matrix(),
                       rho0.matrix()) < 1e-11);
}

TEST_CASE("reconstruct_bipartite: full depolarizing on one side of a Bell pair") {
    const DensityMatrix bell = pure_from({1.0, 0.0, 0.0, 1.0});
    const SimulatedProbeOutput po1 = simulate_probe_output(
        depolarizing_channel(2, 1.0), maximally_entangled_probe(2), Side::First);
    const SimulatedProbeOutput po2 = simulate_probe_output(
        identity_channel(2), maximally_entangled_probe(2), Side::Second);
    const DensityMatrix rec = reconstruct_bipartite(bell, po1.output, po2.output);
    CHECK(max_abs_diff(rec.matrix(), CMatrix::Identity(4, 4) / 4.0) < 1e-12);
    const ChannelOutput oracle =
        apply_two_sided(depolarizing_channel(2, 1.0), identity_channel(2), bell);
    CHECK(trace_distance(rec, oracle.state) < 1e-12);
}

TEST_CASE("reconstruct_bipartite: oracle equivalence with distinct probes") {
    const KrausChannel ch1 = random_channel(2, 3, 3);
    const KrausChannel ch2 = truncated_random_channel(2, 3, 5);
    const ProbeState pa = random_probe(2, 17, 0.15), pb = random_probe(2, 19, 0.15);
    const DensityMatrix rho0 = random_density(4, 23);
    const SimulatedProbeOutput po1 = simulate_probe_output(ch1, pa, Side::First);
    const SimulatedProbeOutput po2 = simulate_probe_output(ch2, pb, Side::Second);
    const DensityMatrix rec = reconstruct_bipartite(rho0, po1.output, po2.output);
    CHECK(trace_distance(rec, apply_two_sided(ch1, ch2, rho0).state) < 1e-10);
    CHECK(trace_distance(eq4_literal(rho0, po1.output, po2.output), rec) < 1e-10);
}

TEST_CASE("eq4_literal: agreement across dims and channel types") {
    for (int n : {2, 3}) {
        for (int t = 0; t < 3; ++t) {
            const KrausChannel ch1 = random_channel(n, 2, 30 + t);
            const KrausChannel ch2 = truncated_random_channel(n, 2 + t, 40 + t);
            const SimulatedProbeOutput po1 =
                simulate_probe_output(ch1, random_probe(n, 50 + t, 0.15), Side::First);
            const SimulatedProbeOutput po2 =
                simulate_probe_output(ch2, random_probe(n, 60 + t, 0.15), Side::Second);
            const DensityMatrix rho0 = random_density(n * n, 70 + t);
            const DensityMatrix lit = eq4_literal(rho0, po1.output, po2.output);
            CHECK(trace_distance(lit, apply_two_sided(ch1, ch2, rho0).state) < 1e-10);
        }
    }
}

TEST_CASE("reconstruct_bipartite: side validation") {
    const SimulatedProbeOutput po1 = simulate_probe_output(
        identity_channel(2), maximally_entangled_probe(2), Side::First);
    const DensityMatrix rho0 = random_density(4, 1);
    CHECK_THROWS_AS(reconstruct_bipartite(rho0, po1.output, po1.output), ParamError);
    CHECK_THROWS_AS(eq4_literal(rho0, po1.output, po1.output), ParamError);
}

TEST_CASE("reconstruct_composite: CNOT maps |+0> to the Bell state") {
    CMatrix cnot = CMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    const SimulatedProbeOutput sim = simulate_probe_output(
        unitary_channel(cnot), maximally_entangled_probe(4), Side::First);
    const DensityMatrix plus0 = pure_from({1.0, 0.0, 1.0, 0.0});
    const DensityMatrix rec = reconstruct_composite(plus0, sim.output, {2, 2});
    const DensityMatrix bell = pure_from({1.0, 0.0, 0.0, 1.0});
    CHECK(trace_distance(rec, bell) < 1e-11);
}

TEST_CASE("reconstruct_composite: random nonlocal channel vs oracle") {
    const KrausChannel ch = random_channel(4, 3, 99);
    const SimulatedProbeOutput sim =
        simulate_probe_output(ch, random_probe(4, 98, 0.1), Side::First);
    const DensityMatrix rho0 = random_density(4, 97);
    CHECK(trace_distance(reconstruct_composite(rho0, sim.output, {2, 2}),
                         apply(ch, rho0).state) < 1e-10);
    CHECK_THROWS_AS(reconstruct_composite(rho0, sim.output, {2, 3}), DimensionError);
}

TEST_CASE("noisy source: Choi projection flag and graceful degradation") {
    const KrausChannel ch = amplitude_damping_channel(0.3);
    const ProbeState probe = random_probe(2, 41, 0.4);
    const SimulatedProbeOutput noisy =
        simulate_probe_output_tomographed(ch, probe, Side::First, 5000, 2);
    const DensityMatrix rho0 = random_density(2, 42);
    ReconstructOptions raw;
    raw.project_noisy_choi = false;
    const DensityMatrix projected = reconstruct_single_via_choi(rho0, noisy.output);
    const DensityMatrix unprojected = reconstruct_single_via_choi(rho0, noisy.output, raw);
    CHECK(trace_distance(projected, unprojected) < 0.1);
    const DensityMatrix oracle = apply(ch, rho0).state;
    CHECK(trace_distance(projected, oracle) < 0.15);
    CHECK(trace_distance(reconstruct_single(rho0, noisy.output), oracle) < 0.15);
}

TEST_CASE("reconstruct_bipartite: tomographed probe outputs stay close to the oracle") {
    const KrausChannel ch1 = amplitude_damping_channel(0.2);
    const KrausChannel ch2 = phase_damping_channel(0.5);
    const SimulatedProbeOutput po1 = simulate_probe_output_tomographed(
        ch1, random_probe(2, 43, 0.4), Side::First, 20000, 7);
    const SimulatedProbeOutput po2 = simulate_probe_output_tomographed(
        ch2, random_probe(2, 44, 0.4), Side::Second, 20000, 8);
    const DensityMatrix rho0 = random_density(4, 45);
    const DensityMatrix rec = reconstruct_bipartite(rho0, po1.output, po2.output);
    CHECK(trace_distance(rec, apply_two_sided(ch1, ch2, rho0).state) < 0.2);
}

TEST_CASE("probe invariance: two probes, same reconstruction") {
    const KrausChannel ch = truncated_random_channel(2, 4, 1234);
    const DensityMatrix rho0 = random_density(2, 1235);
    const SimulatedProbeOutput a =
        simulate_probe_output(ch, random_probe(2, 1236, 0.2), Side::First);
    const SimulatedProbeOutput b =
        simulate_probe_output(ch, random_probe(2, 1237, 0.2), Side::First);
    CHECK(trace_distance(reconstruct_single(rho0, a.output),
                         reconstruct_single(rho0, b.output)) < 1e-10);
}

TEST_CASE("ProbeOutput: dimension guard and source metadata") {
    const ProbeState probe = maximally_entangled_probe(2);
    CHECK_THROWS_AS(ProbeOutput(probe, random_density(2, 1), Side::First, ProbeSource::exact()),
                    DimensionError);
    const ProbeSource src = ProbeSource::tomography(1000, 7);
    CHECK(src.kind == SourceKind::Tomography);
    CHECK(src.shots == 1000);
    CHECK(src.seed == 7);
}

TEST_CASE("NormalizationReport: validation") {
    NormalizationReport r;
    r.p_s = 0.5;
    CHECK_NOTHROW(r.validate());
    r.p = 1.5;
    CHECK_THROWS_AS(r.validate(), ParamError);
}
