#include "qprobe/channels.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace qprobe;
using testutil::max_abs_diff;
using testutil::random_density;
using testutil::random_matrix;

namespace {

DensityMatrix plus_state() {
    CVector v(2);
    v << 1, 1;
    return DensityMatrix::pure(v);
}

DensityMatrix bell_state() {
    CVector v(4);
    v << 1, 0, 0, 1;
    return DensityMatrix::pure(v);
}

}  // namespace

TEST_CASE("apply: identity channel is a no-op with probability 1") {
    const DensityMatrix rho = random_density(3, 1);
    const ChannelOutput out = apply(identity_channel(3), rho);
    CHECK(max_abs_diff(out.state.matrix(), rho.matrix()) < 1e-15);
    CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply: depolarizing(0.5) on |+><+|") {
    const ChannelOutput out = apply(depolarizing_channel(2, 0.5), plus_state());
    CMatrix expected(2, 2);
    expected << 0.5, 0.25, 0.25, 0.5;
    CHECK(max_abs_diff(out.state.matrix(), expected) < 1e-14);
    CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
    // Cross-check against the closed form (1-p) rho + p I/2.
    const CMatrix closed =
        0.5 * plus_state().matrix() + 0.5 * CMatrix::Identity(2, 2) / 2.0;
    CHECK(max_abs_diff(out.state.matrix(), closed) < 1e-14);
}

TEST_CASE("apply: depolarizing matches the closed form in dimension 3") {
    const double p = 0.37;
    const DensityMatrix rho = random_density(3, 5);
    const ChannelOutput out = apply(depolarizing_channel(3, p), rho);
    const CMatrix closed = (1.0 - p) * rho.matrix() + p * CMatrix::Identity(3, 3) / 3.0;
    CHECK(max_abs_diff(out.state.matrix(), closed) < 1e-13);
}

TEST_CASE("depolarizing channel: qubit Kraus set is the standard Pauli form") {
    const double p = 0.4;
    const KrausChannel ch = depolarizing_channel(2, p);
    REQUIRE(ch.kraus().size() == 4);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    CHECK(max_abs_diff(ch.kraus()[0], std::sqrt(1.0 - 0.75 * p) * CMatrix::Identity(2, 2)) == 0.0);
    CHECK(max_abs_diff(ch.kraus()[1], std::sqrt(0.25 * p) * x) == 0.0);
    CHECK(max_abs_diff(ch.kraus()[2], std::sqrt(0.25 * p) * y) == 0.0);
    CHECK(max_abs_diff(ch.kraus()[3], std::sqrt(0.25 * p) * z) == 0.0);
}

TEST_CASE("apply: projector channel implements the Born rule") {
    const ChannelOutput out = apply(projector_channel(2, 0), plus_state());
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    CHECK(max_abs_diff(out.state.matrix(), expected) < 1e-15);
    CHECK(out.probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("apply: annihilated state raises ZeroProbabilityError") {
    CVector e1(2);
    e1 << 0, 1;
    CHECK_THROWS_AS(apply(projector_channel(2, 0), DensityMatrix::pure(e1)),
                    ZeroProbabilityError);
}

TEST_CASE("amplitude damping: limits and fixture") {
    const DensityMatrix rho = random_density(2, 9);
    const ChannelOutput out = apply(amplitude_damping_channel(0.0), rho);
    CHECK(max_abs_diff(out.state.matrix(), rho.matrix()) < 1e-15);

    CVector e1(2);
    e1 << 0, 1;
    const ChannelOutput damped = apply(amplitude_damping_channel(0.3), DensityMatrix::pure(e1));
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.3;
    expected(1, 1) = 0.7;
    CHECK(max_abs_diff(damped.state.matrix(), expected) < 1e-15);
}

TEST_CASE("apply_one_sided: identity on either side is a no-op") {
    const DensityMatrix rho = random_density(6, 2);
    for (Side side : {Side::First, Side::Second}) {
        const int dim = side == Side::First ? 2 : 3;
        const ChannelOutput out = apply_one_sided(identity_channel(dim), rho, side, {2, 3});
        CHECK(max_abs_diff(out.state.matrix(), rho.matrix()) < 1e-15);
        CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("apply_one_sided: phase damping on one side of a Bell state") {
    // Analytic fixture: K0 = diag(1, s), K1 = diag(0, sqrt(g)) with
    // s = sqrt(1-g) give a Bell-diagonal state with off corner s/2.
    const double g = 0.4;
    const ChannelOutput out =
        apply_one_sided(phase_damping_channel(g), bell_state(), Side::First, {2, 2});
    const double s = std::sqrt(1.0 - g);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 0.5;
    expected(0, 3) = expected(3, 0) = s / 2.0;
    CHECK(max_abs_diff(out.state.matrix(), expected) < 1e-14);
    CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_one_sided: projector on side one of a Bell state") {
    const ChannelOutput out =
        apply_one_sided(projector_channel(2, 0), bell_state(), Side::First, {2, 2});
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;  // |00><00|
    CHECK(max_abs_diff(out.state.matrix(), expected) < 1e-15);
    CHECK(out.probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("apply_two_sided: fixtures") {
    const DensityMatrix rho = random_density(4, 3);
    const ChannelOutput ident =
        apply_two_sided(identity_channel(2), identity_channel(2), rho);
    CHECK(max_abs_diff(ident.state.matrix(), rho.matrix()) < 1e-15);

    const ChannelOutput depol =
        apply_two_sided(depolarizing_channel(2, 1.0), depolarizing_channel(2, 1.0), rho);
    CHECK(max_abs_diff(depol.state.matrix(), CMatrix::Identity(4, 4) / 4.0) < 1e-14);
    CHECK(depol.probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_two_sided: equals the composition of one-sided actions") {
    const KrausChannel ch1 = amplitude_damping_channel(0.3);
    const KrausChannel ch2 = projector_channel(2, 0);
    const DensityMatrix rho = bell_state();
    const ChannelOutput joint = apply_two_sided(ch1, ch2, rho);
    const ChannelOutput step1 = apply_one_sided(ch1, rho, Side::First, {2, 2});
    const ChannelOutput step2 = apply_one_sided(ch2, step1.state, Side::Second, {2, 2});
    CHECK(max_abs_diff(joint.state.matrix(), step2.state.matrix()) < 1e-13);
    CHECK(joint.probability ==
          doctest::Approx(step1.probability * step2.probability).epsilon(1e-10));
}

TEST_CASE("trace-preserving channels report probability 1 on any input") {
    for (int t = 0; t < 10; ++t) {
        const KrausChannel ch = random_channel(3, 1 + t % 9, 50 + t);
        CHECK(ch.trace_preserving());
        const ChannelOutput out = apply(ch, random_density(3, 60 + t));
        CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("random_channel: Kraus sum is the identity and seeds reproduce") {
    for (int t = 0; t < 10; ++t) {
        const KrausChannel ch = random_channel(2, 4, 100 + t);
        CHECK(max_abs_diff(ch.kraus_sum(), CMatrix::Identity(2, 2)) < 1e-10);
    }
    const KrausChannel a = random_channel(3, 5, 42), b = random_channel(3, 5, 42);
    REQUIRE(a.kraus().size() == b.kraus().size());
    for (std::size_t i = 0; i < a.kraus().size(); ++i)
        CHECK(max_abs_diff(a.kraus()[i], b.kraus()[i]) == 0.0);
    const KrausChannel c = random_channel(3, 5, 43);
    CHECK(max_abs_diff(a.kraus()[0], c.kraus()[0]) > 1e-3);
}

TEST_CASE("random_channel: env_dim=1 gives a unitary channel") {
    const KrausChannel ch = random_channel(3, 1, 7);
    REQUIRE(ch.kraus().size() == 1);
    const CMatrix& u = ch.kraus()[0];
    CHECK(max_abs_diff(u.adjoint() * u, CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("random_channel: env_dim = dim^2 spans a full-rank Choi matrix") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const KrausChannel ch = random_channel(2, 4, seed);
        // Choi from the Kraus list directly: sum (K (x) 1)|Omega><Omega|(...)^dag.
        CVector omega = CVector::Zero(4);
        omega(0) = omega(3) = 1.0;
        CMatrix choi = CMatrix::Zero(4, 4);
        for (const auto& k : ch.kraus()) {
            const CVector col = tensor(k, CMatrix::Identity(2, 2)) * omega;
            choi += col * col.adjoint();
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(choi, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 1e-6);
    }
}

TEST_CASE("standard_channel: dispatch and parameter validation") {
    CHECK(standard_channel("identity", 3, {}).dim() == 3);
    CHECK(standard_channel("depolarizing", 2, {0.5}).kraus().size() == 4);
    CHECK(standard_channel("projector", 2, {0.0}).kraus().size() == 1);
    CHECK_THROWS_AS(standard_channel("nonsense", 2, {}), ParamError);
    CHECK_THROWS_AS(standard_channel("depolarizing", 2, {1.5}), ParamError);
    CHECK_THROWS_AS(standard_channel("depolarizing", 2, {}), ParamError);
    CHECK_THROWS_AS(standard_channel("unitary", 2, {}), ParamError);
    const CMatrix bad = 2.0 * CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(standard_channel("unitary", 2, {}, &bad), UnitarityError);
    CHECK_THROWS_AS(projector_channel(2, 5), ParamError);
}

TEST_CASE("KrausChannel: construction guards") {
    CHECK_THROWS_AS(KrausChannel(2, {}), ParamError);
    CHECK_THROWS_AS(KrausChannel(2, {CMatrix::Identity(3, 3)}), DimensionError);
    CHECK_THROWS_AS(KrausChannel(2, {2.0 * CMatrix::Identity(2, 2)}), ParamError);
    // A strict sub-identity Kraus set is legal but not trace preserving.
    const KrausChannel sub(2, {0.5 * CMatrix::Identity(2, 2)});
    CHECK(!sub.trace_preserving());
}
