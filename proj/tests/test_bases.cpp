#include "qprobe/bases.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_util.hpp"

using namespace qprobe;
using testutil::max_abs_diff;

namespace {

// The qubit fixtures: sqrt(2)*Phi_j must be I, X, Z, iY in j-order.
std::vector<CMatrix> qubit_weyls() {
    CMatrix i2 = CMatrix::Identity(2, 2);
    CMatrix x(2, 2), z(2, 2), iy(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    iy << 0, 1, -1, 0;
    return {i2, x, z, iy};
}

}  // namespace

TEST_CASE("weyl_basis: n=2 matches the Pauli set exactly") {
    const WeylBasis basis = weyl_basis(2);
    const auto expected = qubit_weyls();
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < 4; ++j)
        CHECK(max_abs_diff(basis.matrices[j], expected[j] * s) == 0.0);
}

TEST_CASE("weyl_basis: n=2, j=1 is the (|01>+|10>)/sqrt(2) state") {
    const WeylBasis basis = weyl_basis(2);
    CVector expected(4);
    expected << 0, 1, 1, 0;
    expected /= std::sqrt(2.0);
    CHECK(max_abs_diff(basis.vectors[1], expected) == 0.0);
}

TEST_CASE("weyl_basis: orthonormality, completeness, unitarity") {
    for (int n : {2, 3, 4}) {
        const WeylBasis basis = weyl_basis(n);
        REQUIRE(basis.vectors.size() == static_cast<std::size_t>(n * n));
        CMatrix completeness = CMatrix::Zero(n * n, n * n);
        for (int j = 0; j < n * n; ++j) {
            for (int k = 0; k < n * n; ++k) {
                const Complex ip = basis.vectors[j].dot(basis.vectors[k]);
                CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) < 1e-12);
            }
            completeness += basis.vectors[j] * basis.vectors[j].adjoint();
            const CMatrix u = std::sqrt(static_cast<double>(n)) * basis.matrices[j];
            CHECK(max_abs_diff(u.adjoint() * u, CMatrix::Identity(n, n)) < 1e-12);
        }
        CHECK(max_abs_diff(completeness, CMatrix::Identity(n * n, n * n)) < 1e-12);
    }
}

TEST_CASE("weyl_basis: matrices are the reshaped vectors") {
    const WeylBasis basis = weyl_basis(3);
    for (int j = 0; j < 9; ++j)
        CHECK(max_abs_diff(basis.matrices[j], vec_to_matrix(basis.vectors[j], 3)) == 0.0);
}

TEST_CASE("weyl_unitary: qubit fixtures") {
    CHECK(max_abs_diff(weyl_unitary(2, 0, 0), CMatrix::Identity(2, 2)) == 0.0);
    CMatrix z(2, 2);
    z << 1, 0, 0, -1;
    CHECK(max_abs_diff(weyl_unitary(2, 1, 0), z) == 0.0);
}

TEST_CASE("weyl_unitary: n=3 clock-shift structure") {
    const CMatrix w = weyl_unitary(3, 1, 1);
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    for (int k = 0; k < 3; ++k)
        for (int c = 0; c < 3; ++c) {
            const Complex expected = c == (k + 1) % 3 ? std::pow(omega, k) : Complex(0.0);
            CHECK(std::abs(w(k, c) - expected) < 1e-15);
        }
}

TEST_CASE("weyl_unitary: agrees with sqrt(N) * basis matrix") {
    for (int n : {2, 3, 4}) {
        const WeylBasis basis = weyl_basis(n);
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1)
                CHECK(max_abs_diff(weyl_unitary(n, j0, j1),
                                   std::sqrt(static_cast<double>(n)) *
                                       basis.matrices[n * j0 + j1]) < 1e-15);
    }
}

TEST_CASE("weyl_basis: reconstruction from the unentangled sum") {
    // |Phi_j> = (sqrt(N) Phi_j (x) 1) |Omega> / sqrt(N), |Omega> = sum_k |kk>.
    for (int n : {2, 3}) {
        const WeylBasis basis = weyl_basis(n);
        CVector omega = CVector::Zero(n * n);
        for (int k = 0; k < n; ++k) omega(k * n + k) = 1.0;
        for (int j = 0; j < n * n; ++j) {
            const CVector rebuilt =
                tensor(basis.matrices[j], CMatrix::Identity(n, n)) * omega;
            CHECK(max_abs_diff(rebuilt, basis.vectors[j]) < 1e-15);
        }
    }
}

TEST_CASE("bases: error paths") {
    CHECK_THROWS_AS(weyl_basis(1), DimensionError);
    CHECK_THROWS_AS(weyl_unitary(1, 0, 0), DimensionError);
    CHECK_THROWS_AS(weyl_unitary(3, 3, 0), IndexError);
    CHECK_THROWS_AS(weyl_unitary(3, 0, -1), IndexError);
}
