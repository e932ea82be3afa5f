#include "qprobe/bases.hpp"

#include <cmath>
#include <numbers>

namespace qprobe {

namespace {

// w^p for w = exp(2*pi*i/n). Quarter-turn angles are returned exactly so the
// N=2 basis is bit-for-bit {I, X, Z, iY}/sqrt(2).
Complex root_of_unity(int p, int n) {
    p = ((p % n) + n) % n;
    if (4 * p % n == 0) {
        switch (4 * p / n) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * p / n;
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

WeylBasis weyl_basis(int n) {
    if (n < 2) throw DimensionError("weyl_basis: n must be >= 2");
    WeylBasis basis;
    basis.dim = n;
    basis.vectors.reserve(n * n);
    basis.matrices.reserve(n * n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j0 = 0; j0 < n; ++j0) {
        for (int j1 = 0; j1 < n; ++j1) {
            CVector v = CVector::Zero(n * n);
            for (int k = 0; k < n; ++k)
                v(k * n + (k + j1) % n) = root_of_unity(j0 * k, n) * scale;
            basis.matrices.push_back(vec_to_matrix(v, n));
            basis.vectors.push_back(std::move(v));
        }
    }
    return basis;
}

CMatrix weyl_unitary(int n, int j0, int j1) {
    if (n < 2) throw DimensionError("weyl_unitary: n must be >= 2");
    if (j0 < 0 || j0 >= n || j1 < 0 || j1 >= n)
        throw IndexError("weyl_unitary: indices (" + std::to_string(j0) + ", " +
                         std::to_string(j1) + ") out of range for n = " + std::to_string(n));
    CMatrix m = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) m(k, (k + j1) % n) = root_of_unity(j0 * k, n);
    return m;
}

}  // namespace qprobe
