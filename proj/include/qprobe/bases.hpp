#pragma once

// The N^2-element maximally entangled basis
//   |Phi_j> = (1/sqrt(N)) sum_k w^(j0*k) |k>|k (+) j1>,   j = N*j0 + j1,
// with w = exp(2*pi*i/N) and (+) addition mod N, together with the N x N
// matrix notations Phi_j. sqrt(N)*Phi_j are the Weyl (clock/shift) unitaries;
// for N = 2 they are {I, X, Z, iY} in j-order.

#include <vector>

#include "qprobe/linalg.hpp"

namespace qprobe {

struct WeylBasis {
    int dim = 0;                    // N
    std::vector<CVector> vectors;   // N^2 vectors of length N^2
    std::vector<CMatrix> matrices;  // matrix notation of each vector
};

/// Build the full basis for local dimension n >= 2.
WeylBasis weyl_basis(int n);

/// The exactly unitary sqrt(N)*Phi_{N*j0+j1}; entries w^(j0*k) at (k, k(+)j1).
CMatrix weyl_unitary(int n, int j0, int j1);

}  // namespace qprobe
