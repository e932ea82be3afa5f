#pragma once

// Dense complex matrix kernel: tensor products, partial traces, the swap
// operator, vector<->matrix reshaping, trace distance and PSD projection.
// Conventions used everywhere:
//   * composite basis index = i * N_second + j (left factor is the slow index)
//   * a pure bipartite state sum_ij a_ij |ij> is identified with the N x N
//     matrix [a_ij]; (A (x) B)|psi> then has matrix A psi B^T.

#include <Eigen/Dense>

#include <complex>
#include <utility>

#include "qprobe/errors.hpp"

namespace qprobe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class Side { First, Second };

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kEigenFloor = -1e-10;
inline constexpr double kZeroProbability = 1e-14;
}  // namespace tol

/// Hermitian, PSD, unit-trace matrix. Invariants are checked at construction:
/// max |M - M^dag| <= 1e-12, |Tr - 1| <= 1e-12, smallest eigenvalue >= -1e-10.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix m);

    /// |psi><psi| for a (not necessarily normalized) pure state.
    static DensityMatrix pure(const CVector& psi);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }

private:
    CMatrix m_;
};

/// Kronecker product with the LEFT factor as the slow index:
/// entry ((i*r_b + k), (j*c_b + l)) = a(i,j) * b(k,l).
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// Tensor product of two vectors under the same index convention.
CVector tensor_vec(const CVector& a, const CVector& b);

/// Trace over one factor of a square matrix on an N*M-dimensional space.
/// Tr(result) = Tr(m).
CMatrix partial_trace(const CMatrix& m, Side which, std::pair<int, int> dims);

/// N^2 x N^2 permutation with S(|j>|k>) = |k>|j>; S^2 = identity.
CMatrix swap_operator(int n);

/// Row-major reshape of a length-n^2 vector: entry (i,j) = v[i*n + j].
CMatrix vec_to_matrix(const CVector& v, int n);

/// Inverse of vec_to_matrix.
CVector matrix_to_vec(const CMatrix& m);

/// (1/2) * sum of singular values of (a - b). In [0, 1]; 0 iff a == b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// max_ij |m(i,j) - conj(m(j,i))|.
double hermiticity_error(const CMatrix& m);

/// True when every entry is finite.
bool all_finite(const CMatrix& m);

/// Eigendecompose a Hermitian matrix, zero out negative eigenvalues and
/// rebuild. Trace is NOT renormalized. If clipped_mass is non-null it
/// receives the total magnitude of the removed eigenvalues.
CMatrix clip_negative_eigenvalues(const CMatrix& m, double* clipped_mass = nullptr);

struct PsdProjection {
    DensityMatrix state;
    double clipped_mass;  // total |negative eigenvalue| removed
};

/// Nearest unit-trace PSD repair of a Hermitian estimate: clip negative
/// eigenvalues, renormalize the trace to 1. Idempotent on valid density
/// matrices. Throws HermiticityError if m is not Hermitian within 1e-9 and
/// DegenerateEstimateError if the trace is not positive.
PsdProjection project_psd_detailed(const CMatrix& m);
DensityMatrix project_psd(const CMatrix& m);

/// Tr(rho^2), in (0, 1].
double purity(const DensityMatrix& rho);

}  // namespace qprobe
