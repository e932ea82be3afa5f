#include "qprobe/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace qprobe {

namespace {

void require_square(const CMatrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw DimensionError(std::string(who) + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    require_square(m_, "DensityMatrix");
    if (!all_finite(m_)) throw ParamError("DensityMatrix: non-finite entries");
    const double herm = hermiticity_error(m_);
    if (herm > tol::kHermitian)
        throw HermiticityError("DensityMatrix: |M - M^dag| = " + std::to_string(herm));
    const Complex tr = m_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace)
        throw ParamError("DensityMatrix: trace deviates from 1 by " +
                         std::to_string(std::abs(tr - Complex(1.0, 0.0))));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::kEigenFloor)
        throw ParamError("DensityMatrix: negative eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw ParamError("DensityMatrix::pure: zero vector");
    return DensityMatrix((psi * psi.adjoint()) / n2);
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

CVector tensor_vec(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

CMatrix partial_trace(const CMatrix& m, Side which, std::pair<int, int> dims) {
    const auto [n, mm] = dims;
    require_square(m, "partial_trace");
    if (n < 1 || mm < 1 || m.rows() != static_cast<Eigen::Index>(n) * mm)
        throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) +
                             "-dimensional, dims give " + std::to_string(n * mm));
    if (which == Side::First) {
        CMatrix out = CMatrix::Zero(mm, mm);
        for (int j = 0; j < mm; ++j)
            for (int l = 0; l < mm; ++l)
                for (int i = 0; i < n; ++i) out(j, l) += m(i * mm + j, i * mm + l);
        return out;
    }
    CMatrix out = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < mm; ++j) out(i, k) += m(i * mm + j, k * mm + j);
    return out;
}

CMatrix swap_operator(int n) {
    if (n < 1) throw DimensionError("swap_operator: n must be >= 1");
    CMatrix s = CMatrix::Zero(n * n, n * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s(k * n + j, j * n + k) = 1.0;
    return s;
}

CMatrix vec_to_matrix(const CVector& v, int n) {
    if (n < 1 || v.size() != static_cast<Eigen::Index>(n) * n)
        throw DimensionError("vec_to_matrix: vector length " + std::to_string(v.size()) +
                             " is not " + std::to_string(n) + "^2");
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = v(i * n + j);
    return m;
}

CVector matrix_to_vec(const CMatrix& m) {
    require_square(m, "matrix_to_vec");
    const int n = static_cast<int>(m.rows());
    CVector v(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(i * n + j) = m(i, j);
    return v;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionError("trace_distance: dims " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    // The difference is Hermitian, so singular values are |eigenvalues|.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double hermiticity_error(const CMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

CMatrix clip_negative_eigenvalues(const CMatrix& m, double* clipped_mass) {
    require_square(m, "clip_negative_eigenvalues");
    Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) / 2.0);
    Eigen::VectorXd vals = es.eigenvalues();
    double clipped = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < 0.0) {
            clipped += -vals(i);
            vals(i) = 0.0;
        }
    }
    if (clipped_mass) *clipped_mass = clipped;
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

PsdProjection project_psd_detailed(const CMatrix& m) {
    require_square(m, "project_psd");
    const double herm = hermiticity_error(m);
    if (herm > 1e-9)
        throw HermiticityError("project_psd: |M - M^dag| = " + std::to_string(herm));
    if (m.trace().real() <= 0.0)
        throw DegenerateEstimateError("project_psd: trace " + std::to_string(m.trace().real()));
    double clipped = 0.0;
    CMatrix psd = clip_negative_eigenvalues(m, &clipped);
    const double tr = psd.trace().real();
    if (tr <= 0.0) throw DegenerateEstimateError("project_psd: all eigenvalues clipped");
    return PsdProjection{DensityMatrix(psd / tr), clipped};
}

DensityMatrix project_psd(const CMatrix& m) { return project_psd_detailed(m).state; }

double purity(const DensityMatrix& rho) {
    return (rho.matrix() * rho.matrix()).trace().real();
}

}  // namespace qprobe
