#include "qprobe/probe.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "qprobe/rng.hpp"

namespace qprobe {

namespace {

double condition_ratio(const CMatrix& p) {
    Eigen::JacobiSVD<CMatrix> svd(p);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) / s(0);
}

}  // namespace

ProbeState probe_from_matrix(const CMatrix& p, double rank_tol) {
    if (p.rows() != p.cols() || p.rows() < 1)
        throw DimensionError("probe_from_matrix: matrix must be square, got " +
                             std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
    if (!all_finite(p)) throw ParamError("probe_from_matrix: non-finite entries");
    const double norm = std::sqrt((p.adjoint() * p).trace().real());
    if (norm <= 0.0) throw RankError("probe_from_matrix: zero matrix");
    // Already-normalized input is kept bit-identical so files re-load stably.
    const CMatrix pn = std::abs(norm - 1.0) <= tol::kTrace ? p : CMatrix(p / norm);

    Eigen::JacobiSVD<CMatrix> svd(pn, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double ratio = s(s.size() - 1) / s(0);
    if (ratio < rank_tol)
        throw RankError("probe_from_matrix: rank-deficient, sigma_min/sigma_max = " +
                        std::to_string(ratio) + " < " + std::to_string(rank_tol));
    const CMatrix inv =
        svd.matrixV() * s.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
        svd.matrixU().adjoint();
    return ProbeState(std::move(pn), inv, ratio);
}

ProbeState maximally_entangled_probe(int n) {
    if (n < 2) throw DimensionError("maximally_entangled_probe: n must be >= 2");
    const double root = std::sqrt(static_cast<double>(n));
    return ProbeState(CMatrix::Identity(n, n) / root, root * CMatrix::Identity(n, n), 1.0);
}

ProbeState random_probe(int n, std::uint64_t seed, double min_cond) {
    if (n < 2) throw DimensionError("random_probe: n must be >= 2");
    if (min_cond <= 0.0) throw ParamError("random_probe: min_cond must be positive");
    // A Gaussian draw practically never reaches ratios this close to 1.
    if (min_cond > 0.99)
        throw ParamError("random_probe: min_cond " + std::to_string(min_cond) + " > 0.99");
    auto g = rng::substream(seed, 0x70726f62ULL);  // "prob"
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const CMatrix p = rng::gaussian_matrix(n, n, g);
        if (condition_ratio(p) >= min_cond) return probe_from_matrix(p);
    }
    throw RankError("random_probe: no draw reached min_cond = " + std::to_string(min_cond) +
                    " in 1000 attempts");
}

CVector probe_vector(const ProbeState& ps) { return matrix_to_vec(ps.p_matrix()); }

}  // namespace qprobe
