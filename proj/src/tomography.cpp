#include "qprobe/tomography.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qprobe/bases.hpp"
#include "qprobe/rng.hpp"

namespace qprobe {

namespace {

bool matches_up_to_sign(const CMatrix& a, const CMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff() < 1e-9 || (a + b).cwiseAbs().maxCoeff() < 1e-9;
}

/// Orthonormal Hermitian basis of the dim x dim operator space:
/// |i><i|, then for i<j the real and imaginary off-diagonal pairs.
std::vector<CMatrix> hermitian_basis(int dim) {
    std::vector<CMatrix> basis;
    basis.reserve(dim * dim);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i) {
        CMatrix e = CMatrix::Zero(dim, dim);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            CMatrix re = CMatrix::Zero(dim, dim);
            re(i, j) = s;
            re(j, i) = s;
            basis.push_back(std::move(re));
            CMatrix im = CMatrix::Zero(dim, dim);
            im(i, j) = Complex(0.0, -s);
            im(j, i) = Complex(0.0, s);
            basis.push_back(std::move(im));
        }
    return basis;
}

}  // namespace

std::vector<CMatrix> measurement_settings(int dim) {
    if (dim < 2) throw DimensionError("measurement_settings: dim must be >= 2");
    std::vector<CMatrix> settings;
    settings.push_back(CMatrix::Identity(dim, dim));
    for (int j0 = 0; j0 < dim; ++j0)
        for (int j1 = 0; j1 < dim; ++j1) {
            if (j0 == 0 && j1 == 0) continue;
            // W^dag is the (-j0, -j1) Weyl up to a phase, so that index would
            // only re-span the same plane; keep the smaller index of the pair.
            const int j = dim * j0 + j1;
            const int partner = dim * ((dim - j0) % dim) + (dim - j1) % dim;
            if (partner < j) continue;
            const CMatrix w = weyl_unitary(dim, j0, j1);
            const CMatrix re = (w + w.adjoint()) / 2.0;
            const CMatrix im = (w - w.adjoint()) / Complex(0.0, 2.0);
            for (const CMatrix* h : {&re, &im}) {
                if (h->cwiseAbs().maxCoeff() < 1e-12) continue;
                bool dup = false;
                for (const auto& existing : settings)
                    if (matches_up_to_sign(existing, *h)) {
                        dup = true;
                        break;
                    }
                if (!dup) settings.push_back(*h);
            }
        }
    return settings;
}

std::vector<double> exact_expectations(const DensityMatrix& rho,
                                       const std::vector<CMatrix>& settings) {
    std::vector<double> out;
    out.reserve(settings.size());
    for (const auto& o : settings) out.push_back((rho.matrix() * o).trace().real());
    return out;
}

std::vector<double> sample_expectations(const DensityMatrix& rho,
                                        const std::vector<CMatrix>& settings, long long shots,
                                        std::uint64_t seed) {
    if (shots < 1) throw ParamError("sample_expectations: shots must be >= 1");
    std::vector<double> out;
    out.reserve(settings.size());
    for (std::size_t k = 0; k < settings.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(settings[k]);
        const Eigen::VectorXd& vals = es.eigenvalues();
        const int n = static_cast<int>(vals.size());

        // Born probabilities in this eigenbasis; tiny negatives are fp noise.
        Eigen::VectorXd probs(n);
        for (int a = 0; a < n; ++a) {
            const CVector v = es.eigenvectors().col(a);
            double q = (v.adjoint() * rho.matrix() * v)(0, 0).real();
            probs(a) = q < 1e-15 ? 0.0 : q;
        }
        probs /= probs.sum();
        Eigen::VectorXd cdf(n);
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            acc += probs(a);
            cdf(a) = acc;
        }
        cdf(n - 1) = 1.0;

        auto g = rng::substream(seed, k);
        double sum = 0.0;
        for (long long s = 0; s < shots; ++s) {
            const double u = rng::uniform01(g);
            int a = 0;
            while (u >= cdf(a)) ++a;
            sum += vals(a);
        }
        out.push_back(sum / static_cast<double>(shots));
    }
    return out;
}

CMatrix linear_inversion(const std::vector<double>& estimates,
                         const std::vector<CMatrix>& settings, int dim) {
    if (settings.size() != estimates.size())
        throw ParamError("linear_inversion: " + std::to_string(estimates.size()) +
                         " estimates for " + std::to_string(settings.size()) + " settings");
    const int d2 = dim * dim;
    const auto basis = hermitian_basis(dim);
    const int rows = static_cast<int>(settings.size()) + 1;

    Eigen::MatrixXd a(rows, d2);
    Eigen::VectorXd b(rows);
    for (int k = 0; k < rows - 1; ++k) {
        if (settings[k].rows() != dim || settings[k].cols() != dim)
            throw DimensionError("linear_inversion: setting " + std::to_string(k) +
                                 " has wrong shape");
        for (int al = 0; al < d2; ++al) a(k, al) = (settings[k] * basis[al]).trace().real();
        b(k) = estimates[k];
    }
    for (int al = 0; al < d2; ++al) a(rows - 1, al) = basis[al].trace().real();
    b(rows - 1) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < d2)
        throw IncompleteSettingsError("linear_inversion: settings span rank " +
                                      std::to_string(qr.rank()) + " of " + std::to_string(d2));
    const Eigen::VectorXd x = qr.solve(b);

    CMatrix rho = CMatrix::Zero(dim, dim);
    for (int al = 0; al < d2; ++al) rho += x(al) * basis[al];
    return rho;
}

TomographyEstimate tomograph(const DensityMatrix& rho_true, long long shots,
                             std::uint64_t seed) {
    if (shots < 0) throw ParamError("tomograph: shots must be >= 0");
    const int dim = rho_true.dim();
    const auto settings = measurement_settings(dim);
    const std::vector<double> estimates =
        shots == kExactShots ? exact_expectations(rho_true, settings)
                             : sample_expectations(rho_true, settings, shots, seed);
    const CMatrix raw = linear_inversion(estimates, settings, dim);
    PsdProjection repaired = project_psd_detailed(raw);
    return TomographyEstimate{std::move(repaired.state), dim,           shots,
                              seed,                      repaired.clipped_mass,
                              static_cast<int>(settings.size())};
}

}  // namespace qprobe
