#include "qprobe/channels.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qprobe/bases.hpp"
#include "qprobe/rng.hpp"

namespace qprobe {

namespace {

constexpr double kKrausTol = 1e-10;

DensityMatrix normalize_output(CMatrix unnorm, double* probability, const char* who) {
    const double p = unnorm.trace().real();
    if (p <= tol::kZeroProbability)
        throw ZeroProbabilityError(std::string(who) + ": output trace " + std::to_string(p));
    *probability = p;
    unnorm /= p;
    return DensityMatrix((unnorm + unnorm.adjoint()) / 2.0);
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ParamError(std::string(name) + ": parameter " + std::to_string(p) +
                         " outside [0, 1]");
}

}  // namespace

KrausChannel::KrausChannel(int dim, std::vector<CMatrix> kraus, std::string label)
    : dim_(dim), kraus_(std::move(kraus)), label_(std::move(label)) {
    if (dim_ < 1) throw DimensionError("KrausChannel: dim must be >= 1");
    if (kraus_.empty()) throw ParamError("KrausChannel: empty Kraus list");
    for (const auto& k : kraus_) {
        if (k.rows() != dim_ || k.cols() != dim_)
            throw DimensionError("KrausChannel: operator is " + std::to_string(k.rows()) + "x" +
                                 std::to_string(k.cols()) + ", expected " + std::to_string(dim_));
        if (!all_finite(k)) throw ParamError("KrausChannel: non-finite Kraus entries");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(kraus_sum(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + kKrausTol)
        throw ParamError("KrausChannel: sum K^dag K exceeds identity (max eigenvalue " +
                         std::to_string(es.eigenvalues().maxCoeff()) + ")");
}

CMatrix KrausChannel::kraus_sum() const {
    CMatrix s = CMatrix::Zero(dim_, dim_);
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return s;
}

bool KrausChannel::trace_preserving() const {
    return (kraus_sum() - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <= kKrausTol;
}

ChannelOutput apply(const KrausChannel& ch, const DensityMatrix& rho) {
    if (ch.dim() != rho.dim())
        throw DimensionError("apply: channel dim " + std::to_string(ch.dim()) + " vs state dim " +
                             std::to_string(rho.dim()));
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
    double p = 0.0;
    DensityMatrix state = normalize_output(std::move(out), &p, "apply");
    return {std::move(state), p};
}

ChannelOutput apply_one_sided(const KrausChannel& ch, const DensityMatrix& rho, Side side,
                              std::pair<int, int> dims) {
    const auto [n, m] = dims;
    if (rho.dim() != n * m)
        throw DimensionError("apply_one_sided: state dim " + std::to_string(rho.dim()) +
                             " vs factors " + std::to_string(n) + "x" + std::to_string(m));
    const int acted = side == Side::First ? n : m;
    if (ch.dim() != acted)
        throw DimensionError("apply_one_sided: channel dim " + std::to_string(ch.dim()) +
                             " vs factor dim " + std::to_string(acted));
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& k : ch.kraus()) {
        const CMatrix op = side == Side::First ? tensor(k, CMatrix::Identity(m, m))
                                               : tensor(CMatrix::Identity(n, n), k);
        out += op * rho.matrix() * op.adjoint();
    }
    double p = 0.0;
    DensityMatrix state = normalize_output(std::move(out), &p, "apply_one_sided");
    return {std::move(state), p};
}

ChannelOutput apply_two_sided(const KrausChannel& ch1, const KrausChannel& ch2,
                              const DensityMatrix& rho) {
    if (rho.dim() != ch1.dim() * ch2.dim())
        throw DimensionError("apply_two_sided: state dim " + std::to_string(rho.dim()) +
                             " vs channels " + std::to_string(ch1.dim()) + "x" +
                             std::to_string(ch2.dim()));
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& k1 : ch1.kraus())
        for (const auto& k2 : ch2.kraus()) {
            const CMatrix op = tensor(k1, k2);
            out += op * rho.matrix() * op.adjoint();
        }
    double p = 0.0;
    DensityMatrix state = normalize_output(std::move(out), &p, "apply_two_sided");
    return {std::move(state), p};
}

KrausChannel identity_channel(int dim) {
    return KrausChannel(dim, {CMatrix::Identity(dim, dim)}, "identity");
}

KrausChannel depolarizing_channel(int dim, double p) {
    check_probability(p, "depolarizing");
    if (dim < 2) throw DimensionError("depolarizing: dim must be >= 2");
    std::vector<CMatrix> ks;
    if (dim == 2) {
        // rho -> (1-p) rho + p I/2, in the familiar Pauli form.
        CMatrix x(2, 2), y(2, 2), z(2, 2);
        x << 0, 1, 1, 0;
        y << 0, Complex(0, -1), Complex(0, 1), 0;
        z << 1, 0, 0, -1;
        ks.push_back(std::sqrt(1.0 - 0.75 * p) * CMatrix::Identity(2, 2));
        ks.push_back(std::sqrt(0.25 * p) * x);
        ks.push_back(std::sqrt(0.25 * p) * y);
        ks.push_back(std::sqrt(0.25 * p) * z);
    } else {
        // General dimension via the Weyl unitaries:
        // sum_j W_j rho W_j^dag = d Tr(rho) I recovers (1-p) rho + p I/d.
        const double d2 = static_cast<double>(dim) * dim;
        ks.push_back(std::sqrt(1.0 - p * (d2 - 1.0) / d2) * CMatrix::Identity(dim, dim));
        for (int j0 = 0; j0 < dim; ++j0)
            for (int j1 = 0; j1 < dim; ++j1) {
                if (j0 == 0 && j1 == 0) continue;
                ks.push_back(std::sqrt(p) / dim * weyl_unitary(dim, j0, j1));
            }
    }
    return KrausChannel(dim, std::move(ks), "depolarizing(" + std::to_string(p) + ")");
}

KrausChannel amplitude_damping_channel(double gamma) {
    check_probability(gamma, "amplitude_damping");
    CMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return KrausChannel(2, {k0, k1}, "amplitude_damping(" + std::to_string(gamma) + ")");
}

KrausChannel phase_damping_channel(double gamma) {
    check_probability(gamma, "phase_damping");
    CMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    k1 << 0, 0, 0, std::sqrt(gamma);
    return KrausChannel(2, {k0, k1}, "phase_damping(" + std::to_string(gamma) + ")");
}

KrausChannel unitary_channel(const CMatrix& u) {
    if (u.rows() != u.cols() || u.rows() < 1)
        throw DimensionError("unitary_channel: matrix must be square");
    const double err =
        (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (err > kKrausTol)
        throw UnitarityError("unitary_channel: |U^dag U - I| = " + std::to_string(err));
    return KrausChannel(static_cast<int>(u.rows()), {u}, "unitary");
}

KrausChannel projector_channel(int dim, int basis_index) {
    if (dim < 1) throw DimensionError("projector_channel: dim must be >= 1");
    if (basis_index < 0 || basis_index >= dim)
        throw ParamError("projector_channel: index " + std::to_string(basis_index) +
                         " out of range for dim " + std::to_string(dim));
    CMatrix k = CMatrix::Zero(dim, dim);
    k(basis_index, basis_index) = 1.0;
    return KrausChannel(dim, {k}, "projector(" + std::to_string(basis_index) + ")");
}

KrausChannel standard_channel(const std::string& family, int dim,
                              const std::vector<double>& params, const CMatrix* matrix) {
    auto scalar = [&](const char* name) {
        if (params.empty())
            throw ParamError(std::string(name) + ": missing parameter");
        return params[0];
    };
    if (family == "identity") return identity_channel(dim);
    if (family == "depolarizing") return depolarizing_channel(dim, scalar("depolarizing"));
    if (family == "amplitude_damping") return amplitude_damping_channel(scalar("amplitude_damping"));
    if (family == "phase_damping") return phase_damping_channel(scalar("phase_damping"));
    if (family == "unitary") {
        if (!matrix) throw ParamError("unitary: missing matrix");
        return unitary_channel(*matrix);
    }
    if (family == "projector")
        return projector_channel(dim, static_cast<int>(scalar("projector")));
    throw ParamError("standard_channel: unknown family '" + family + "'");
}

KrausChannel random_channel(int dim, int env_dim, std::uint64_t seed) {
    if (dim < 2) throw ParamError("random_channel: dim must be >= 2");
    if (env_dim < 1) throw ParamError("random_channel: env_dim must be >= 1");
    auto g = rng::substream(seed, 0x6368616eULL);  // "chan"
    const CMatrix gm = rng::gaussian_matrix(dim * env_dim, dim, g);
    Eigen::HouseholderQR<CMatrix> qr(gm);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim * env_dim, dim);
    // Fix column phases from the R diagonal so the isometry is Haar.
    const auto rdiag = qr.matrixQR().diagonal();
    for (int c = 0; c < dim; ++c) {
        const Complex r = rdiag(c);
        if (std::abs(r) > 0.0) q.col(c) *= r / std::abs(r);
    }
    std::vector<CMatrix> ks;
    ks.reserve(env_dim);
    for (int i = 0; i < env_dim; ++i) ks.push_back(q.block(i * dim, 0, dim, dim));
    return KrausChannel(dim, std::move(ks),
                        "random(dim=" + std::to_string(dim) + ",env=" + std::to_string(env_dim) +
                            ",seed=" + std::to_string(seed) + ")");
}

}  // namespace qprobe
