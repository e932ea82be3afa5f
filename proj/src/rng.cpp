#include "qprobe/rng.hpp"

#include <cmath>
#include <numbers>

namespace qprobe::rng {

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t label) {
    return std::mt19937_64(mix64(seed, label));
}

double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform01_pos(std::mt19937_64& g) {
    return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> gaussian_pair(std::mt19937_64& g) {
    const double u1 = uniform01_pos(g);
    const double u2 = uniform01(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

CMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& g) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const auto [re, im] = gaussian_pair(g);
            m(i, j) = Complex(re, im);
        }
    return m;
}

CVector random_pure_state(int dim, std::mt19937_64& g) {
    CVector v = gaussian_matrix(dim, 1, g).col(0);
    return v / v.norm();
}

DensityMatrix random_density_matrix(int dim, std::mt19937_64& g) {
    const CMatrix gm = gaussian_matrix(dim, dim, g);
    CMatrix rho = gm * gm.adjoint();
    rho /= rho.trace().real();
    // Symmetrize away the last ulps so the invariant check never trips.
    return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

}  // namespace qprobe::rng
