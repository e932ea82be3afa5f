#pragma once

// Deterministic randomness. Every consumer derives an independent substream
// from (seed, label) so results are reproducible and order-independent.
// The stream is fully pinned by the standard: mt19937_64 plus explicit
// uniform/Box-Muller transforms (std::*_distribution is implementation
// defined and is deliberately avoided).

#include <cstdint>
#include <random>

#include "qprobe/linalg.hpp"

namespace qprobe::rng {

/// SplitMix64 finalizer over (a, b); used to derive substream seeds.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// mt19937_64 seeded from mix64(seed, label).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t label);

/// Uniform in [0, 1) with 53 random mantissa bits.
double uniform01(std::mt19937_64& g);

/// Uniform in (0, 1]; safe as a log() argument.
double uniform01_pos(std::mt19937_64& g);

/// One standard normal pair via Box-Muller.
std::pair<double, double> gaussian_pair(std::mt19937_64& g);

/// Matrix with independent standard complex Gaussian entries
/// (real and imaginary parts each N(0,1)).
CMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& g);

/// Haar-random vector, unit norm.
CVector random_pure_state(int dim, std::mt19937_64& g);

/// Hilbert-Schmidt random mixed state: G G^dag / Tr(G G^dag).
DensityMatrix random_density_matrix(int dim, std::mt19937_64& g);

}  // namespace qprobe::rng
