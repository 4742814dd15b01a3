#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace strongdet {

/// Golden-ratio increment used to derive per-stream seeds.
inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

/// Seed of the i-th independent stream derived from `base`:
/// base XOR (i * 0x9E3779B97F4A7C15).
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    return base ^ (index * kSeedStride);
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Base seed of the i-th nested run (a run that itself splits per sample).
/// Mixing keeps sample seeds of different runs from coinciding, which plain
/// XOR splitting of two levels would do (b*K ^ i*K is symmetric in b, i).
constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(split_seed(base, index));
}

using Engine = std::mt19937_64;

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
inline std::complex<double> complex_normal(Engine& engine) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double re = gauss(engine);
    const double im = gauss(engine);
    return {re, im};
}

inline Eigen::VectorXcd complex_normal_vector(Engine& engine, Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal(engine);
    return v;
}

}  // namespace strongdet
