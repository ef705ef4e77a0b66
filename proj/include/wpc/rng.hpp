#pragma once

#include <cmath>
#include <cstdint>

#include "wpc/disk.hpp"

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so parallel workers can consume disjoint counter
// ranges and reproduce results bit-for-bit at any thread count.

namespace wpc {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x = mix64(x);
    x += 0x9e3779b97f4a7c15ULL * (counter + 1);
    return mix64(x);
}

// Uniform in [0, 1).
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(counter_bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform (Euclidean area) point of the Euclidean disk of radius t.
inline complexd uniform_euclidean_disk(double t, std::uint64_t seed, std::uint64_t counter) {
    const double r = t * std::sqrt(u01(seed, 0, counter));
    const double phi = 2.0 * M_PI * u01(seed, 1, counter);
    return std::polar(r, phi);
}

// Uniform (hyperbolic area) point of B(0;R): radial cdf is (cosh s - 1)/(cosh R - 1).
inline complexd uniform_hyperbolic_ball(double R, std::uint64_t seed, std::uint64_t counter) {
    const double u = u01(seed, 0, counter);
    const double s = std::acosh(1.0 + u * (std::cosh(R) - 1.0));
    const double phi = 2.0 * M_PI * u01(seed, 1, counter);
    return std::polar(std::tanh(0.5 * s), phi);
}

}  // namespace wpc
