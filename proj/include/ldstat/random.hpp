#pragma once

#include <cstdint>
#include <random>

namespace ldstat {

using Rng = std::mt19937_64;

/// Seed for stream `index` derived from a master seed; streams are independent
/// and the mapping is stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform on the open interval (0, 1), 53-bit resolution.
inline double uniform_open(Rng& rng) {
    for (;;) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

/// Poisson draw: inversion for mean <= 30, sum of independent inversions beyond.
std::int64_t poisson(double mean, Rng& rng);

/// Geometric on {1, 2, ...} with success probability `success`, by inversion.
/// Saturates at INT64_MAX.
std::int64_t geometric(double success, Rng& rng);

/// a + b saturating at INT64_MAX (both non-negative).
inline std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
    constexpr std::int64_t top = INT64_MAX;
    return a > top - b ? top : a + b;
}

}  // namespace ldstat
