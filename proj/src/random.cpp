#include "ldstat/random.hpp"

#include <cmath>

namespace ldstat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::int64_t poisson_inversion(double mean, Rng& rng) {
    const double u = uniform_open(rng);
    double term = std::exp(-mean);
    double cdf = term;
    std::int64_t k = 0;
    // cdf can stall just below u through rounding; 1000 is far beyond mean 30.
    while (u > cdf && k < 1000) {
        ++k;
        term *= mean / static_cast<double>(k);
        cdf += term;
    }
    return k;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::int64_t poisson(double mean, Rng& rng) {
    if (!(mean > 0.0)) return 0;
    constexpr double chunk = 30.0;
    std::int64_t total = 0;
    while (mean > chunk) {
        total += poisson_inversion(chunk, rng);
        mean -= chunk;
    }
    return total + poisson_inversion(mean, rng);
}

std::int64_t geometric(double success, Rng& rng) {
    if (success >= 1.0) return 1;
    const double trials = std::floor(std::log(uniform_open(rng)) / std::log1p(-success));
    if (!(trials < 9.2e18)) return INT64_MAX;
    return 1 + static_cast<std::int64_t>(trials);
}

}  // namespace ldstat
