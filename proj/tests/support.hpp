#pragma once

#include "ldstat/lddist.hpp"
#include "ldstat/random.hpp"
#include "ldstat/sample.hpp"

#include <algorithm>
#include <cmath>

namespace ldstat::test {

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

inline Sample seeded_sample(double alpha, double rho, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return ld_sample(alpha, Fitness(rho), n, rng);
}

}  // namespace ldstat::test
