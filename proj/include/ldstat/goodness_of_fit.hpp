#pragma once

#include "ldstat/lddist.hpp"

#include <cstdint>
#include <span>

namespace ldstat {

/// Total-variation distance between the empirical law of `counts` and the
/// table, on the bins {0, ..., max_bin} plus one tail bin (> max_bin).
double total_variation(std::span<const std::int64_t> counts, const PmfTable& table,
                       std::size_t max_bin);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson chi-square of `counts` against the table on the same binning as
/// total_variation; dof = number of bins - 1.
ChiSquare chi_square(std::span<const std::int64_t> counts, const PmfTable& table,
                     std::size_t max_bin);

}  // namespace ldstat
