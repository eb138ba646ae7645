#pragma once

#include "ldstat/estimate.hpp"
#include "ldstat/gf.hpp"
#include "ldstat/ml.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ldstat {

struct EstimatorOptions {
    GFControls controls{};
    std::int64_t winsor_bound = 500;
    MLOptions ml{};
};

/// Runs one estimator; errors come back as a failed result (converged == false).
EstimateResult estimate(const Sample& sample, Method method, const EstimatorOptions& opts = {});

Method parse_method(const std::string& name);

struct HarnessConfig {
    std::vector<std::pair<double, double>> grid;  // (alpha, rho)
    std::size_t replicates = 1000;
    std::size_t sample_size = 100;
    std::vector<Method> methods{Method::GF};
    std::uint64_t seed = 1;
    EstimatorOptions estimator{};
};

struct MethodSummary {
    Method method = Method::GF;
    std::size_t successes = 0;
    std::size_t failures = 0;
    double mse_alpha = 0.0;
    /// NaN for methods without a rho estimate.
    double mse_rho = 0.0;
    double mean_alpha = 0.0;
    double mean_rho = 0.0;
};

struct HarnessRow {
    double alpha = 0.0;
    double rho = 0.0;
    std::vector<MethodSummary> methods;
};

/// Seed of replicate r in grid cell c: derive_seed(derive_seed(seed, c), r).
/// Every method sees the same samples; failed fits are counted, not averaged.
std::vector<HarnessRow> run_mse_harness(const HarnessConfig& config);

/// One line per (cell, method): alpha,rho,method,replicates,successes,failures,
/// mse_alpha,mse_rho,mean_alpha,mean_rho.
void write_harness_csv(std::ostream& out, const std::vector<HarnessRow>& rows);

/// The samples used by the harness for one grid cell.
Sample harness_sample(const HarnessConfig& config, std::size_t cell, std::size_t replicate);

}  // namespace ldstat
