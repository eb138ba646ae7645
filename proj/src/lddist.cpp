#include "ldstat/lddist.hpp"

#include "ldstat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ldstat {

LDParams::LDParams(double alpha, double rho) : alpha_(alpha), rho_(rho) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be positive and finite, got " + std::to_string(alpha));
}

double PmfTable::cdf(std::int64_t k) const {
    if (k < 0) return 0.0;
    const auto last = static_cast<std::int64_t>(max_index());
    CompensatedSum sum;
    for (std::int64_t i = 0; i <= std::min(k, last); ++i) sum += q[static_cast<std::size_t>(i)];
    return std::min(1.0, sum.value());
}

PmfTable ld_pmf_table(const LDParams& params, std::size_t K, const TableBudget& budget) {
    if (K + 1 > budget.max_entries)
        throw BudgetError("pmf table of " + std::to_string(K + 1) + " entries exceeds budget of " +
                          std::to_string(budget.max_entries) +
                          "; use the generating-function estimators for such samples");
    const double alpha = params.alpha();
    const std::vector<double> p = yule_pmf_table(params.fitness(), K);
    std::vector<double> weighted(K + 1, 0.0);
    for (std::size_t i = 1; i <= K; ++i) weighted[i] = static_cast<double>(i) * p[i];

    std::vector<double> q(K + 1, 0.0);
    q[0] = std::exp(-alpha);
    CompensatedSum total;
    total += q[0];
    for (std::size_t k = 1; k <= K; ++k) {
        CompensatedSum conv;
        for (std::size_t i = 1; i <= k; ++i) conv += weighted[i] * q[k - i];
        q[k] = alpha / static_cast<double>(k) * conv.value();
        total += q[k];
    }
    return PmfTable{params, std::move(q), std::max(0.0, 1.0 - total.value())};
}

double ld_pgf(const LDParams& params, double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("pgf argument must lie in [0,1], got " + std::to_string(z));
    if (z == 1.0) return 1.0;
    return std::exp(params.alpha() * (yule_pgf(z, params.fitness()) - 1.0));
}

double ld_cdf(const LDParams& params, std::int64_t k, const TableBudget& budget) {
    if (k < 0) return 0.0;
    return ld_pmf_table(params, static_cast<std::size_t>(k), budget).cdf(k);
}

std::int64_t ld_quantile(const LDParams& params, double u, const TableBudget& budget) {
    if (!(u >= 0.0 && u < 1.0))
        throw DomainError("quantile level must lie in [0,1), got " + std::to_string(u));
    if (u <= std::exp(-params.alpha())) return 0;
    std::size_t K = 64;
    for (;;) {
        K = std::min(K, budget.max_entries - 1);
        const PmfTable table = ld_pmf_table(params, K, budget);
        CompensatedSum cdf;
        for (std::size_t k = 0; k <= K; ++k) {
            cdf += table.q[k];
            if (cdf.value() >= u) return static_cast<std::int64_t>(k);
        }
        if (K + 1 >= budget.max_entries)
            throw BudgetError("quantile " + std::to_string(u) + " lies beyond the table budget of " +
                              std::to_string(budget.max_entries) + " entries");
        K *= 4;
    }
}

std::int64_t ld_draw(double alpha, Fitness rho, Rng& rng) {
    const std::int64_t clones = poisson(alpha, rng);
    std::int64_t total = 0;
    for (std::int64_t j = 0; j < clones; ++j) total = saturating_add(total, yule_sample(rho, rng));
    return total;
}

Sample ld_sample(double alpha, Fitness rho, std::size_t n, Rng& rng) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be non-negative and finite, got " + std::to_string(alpha));
    if (n == 0) throw DomainError("sample size must be at least 1");
    std::vector<std::int64_t> counts(n);
    for (auto& x : counts) x = ld_draw(alpha, rho, rng);
    return Sample(std::move(counts));
}

Sample ld_sample(const LDParams& params, std::size_t n, Rng& rng) {
    return ld_sample(params.alpha(), params.fitness(), n, rng);
}

}  // namespace ldstat
