#pragma once

#include "ldstat/random.hpp"
#include "ldstat/sample.hpp"
#include "ldstat/yule.hpp"

#include <cstdint>
#include <vector>

namespace ldstat {

/// Parameters of LD(alpha, rho): alpha is the expected number of mutations,
/// rho the relative fitness of normal cells versus mutants.
class LDParams {
public:
    LDParams(double alpha, double rho);
    double alpha() const noexcept { return alpha_; }
    Fitness fitness() const noexcept { return rho_; }
    double rho() const noexcept { return rho_.value(); }

private:
    double alpha_;
    Fitness rho_;
};

/// Upper bound on the number of pmf entries any O(K^2) recursion may build.
struct TableBudget {
    std::size_t max_entries = 100000;
};

/// q_0..q_K of LD(alpha, rho) with the mass left beyond K.
struct PmfTable {
    LDParams params;
    std::vector<double> q;
    double tail_bound = 0.0;

    std::size_t max_index() const noexcept { return q.size() - 1; }
    /// P(X <= k); saturates at the table's last entry.
    double cdf(std::int64_t k) const;
};

/// q_0 = e^{-alpha}, q_k = (alpha / k) sum_{i=1..k} i p_i q_{k-i}.
/// Throws BudgetError when K + 1 exceeds the budget.
PmfTable ld_pmf_table(const LDParams& params, std::size_t K, const TableBudget& budget = {});

/// g(z) = exp(alpha (h_rho(z) - 1)).
double ld_pgf(const LDParams& params, double z);

double ld_cdf(const LDParams& params, std::int64_t k, const TableBudget& budget = {});

/// Smallest k with P(X <= k) >= u; the table grows on demand within the budget.
std::int64_t ld_quantile(const LDParams& params, double u, const TableBudget& budget = {});

/// Compound Poisson draws: N ~ Poisson(alpha) clones, each of Yule(rho) size.
/// alpha = 0 gives the point mass at zero.
std::int64_t ld_draw(double alpha, Fitness rho, Rng& rng);
Sample ld_sample(double alpha, Fitness rho, std::size_t n, Rng& rng);
Sample ld_sample(const LDParams& params, std::size_t n, Rng& rng);

}  // namespace ldstat
