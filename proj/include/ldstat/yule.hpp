#pragma once

#include "ldstat/numerics.hpp"
#include "ldstat/random.hpp"

#include <cstdint>
#include <vector>

namespace ldstat {

/// Relative fitness of normal cells versus mutants (growth-rate ratio).
/// Also the tail exponent of the clone-size law.
class Fitness {
public:
    explicit Fitness(double rho);
    double value() const noexcept { return rho_; }

private:
    double rho_;
};

/// Quadrature settings used for the clone-size pgf and its rho-derivative.
inline constexpr QuadSpec kPgfQuad{1e-13, 1e-13, 4000};

/// P(Y = k) = rho * B(rho + 1, k), k >= 1.
double yule_pmf(std::int64_t k, Fitness rho);

/// p_0..p_K with p_0 = 0, built with p_{k+1} = p_k * k / (rho + k + 1).
std::vector<double> yule_pmf_table(Fitness rho, std::size_t K);

/// Exact tail mass P(Y > K) = Gamma(rho + 1) Gamma(K + 1) / Gamma(rho + K + 1).
double yule_survival(std::int64_t K, Fitness rho);

/// Smallest K with P(Y > K) < eps, saturating at `cap`.
std::int64_t yule_truncation(Fitness rho, double eps, std::int64_t cap = INT64_MAX);

/// h_rho(z) = rho z \int_0^1 v^rho / (1 - z + z v) dv.
double yule_pgf(double z, Fitness rho, const QuadSpec& quad = kPgfQuad);

/// d h_rho(z) / d rho = z \int_0^1 v^rho (1 + rho ln v) / (1 - z + z v) dv.
double yule_pgf_drho(double z, Fitness rho, const QuadSpec& quad = kPgfQuad);

double yule_dp_drho(std::int64_t k, Fitness rho);
double yule_d2p_drho2(std::int64_t k, Fitness rho);

/// p_k and its first two rho-derivatives for k = 0..K (entry 0 is zero).
struct YuleTables {
    std::vector<double> p;
    std::vector<double> dp;
    std::vector<double> d2p;
};

YuleTables yule_tables(Fitness rho, std::size_t K);

/// One clone size: geometric with success probability V = U^{1/rho}.
std::int64_t yule_sample(Fitness rho, Rng& rng);

}  // namespace ldstat
