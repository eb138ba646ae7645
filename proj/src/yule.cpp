#include "ldstat/yule.hpp"

#include "ldstat/errors.hpp"

#include <cmath>
#include <string>

namespace ldstat {

namespace {

void require_clone_size(std::int64_t k) {
    if (k < 1) throw DomainError("clone size index must be >= 1, got " + std::to_string(k));
}

void require_unit_interval(double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("pgf argument must lie in [0,1], got " + std::to_string(z));
}

// D_k = d ln p_k / d rho.
double log_derivative(std::int64_t k, double rho) {
    const double kk = static_cast<double>(k);
    return 1.0 / rho + digamma(rho + 1.0) - digamma(rho + kk + 1.0);
}

}  // namespace

Fitness::Fitness(double rho) : rho_(rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw DomainError("fitness rho must be positive and finite, got " + std::to_string(rho));
}

double yule_pmf(std::int64_t k, Fitness rho) {
    require_clone_size(k);
    const double r = rho.value();
    return std::exp(std::log(r) + log_beta(r + 1.0, static_cast<double>(k)));
}

std::vector<double> yule_pmf_table(Fitness rho, std::size_t K) {
    const double r = rho.value();
    std::vector<double> p(K + 1, 0.0);
    if (K == 0) return p;
    p[1] = r / (r + 1.0);
    for (std::size_t k = 1; k < K; ++k) {
        const double kk = static_cast<double>(k);
        p[k + 1] = p[k] * kk / (r + kk + 1.0);
    }
    return p;
}

double yule_survival(std::int64_t K, Fitness rho) {
    if (K < 0) return 1.0;
    // rho B(rho, K + 1) = Gamma(rho + 1) Gamma(K + 1) / Gamma(rho + K + 1)
    const double r = rho.value();
    return std::exp(std::log(r) + log_beta(r, static_cast<double>(K) + 1.0));
}

std::int64_t yule_truncation(Fitness rho, double eps, std::int64_t cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("yule_truncation: eps must lie in (0,1)");
    if (yule_survival(cap, rho) >= eps) return cap;
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    while (yule_survival(hi, rho) >= eps) {
        lo = hi;
        hi = hi > cap / 2 ? cap : hi * 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (yule_survival(mid, rho) < eps)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Both integrals are taken after v = u^{1/(rho+1)}, which maps v^rho dv to
// du / (rho + 1) and keeps the integrand smooth for large rho.
double yule_pgf(double z, Fitness rho, const QuadSpec& quad) {
    require_unit_interval(z);
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    const double r = rho.value();
    const double omz = 1.0 - z;
    const double expo = 1.0 / (r + 1.0);
    const double integral =
        integrate([&](double u) { return 1.0 / (omz + z * std::pow(u, expo)); }, 0.0, 1.0, quad);
    return r * z * expo * integral;
}

double yule_pgf_drho(double z, Fitness rho, const QuadSpec& quad) {
    require_unit_interval(z);
    if (z == 0.0 || z == 1.0) return 0.0;
    const double r = rho.value();
    const double omz = 1.0 - z;
    const double expo = 1.0 / (r + 1.0);
    const double integral = integrate(
        [&](double u) { return (1.0 + r * expo * std::log(u)) / (omz + z * std::pow(u, expo)); },
        0.0, 1.0, quad);
    return z * expo * integral;
}

double yule_dp_drho(std::int64_t k, Fitness rho) {
    return yule_pmf(k, rho) * log_derivative(k, rho.value());
}

double yule_d2p_drho2(std::int64_t k, Fitness rho) {
    const double r = rho.value();
    const double d = log_derivative(k, r);
    const double kk = static_cast<double>(k);
    return yule_pmf(k, rho) *
           (d * d - 1.0 / (r * r) + trigamma(r + 1.0) - trigamma(r + kk + 1.0));
}

YuleTables yule_tables(Fitness rho, std::size_t K) {
    const double r = rho.value();
    YuleTables t;
    t.p = yule_pmf_table(rho, K);
    t.dp.assign(K + 1, 0.0);
    t.d2p.assign(K + 1, 0.0);
    // psi(r+1) - psi(r+k+1) = -sum_{j<=k} 1/(r+j); psi'(r+1) - psi'(r+k+1) = sum 1/(r+j)^2.
    CompensatedSum harmonic, harmonic2;
    for (std::size_t k = 1; k <= K; ++k) {
        const double x = r + static_cast<double>(k);
        harmonic += 1.0 / x;
        harmonic2 += 1.0 / (x * x);
        const double d = 1.0 / r - harmonic.value();
        t.dp[k] = t.p[k] * d;
        t.d2p[k] = t.p[k] * (d * d - 1.0 / (r * r) + harmonic2.value());
    }
    return t;
}

std::int64_t yule_sample(Fitness rho, Rng& rng) {
    const double v = std::pow(uniform_open(rng), 1.0 / rho.value());
    return geometric(v, rng);
}

}  // namespace ldstat
