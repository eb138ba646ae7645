#include "ldstat/gf.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/lddist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ldstat {

namespace {

struct PgfPoint {
    double h;
    double h1;
    double g;
};

PgfPoint pgf_point(double alpha, double rho, double z) {
    const Fitness fit(rho);
    const double h = yule_pgf(z, fit);
    return {h, yule_pgf_drho(z, fit), std::exp(alpha * (h - 1.0))};
}

double ld_pgf_raw(double alpha, double rho, double z) {
    return std::exp(alpha * (yule_pgf(z, Fitness(rho)) - 1.0));
}

void require_control(double z, const char* name) {
    if (!(z > 0.0 && z < 1.0))
        throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(z));
}

}  // namespace

void GFControls::validate() const {
    require_control(z1, "z1");
    require_control(z2, "z2");
    require_control(z3, "z3");
    require_control(q, "q");
    if (!(z1 < z2)) throw DomainError("controls must satisfy z1 < z2");
}

double empirical_pgf_log(const Sample& sample, double log_z) {
    CompensatedSum sum;
    for (const auto& [value, mult] : sample.frequencies())
        sum += static_cast<double>(mult) * std::exp(static_cast<double>(value) * log_z);
    return sum.value() / static_cast<double>(sample.size());
}

double empirical_pgf(const Sample& sample, double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("pgf argument must lie in [0,1], got " + std::to_string(z));
    if (z == 0.0)
        return static_cast<double>(sample.zeros()) / static_cast<double>(sample.size());
    return empirical_pgf_log(sample, std::log(z));
}

double ratio_f(double rho, double z1, double z2) {
    const Fitness fit(rho);
    return (yule_pgf(z1, fit) - 1.0) / (yule_pgf(z2, fit) - 1.0);
}

Fitness ratio_f_inverse(double y, double z1, double z2) {
    require_control(z1, "z1");
    require_control(z2, "z2");
    if (z1 == z2) throw DomainError("ratio inversion needs z1 != z2");
    if (!std::isfinite(y)) throw EstimationError("log-ratio is not finite");
    const auto objective = [&](double rho) { return ratio_f(rho, z1, z2) - y; };
    double lo = 1e-4, hi = 100.0;
    for (int stage = 0; stage < 3; ++stage, lo /= 10.0, hi *= 10.0) {
        const double flo = objective(lo);
        const double fhi = objective(hi);
        if (flo == 0.0) return Fitness(lo);
        if (fhi == 0.0) return Fitness(hi);
        if ((flo > 0.0) != (fhi > 0.0))
            return Fitness(find_root(objective, RootSpec{lo, hi, 1e-12, 200}));
    }
    throw EstimationError("log-ratio " + std::to_string(y) +
                          " is outside the range of f on rho in [1e-6, 1e4]");
}

std::array<Vector2, 3> gf_jacobian(double alpha, double rho, double z1, double z2, double z3) {
    if (z1 == z2) throw DomainError("GF covariance needs z1 != z2");
    if (!(alpha > 0.0) || !(rho > 0.0))
        throw DomainError("GF covariance needs alpha > 0 and rho > 0");
    const PgfPoint p1 = pgf_point(alpha, rho, z1);
    const PgfPoint p2 = pgf_point(alpha, rho, z2);
    const PgfPoint p3 = pgf_point(alpha, rho, z3);
    const double cross = (p2.h - 1.0) * p1.h1 - (p1.h - 1.0) * p2.h1;
    const double r1 = (p2.h - 1.0) / (alpha * p1.g * cross);
    const double r2 = (p1.h - 1.0) / (alpha * p2.g * -cross);
    const double lever = alpha * p3.h1 / (1.0 - p3.h);
    const double a3 = 1.0 / (p3.g * (p3.h - 1.0));
    return {Vector2{lever * r1, r1}, Vector2{lever * r2, r2}, Vector2{a3, 0.0}};
}

Matrix2 gf_covariance(double alpha, double rho, double z1, double z2, double z3, std::size_t n) {
    if (n == 0) throw DomainError("GF covariance needs n >= 1");
    const std::array<Vector2, 3> M = gf_jacobian(alpha, rho, z1, z2, z3);
    const std::array<double, 3> z{z1, z2, z3};
    std::array<double, 3> g{};
    for (int i = 0; i < 3; ++i) g[i] = ld_pgf_raw(alpha, rho, z[i]);
    std::array<std::array<double, 3>, 3> C{};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            C[i][j] = ld_pgf_raw(alpha, rho, z[i] * z[j]) - g[i] * g[j];
            C[j][i] = C[i][j];
        }
    Matrix2 cov{};
    for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += M[i][a] * C[i][j] * M[j][b];
            cov[a][b] = s / static_cast<double>(n);
            cov[b][a] = cov[a][b];
        }
    return cov;
}

namespace {

GFFit gf_fit_log_controls(const Sample& sample, double b, const std::array<double, 3>& log_z) {
    GFDiagnostics diag;
    diag.b = b;
    for (int i = 0; i < 3; ++i) {
        diag.z_eff[i] = std::exp(log_z[i]);
        diag.g_hat[i] = empirical_pgf_log(sample, log_z[i]);
    }
    if (sample.max() == 0)
        throw GFError("all counts are zero: GF estimates are undefined (ln g = 0); use the p0 "
                      "estimator",
                      diag);
    if (!(diag.g_hat[0] > 0.0) || !(diag.g_hat[2] > 0.0))
        throw GFError("empirical pgf underflowed at the effective controls", diag);
    diag.y_hat = std::log(diag.g_hat[0]) / std::log(diag.g_hat[1]);

    double rho = 0.0;
    try {
        rho = ratio_f_inverse(diag.y_hat, diag.z_eff[0], diag.z_eff[1]).value();
    } catch (const EstimationError& e) {
        throw GFError(e.what(), diag);
    }
    const double h3 = yule_pgf(diag.z_eff[2], Fitness(rho));
    const double alpha = std::log(diag.g_hat[2]) / (h3 - 1.0);

    GFFit fit;
    fit.diagnostics = diag;
    EstimateResult& r = fit.result;
    r.method = Method::GF;
    r.alpha_hat = alpha;
    r.rho_hat = rho;
    if (!(alpha > 0.0)) {
        r.converged = false;
        r.message = "alpha estimate is not positive";
        r.warnings.push_back(r.message);
        return fit;
    }
    r.cov = gf_covariance(alpha, rho, diag.z_eff[0], diag.z_eff[1], diag.z_eff[2],
                          sample.size());
    r.converged = true;
    if (b > 1.0)
        r.warnings.push_back("covariance evaluated at data-dependent controls (b = " +
                             std::to_string(b) + ")");
    return fit;
}

}  // namespace

GFFit gf_fit(const Sample& sample, const GFControls& controls) {
    controls.validate();
    const double b = std::max<double>(1.0, static_cast<double>(sample.quantile(controls.q)));
    return gf_fit_log_controls(sample, b,
                               {std::log(controls.z1) / b, std::log(controls.z2) / b,
                                std::log(controls.z3) / b});
}

GFFit gf_fit_at(const Sample& sample, double z1, double z2, double z3) {
    GFControls{z1, z2, z3, 0.5}.validate();
    return gf_fit_log_controls(sample, 1.0, {std::log(z1), std::log(z2), std::log(z3)});
}

EstimateResult p0_estimate(const Sample& sample) {
    const std::int64_t zeros = sample.zeros();
    if (zeros == 0) throw EstimationError("p0 estimator is undefined: the sample has no zeros");
    const auto n = static_cast<double>(sample.size());
    EstimateResult r;
    r.method = Method::P0;
    r.has_rho = false;
    r.alpha_hat = zeros == static_cast<std::int64_t>(sample.size())
                      ? 0.0
                      : -std::log(static_cast<double>(zeros) / n);
    r.cov[0][0] = std::expm1(r.alpha_hat) / n;
    r.converged = true;
    r.warnings.push_back("variance from the delta method (e^alpha - 1)/n");
    return r;
}

}  // namespace ldstat
