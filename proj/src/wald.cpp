#include "ldstat/wald.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/numerics.hpp"

#include <cmath>
#include <string>

namespace ldstat {

bool Ellipse::contains(const Vector2& x) const {
    const Matrix2 inv = inverse(cov);
    const double dx = x[0] - center[0];
    const double dy = x[1] - center[1];
    const double d2 = dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy);
    return d2 <= radius2;
}

WaldInference wald_inference(const EstimateResult& result, double level,
                             const std::optional<NullHypothesis>& null) {
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0,1), got " + std::to_string(level));
    if (!result.converged)
        throw EstimationError("no inference for a failed estimate: " + result.message);
    const Matrix2& cov = result.cov;
    if (!result.has_rho) {
        if (!(cov[0][0] >= 0.0)) throw EstimationError("negative variance for alpha");
    } else if (!is_symmetric(cov) || !is_positive_semidefinite(cov)) {
        throw EstimationError("covariance is not positive semidefinite: [[" +
                              std::to_string(cov[0][0]) + ", " + std::to_string(cov[0][1]) +
                              "], [" + std::to_string(cov[1][0]) + ", " +
                              std::to_string(cov[1][1]) + "]]");
    }

    WaldInference out;
    out.level = level;
    const double zq = normal_quantile(0.5 + 0.5 * level);
    const double se_alpha = std::sqrt(cov[0][0]);
    out.alpha = {result.alpha_hat - zq * se_alpha, result.alpha_hat + zq * se_alpha};
    if (result.has_rho) {
        const double se_rho = std::sqrt(cov[1][1]);
        out.rho = Interval{result.rho_hat - zq * se_rho, result.rho_hat + zq * se_rho};

        Ellipse e;
        e.center = {result.alpha_hat, result.rho_hat};
        e.cov = cov;
        e.radius2 = chi_squared_quantile(level, 2.0);
        const SymmetricEigen eig = symmetric_eigen(cov);
        e.axes = eig.vectors;
        for (int i = 0; i < 2; ++i) e.semi_axes[i] = std::sqrt(std::max(0.0, eig.values[i]) * e.radius2);
        out.region = e;
    }

    if (null && (null->alpha || null->rho)) {
        if (null->rho && !result.has_rho)
            throw EstimationError("the estimate carries no rho; cannot test a rho null");
        if (null->alpha && null->rho) {
            const Matrix2 inv = inverse(cov);
            const double dx = result.alpha_hat - *null->alpha;
            const double dy = result.rho_hat - *null->rho;
            const double w = dx * (inv[0][0] * dx + inv[0][1] * dy) +
                             dy * (inv[1][0] * dx + inv[1][1] * dy);
            out.statistic = w;
            out.p_value = chi_squared_survival(w, 2.0);
        } else {
            const int idx = null->alpha ? 0 : 1;
            const double estimate = idx == 0 ? result.alpha_hat : result.rho_hat;
            const double value = idx == 0 ? *null->alpha : *null->rho;
            const double z = (estimate - value) / std::sqrt(cov[idx][idx]);
            out.statistic = z * z;
            out.p_value = 2.0 * normal_cdf(-std::fabs(z));
        }
    }
    return out;
}

}  // namespace ldstat
