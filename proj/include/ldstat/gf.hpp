#pragma once

#include "ldstat/errors.hpp"
#include "ldstat/estimate.hpp"
#include "ldstat/sample.hpp"
#include "ldstat/yule.hpp"

#include <array>
#include <cstddef>

namespace ldstat {

/// Control points of the generating-function estimators and the quantile
/// level q that sets the rescaling factor b.
struct GFControls {
    double z1 = 0.1;
    double z2 = 0.9;
    double z3 = 0.8;
    double q = 0.1;

    /// Throws DomainError unless 0 < z1 < z2 < 1, z3 in (0,1), q in (0,1).
    void validate() const;
};

struct GFDiagnostics {
    double b = 1.0;
    /// Effective controls z_i^{1/b}.
    std::array<double, 3> z_eff{};
    /// Empirical pgf at the effective controls.
    std::array<double, 3> g_hat{};
    /// ln g_hat(z1') / ln g_hat(z2').
    double y_hat = 0.0;
};

struct GFFit {
    EstimateResult result;
    GFDiagnostics diagnostics;
};

/// Estimation failure that still carries the diagnostics computed so far.
class GFError : public EstimationError {
public:
    GFError(const std::string& what, GFDiagnostics diagnostics)
        : EstimationError(what), diagnostics_(diagnostics) {}
    const GFDiagnostics& diagnostics() const noexcept { return diagnostics_; }

private:
    GFDiagnostics diagnostics_;
};

/// (1/n) sum_i z^{X_i}, each term as exp(X_i ln z).
double empirical_pgf(const Sample& sample, double z);
/// Same with the control given by its logarithm (log_z <= 0).
double empirical_pgf_log(const Sample& sample, double log_z);

/// f(rho) = (h_rho(z1) - 1) / (h_rho(z2) - 1).
double ratio_f(double rho, double z1, double z2);

/// rho with f(rho) = y, searched on [1e-4, 100] and widened tenfold per side up
/// to [1e-6, 1e4]. Throws EstimationError when y is outside the range of f.
Fitness ratio_f_inverse(double y, double z1, double z2);

/// GF estimates with quantile rescaling of the controls.
/// Throws GFError for all-zero samples or out-of-range ratios.
GFFit gf_fit(const Sample& sample, const GFControls& controls = {});

/// GF estimates at fixed effective controls (no rescaling).
GFFit gf_fit_at(const Sample& sample, double z1, double z2, double z3);

/// Jacobian of (alpha, rho) as functions of (g(z1), g(z2), g(z3)); row i is
/// (d alpha / d g_i, d rho / d g_i). Entry [2][1] is zero.
std::array<Vector2, 3> gf_jacobian(double alpha, double rho, double z1, double z2, double z3);

/// Asymptotic covariance of the GF estimates for a sample of size n: M^t C M / n
/// with C_ij = g(z_i z_j) - g(z_i) g(z_j).
Matrix2 gf_covariance(double alpha, double rho, double z1, double z2, double z3, std::size_t n);

/// alpha = -ln(fraction of zeros); no rho estimate; variance (e^alpha - 1)/n.
/// Throws EstimationError when the sample has no zeros.
EstimateResult p0_estimate(const Sample& sample);

}  // namespace ldstat
