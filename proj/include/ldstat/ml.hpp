#pragma once

#include "ldstat/estimate.hpp"
#include "ldstat/lddist.hpp"
#include "ldstat/sample.hpp"

#include <cstdint>
#include <vector>

namespace ldstat {

/// q_k of LD(alpha, rho) together with its first and second partial
/// derivatives in (alpha, rho), built by the convolution recursions and
/// extendable in k.
class DerivativeRecursion {
public:
    /// `capacity` bounds the largest index extend_to() may reach.
    DerivativeRecursion(const LDParams& params, std::size_t capacity, bool second_order = true);

    void extend_to(std::size_t K);
    std::size_t size() const noexcept { return q_.size(); }

    const std::vector<double>& q() const noexcept { return q_; }
    const std::vector<double>& dq_dalpha() const noexcept { return qa_; }
    const std::vector<double>& dq_drho() const noexcept { return qr_; }
    const std::vector<double>& d2q_dalpha2() const noexcept { return qaa_; }
    const std::vector<double>& d2q_dalpha_drho() const noexcept { return qar_; }
    const std::vector<double>& d2q_drho2() const noexcept { return qrr_; }

private:
    double alpha_;
    bool second_order_;
    YuleTables yule_;
    std::vector<double> weighted_;  // i * p_i
    std::vector<double> q_, qa_, qr_, qaa_, qar_, qrr_;
};

/// l = sum_j c_j ln q_j over all observed values (zeros included). Returns
/// -infinity when an observed value has q_j that underflowed to zero.
double ld_loglik(const Sample& sample, const LDParams& params, const TableBudget& budget = {});

struct LogLikDerivatives {
    double loglik = 0.0;
    Vector2 score{};
    Matrix2 hessian{};
};

LogLikDerivatives ld_loglik_derivatives(const Sample& sample, const LDParams& params,
                                        const TableBudget& budget = {});
Vector2 ld_score(const Sample& sample, const LDParams& params, const TableBudget& budget = {});
Matrix2 ld_hessian(const Sample& sample, const LDParams& params, const TableBudget& budget = {});

struct MLOptions {
    int max_iter = 100;
    double step_tol = 1e-8;
    int max_halvings = 30;
    TableBudget budget{};
};

/// Damped Newton ascent of the log-likelihood from `init`. Failures (budget,
/// degenerate sample, non-convergence) come back with converged == false.
EstimateResult ml_fit(const Sample& sample, const LDParams& init, const MLOptions& opts = {});

/// Same, initialised at the GF estimate (falling back to the p0 estimate and
/// rho = 1 when GF fails).
EstimateResult ml_fit(const Sample& sample, const MLOptions& opts = {});

struct Winsorized {
    Sample sample;
    std::size_t clipped = 0;
};

/// Replaces every count above `bound` by `bound`.
Winsorized winsorize(const Sample& sample, std::int64_t bound = 500);

/// ML on the Winsorized sample; method tag ML_WINSOR.
EstimateResult ml_fit_winsorized(const Sample& sample, std::int64_t bound = 500,
                                 const MLOptions& opts = {});

struct FisherInfo {
    Matrix2 info{};
    std::size_t terms = 0;
    /// True when the term budget stopped the series before rel_tol was met.
    /// Partial sums increase, so the inverse then gives conservative intervals.
    bool conservative = false;
    double last_relative_increment = 0.0;
};

/// Expected information per observation, summed until the relative increment
/// over a window of `window` terms drops below rel_tol.
FisherInfo fisher_info(const LDParams& params, double rel_tol, std::size_t window = 1000,
                       std::size_t max_terms = 20000);

}  // namespace ldstat
