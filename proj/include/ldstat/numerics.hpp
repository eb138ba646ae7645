#pragma once

#include <cmath>
#include <functional>

namespace ldstat {

struct QuadSpec {
    double abs_tol = 1e-10;
    /// Relative tolerance; the effective target is max(abs_tol, rel_tol * |estimate|).
    double rel_tol = 0.0;
    int max_subdivisions = 200;
};

struct RootSpec {
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-10;
    int max_iter = 200;
};

double log_gamma(double x);
/// ln B(a, b), evaluated in log space only.
double log_beta(double a, double b);
double digamma(double x);
double trigamma(double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature with global error control.
/// Throws AccuracyError (carrying the best estimate) when the subdivision
/// budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec = {});

/// Bracketed root of f on [spec.lo, spec.hi] (TOMS 748). Throws BracketError if
/// f(lo), f(hi) share a sign.
double find_root(const std::function<double(double)>& f, const RootSpec& spec);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double normal_quantile(double p);
double normal_cdf(double x);
double chi_squared_quantile(double p, double dof);
double chi_squared_survival(double x, double dof);

}  // namespace ldstat
