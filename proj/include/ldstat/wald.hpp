#pragma once

#include "ldstat/estimate.hpp"

#include <optional>

namespace ldstat {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

/// Confidence ellipse {x : (x - center)^t cov^{-1} (x - center) <= radius2}.
/// Columns of `axes` are the unit principal directions; semi_axes[i] is the
/// half-length along column i.
struct Ellipse {
    Vector2 center{};
    Matrix2 cov{};
    Matrix2 axes{};
    Vector2 semi_axes{};
    double radius2 = 0.0;

    bool contains(const Vector2& x) const;
};

/// Point null; unset components are left free.
struct NullHypothesis {
    std::optional<double> alpha;
    std::optional<double> rho;
};

struct WaldInference {
    double level = 0.95;
    Interval alpha;
    std::optional<Interval> rho;
    std::optional<Ellipse> region;
    /// Wald chi-square statistic (squared z for a single parameter).
    std::optional<double> statistic;
    std::optional<double> p_value;
};

/// Normal intervals, the chi-square(2) confidence ellipse and, when a null is
/// given, the Wald p-value. Throws EstimationError for non-converged results or
/// a covariance that is not positive semidefinite.
WaldInference wald_inference(const EstimateResult& result, double level,
                             const std::optional<NullHypothesis>& null = std::nullopt);

}  // namespace ldstat
