#include "ldstat/numerics.hpp"

#include "ldstat/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace ldstat {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(name) + ": argument must be positive and finite, got " +
                          std::to_string(x));
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    return std::lgamma(x);
}

double log_beta(double a, double b) {
    require_positive(a, "log_beta");
    require_positive(b, "log_beta");
    const double small = std::min(a, b), large = std::max(a, b);
    // lgamma(large) - lgamma(large + small) cancels badly once large >> small
    if (large > 100.0 && small * std::log(large) < 600.0)
        return std::lgamma(small) + std::log(boost::math::tgamma_delta_ratio(large, small));
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double digamma(double x) {
    require_positive(x, "digamma");
    return boost::math::digamma(x);
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    return boost::math::trigamma(x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec) {
    if (!(spec.abs_tol > 0.0) || spec.max_subdivisions < 1)
        throw DomainError("integrate: invalid QuadSpec");
    if (a == b) return 0.0;
    if (!(a < b)) return -integrate(f, b, a, spec);

    std::priority_queue<Segment> segments;
    Segment first = gauss_kronrod_15(f, a, b);
    double total = first.value;
    double total_error = first.error;
    segments.push(first);

    for (int subdivisions = 1;; ++subdivisions) {
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
        if (total_error <= target) return total;
        if (!std::isfinite(total))
            throw AccuracyError("integrate: non-finite integrand", total, total_error);
        if (subdivisions >= spec.max_subdivisions)
            throw AccuracyError("integrate: subdivision budget exhausted", total, total_error);

        const Segment worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw AccuracyError("integrate: interval below machine resolution", total,
                                total_error);
        const Segment left = gauss_kronrod_15(f, worst.a, mid);
        const Segment right = gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }
}

double find_root(const std::function<double(double)>& f, const RootSpec& spec) {
    if (!(spec.lo < spec.hi) || !(spec.tol > 0.0) || spec.max_iter < 1)
        throw DomainError("find_root: invalid RootSpec");
    const double flo = f(spec.lo), fhi = f(spec.hi);
    if (flo == 0.0) return spec.lo;
    if (fhi == 0.0) return spec.hi;
    if ((flo > 0.0) == (fhi > 0.0) || std::isnan(flo) || std::isnan(fhi))
        throw BracketError("find_root: no sign change on [" + std::to_string(spec.lo) + ", " +
                           std::to_string(spec.hi) + "]");
    const double tol = spec.tol;
    const auto done = [tol](double lo, double hi) { return hi - lo <= tol; };
    auto iters = static_cast<std::uintmax_t>(spec.max_iter);
    const auto [lo, hi] =
        boost::math::tools::toms748_solve(f, spec.lo, spec.hi, flo, fhi, done, iters);
    return 0.5 * (lo + hi);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double chi_squared_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_squared_quantile: p must lie in (0,1)");
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double chi_squared_survival(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(
        boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

}  // namespace ldstat
