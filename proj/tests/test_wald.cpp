#include "ldstat/errors.hpp"
#include "ldstat/gf.hpp"
#include "ldstat/wald.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace ldstat;
using doctest::Approx;

namespace {

EstimateResult fitted(double a, double r, Matrix2 cov) {
    EstimateResult e;
    e.alpha_hat = a;
    e.rho_hat = r;
    e.cov = cov;
    e.converged = true;
    return e;
}

}  // namespace

TEST_CASE("marginal intervals") {
    const EstimateResult e = fitted(2.0, 0.8, {{{0.04, 0.0}, {0.0, 0.01}}});
    const WaldInference w = wald_inference(e, 0.95);
    CHECK(w.alpha.hi - 2.0 == Approx(1.959963984540054 * 0.2).epsilon(1e-12));
    CHECK(2.0 - w.alpha.lo == Approx(1.959963984540054 * 0.2).epsilon(1e-12));
    REQUIRE(w.rho);
    CHECK(w.rho->width() == Approx(2 * 1.959963984540054 * 0.1).epsilon(1e-12));
    CHECK_FALSE(w.p_value);
    const WaldInference w90 = wald_inference(e, 0.90);
    CHECK(w90.alpha.width() < w.alpha.width());
}

TEST_CASE("ellipse") {
    const Matrix2 cov{{{0.05, 0.02}, {0.02, 0.03}}};
    const WaldInference w = wald_inference(fitted(2.0, 1.0, cov), 0.95);
    REQUIRE(w.region);
    const Ellipse& e = *w.region;
    CHECK(e.radius2 == Approx(-2 * std::log(0.05)).epsilon(1e-12));
    CHECK(e.contains({2.0, 1.0}));
    const SymmetricEigen eig = symmetric_eigen(cov);
    for (int i = 0; i < 2; ++i) {
        // axes are eigenvectors and the boundary lies at the semi-axis length
        const Vector2 u{e.axes[0][i], e.axes[1][i]};
        const Vector2 cu{cov[0][0] * u[0] + cov[0][1] * u[1], cov[1][0] * u[0] + cov[1][1] * u[1]};
        CHECK(cu[0] == Approx(eig.values[i] * u[0]).epsilon(1e-12));
        CHECK(cu[1] == Approx(eig.values[i] * u[1]).epsilon(1e-12));
        CHECK(e.semi_axes[i] == Approx(std::sqrt(e.radius2 * eig.values[i])).epsilon(1e-12));
        const double s = e.semi_axes[i];
        CHECK(e.contains({2.0 + 0.999 * s * u[0], 1.0 + 0.999 * s * u[1]}));
        CHECK_FALSE(e.contains({2.0 + 1.001 * s * u[0], 1.0 + 1.001 * s * u[1]}));
    }
}

TEST_CASE("Wald p-values") {
    const EstimateResult e = fitted(2.0, 0.8, {{{0.04, 0.0}, {0.0, 0.01}}});
    const WaldInference one = wald_inference(e, 0.95, NullHypothesis{std::nullopt, 1.0});
    REQUIRE(one.p_value);
    CHECK(*one.statistic == Approx(4.0).epsilon(1e-12));
    CHECK(*one.p_value == Approx(0.04550026389635842).epsilon(1e-10));
    const WaldInference both = wald_inference(e, 0.95, NullHypothesis{2.0, 1.0});
    CHECK(*both.p_value == Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("one-parameter results") {
    const EstimateResult p0 = p0_estimate(Sample({0, 0, 1, 5}));
    const WaldInference w = wald_inference(p0, 0.95, NullHypothesis{1.0, std::nullopt});
    CHECK_FALSE(w.rho);
    CHECK_FALSE(w.region);
    REQUIRE(w.p_value);
    CHECK(w.alpha.contains(p0.alpha_hat));
}

TEST_CASE("refusals") {
    EstimateResult bad = fitted(2.0, 1.0, {{{0.01, 0.1}, {0.1, 0.01}}});
    CHECK_THROWS_AS(wald_inference(bad, 0.95), EstimationError);
    EstimateResult nc = fitted(2.0, 1.0, {{{0.01, 0.0}, {0.0, 0.01}}});
    nc.converged = false;
    CHECK_THROWS_AS(wald_inference(nc, 0.95), EstimationError);
    CHECK_THROWS_AS(wald_inference(fitted(2.0, 1.0, {{{0.01, 0.0}, {0.0, 0.01}}}), 1.0), DomainError);
}

TEST_CASE("test of rho = 1 has power on large LD(2, 0.8) samples") {
    int rejections = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const Sample s = test::seeded_sample(2.0, 0.8, 1102, 5000 + r);
        const EstimateResult fit = gf_fit(s).result;
        const WaldInference w = wald_inference(fit, 0.95, NullHypothesis{std::nullopt, 1.0});
        if (*w.p_value < 0.05) ++rejections;
    }
    CHECK(rejections > reps / 2);
}
