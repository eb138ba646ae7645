#include "ldstat/errors.hpp"
#include "ldstat/growth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ldstat;
using doctest::Approx;

TEST_CASE("law validation") {
    CHECK_THROWS_AS(validate(DeterministicLaw{0.0}), DomainError);
    CHECK_THROWS_AS(validate(ExponentialLaw{-1.0}), DomainError);
    CHECK_THROWS_AS(validate(GammaLaw{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(LogNormalLaw{0.0, 0.0}), DomainError);
    CHECK_NOTHROW(validate(LogNormalLaw{-2.0, 0.3}));
}

TEST_CASE("Malthusian parameter closed forms") {
    CHECK(malthusian(ExponentialLaw{1.7}) == Approx(1.7).epsilon(1e-12));
    CHECK(malthusian(DeterministicLaw{2.0}) == Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(malthusian(GammaLaw{2.0, 3.0}) == Approx(3.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("Malthusian parameter solves its equation") {
    std::vector<GenerationTimeLaw> laws;
    for (double x : {0.5, 1.0, 3.0}) {
        laws.push_back(DeterministicLaw{x});
        laws.push_back(ExponentialLaw{x});
        laws.push_back(GammaLaw{x, 2.0});
        laws.push_back(GammaLaw{5.0, x});
        laws.push_back(LogNormalLaw{std::log(x), 0.2});
        laws.push_back(LogNormalLaw{0.0, 0.3 * x});
    }
    for (const auto& law : laws) {
        const double nu = malthusian(law);
        CHECK(nu > 0.0);
        CHECK(std::fabs(2.0 * laplace_transform(law, nu) - 1.0) < 1e-10);
    }
}

TEST_CASE("Harris constant") {
    CHECK(harris_constant(ExponentialLaw{2.0}, 2.0) == Approx(1.0).epsilon(1e-12));
    const double nu = malthusian(DeterministicLaw{1.0});
    CHECK(harris_constant(DeterministicLaw{1.0}, nu) ==
          Approx(1.0 / (2.0 * std::numbers::ln2)).epsilon(1e-12));
    // the form without nu gives lambda instead of one for exponential laws
    CHECK(harris_constant(ExponentialLaw{2.0}, 2.0, HarrisForm::AsPrinted) == Approx(2.0).epsilon(1e-12));
    for (const GenerationTimeLaw& law : {GenerationTimeLaw{GammaLaw{3.0, 2.0}}, GenerationTimeLaw{LogNormalLaw{0.0, 0.4}}}) {
        const double c = harris_constant(law, malthusian(law));
        CHECK(c > 0.5);
        CHECK(c < 1.0);
    }
}

TEST_CASE("trivial simulations") {
    Rng rng(1);
    GenerationModel m;
    m.law = ExponentialLaw{1.0};
    m.p = 0.0;
    m.n0 = 10;
    m.t_end = 3.0;
    for (int i = 0; i < 20; ++i) CHECK(simulate_gm0(m, rng).mutants == 0);

    GenerationModel late;
    late.law = DeterministicLaw{5.0};
    late.p = 1.0;
    late.n0 = 1;
    late.t_end = 4.0;
    const SimulationOutcome o = simulate_gm0(late, rng);
    CHECK(o.mutants == 0);
    CHECK(o.divisions == 0);
    CHECK(o.normal_cells == 1);
}

TEST_CASE("deterministic growth is exact") {
    Rng rng(1);
    GenerationModel m;
    m.law = DeterministicLaw{1.0};
    m.n0 = 3;
    m.t_end = 5.5;
    const SimulationOutcome o = simulate_gm0(m, rng);
    CHECK(o.normal_cells == 3 * 32);
    CHECK(o.divisions == 3 * 31);
}

TEST_CASE("p = 1 turns every division into a mutant clone") {
    Rng rng(4);
    GenerationModel m;
    m.law = DeterministicLaw{1.0};
    m.p = 1.0;
    m.mu = 1e-12;
    m.n0 = 4;
    m.t_end = 10.0;
    const SimulationOutcome o = simulate_gm0(m, rng);
    // each normal cell leaves one normal cell and one mutant per generation
    CHECK(o.normal_cells == 4);
    CHECK(o.mutations == 40);
    CHECK(o.mutants == 40);
}

TEST_CASE("simulation is seed-deterministic") {
    GenerationModel m;
    m.law = GammaLaw{3.0, 3.0};
    m.p = 0.01;
    m.n0 = 20;
    m.t_end = 4.0;
    const auto a = simulate_replicates(m, 30, 77);
    const auto b = simulate_replicates(m, 30, 77);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mutants == b[i].mutants);
        CHECK(a[i].divisions == b[i].divisions);
    }
}

TEST_CASE("budget error carries partial statistics") {
    GenerationModel m;
    m.law = ExponentialLaw{1.0};
    m.n0 = 10;
    m.t_end = 10.0;
    m.max_divisions = 1000;
    Rng rng(2);
    try {
        simulate_gm0(m, rng);
        FAIL("expected SimulationBudgetError");
    } catch (const SimulationBudgetError& e) {
        CHECK(e.partial().divisions == 1001);
        CHECK(e.partial().normal_cells > 0);
    }
}

TEST_CASE("model validation") {
    GenerationModel m;
    m.p = 1.5;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m.p = 0.1;
    m.n0 = 0;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m.n0 = 1;
    m.mu = 0.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("calibration") {
    const Calibration c = theorem1_calibrate(ExponentialLaw{1.0}, 1.0, 2.0, std::log(100.0), 100);
    CHECK(c.p == Approx(2e-4).epsilon(1e-12));
    CHECK_FALSE(c.clipped);
    CHECK(theorem1_calibrate(ExponentialLaw{1.0}, 1.0, 1e-12, 5.0, 10).p < 1e-13);
    const Calibration big = theorem1_calibrate(DeterministicLaw{1.0}, 1.0, 50.0, 1.0, 1);
    CHECK(big.p == 1.0);
    CHECK(big.clipped);
    CHECK_FALSE(big.warnings.empty());
    CHECK_THROWS_AS(theorem1_calibrate(ExponentialLaw{1.0}, 1.0, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("growth ratio of the Yule process") {
    const GrowthRatio g = growth_ratio(ExponentialLaw{1.0}, 6.0, 2000, 3, false);
    CHECK(std::fabs(g.mean - 1.0) < 4.0 * g.std_error);
}

TEST_CASE("lattice growth oscillates at fixed times") {
    // N(t) e^{-nu t} = 2^{-frac(t)} for T = 1
    const GrowthRatio g = growth_ratio(DeterministicLaw{1.0}, 10.25, 2, 1, false);
    CHECK(g.mean == Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
    CHECK(g.std_error == 0.0);
}
