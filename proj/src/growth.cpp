#include "ldstat/growth.hpp"

#include "ldstat/numerics.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

namespace ldstat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

constexpr QuadSpec kLawQuad{1e-14, 1e-12, 2000};

// E[f(S)] for log-normal S, integrating over the standard normal variable.
template <class F>
double lognormal_expectation(const LogNormalLaw& law, F f) {
    const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    return integrate(
        [&](double x) {
            const double s = std::exp(law.mu_log + law.sigma_log * x);
            return inv_sqrt_2pi * std::exp(-0.5 * x * x) * f(s);
        },
        -12.0, 12.0, kLawQuad);
}

// E[S e^{-nu S}].
double weighted_laplace(const GenerationTimeLaw& law, double nu) {
    return std::visit(
        Overloaded{
            [&](const DeterministicLaw& d) { return d.T * std::exp(-nu * d.T); },
            [&](const ExponentialLaw& e) { return e.rate / ((e.rate + nu) * (e.rate + nu)); },
            [&](const GammaLaw& g) {
                return g.shape / g.rate * std::pow(g.rate / (g.rate + nu), g.shape + 1.0);
            },
            [&](const LogNormalLaw& l) {
                return lognormal_expectation(l, [&](double s) { return s * std::exp(-nu * s); });
            },
        },
        law);
}

}  // namespace

void validate(const GenerationTimeLaw& law) {
    std::visit(Overloaded{
                   [](const DeterministicLaw& d) {
                       require(d.T > 0.0 && std::isfinite(d.T), "deterministic T must be > 0");
                   },
                   [](const ExponentialLaw& e) {
                       require(e.rate > 0.0 && std::isfinite(e.rate), "exponential rate must be > 0");
                   },
                   [](const GammaLaw& g) {
                       require(g.shape > 0.0 && g.rate > 0.0 && std::isfinite(g.shape) &&
                                   std::isfinite(g.rate),
                               "gamma shape and rate must be > 0");
                   },
                   [](const LogNormalLaw& l) {
                       require(std::isfinite(l.mu_log) && l.sigma_log > 0.0 &&
                                   std::isfinite(l.sigma_log),
                               "log-normal sigma must be > 0");
                   },
               },
               law);
}

double draw_generation_time(const GenerationTimeLaw& law, Rng& rng) {
    return std::visit(
        Overloaded{
            [](const DeterministicLaw& d) { return d.T; },
            [&](const ExponentialLaw& e) { return -std::log(uniform_open(rng)) / e.rate; },
            [&](const GammaLaw& g) {
                return std::gamma_distribution<double>(g.shape, 1.0 / g.rate)(rng);
            },
            [&](const LogNormalLaw& l) {
                return std::lognormal_distribution<double>(l.mu_log, l.sigma_log)(rng);
            },
        },
        law);
}

std::string describe(const GenerationTimeLaw& law) {
    std::ostringstream os;
    std::visit(Overloaded{
                   [&](const DeterministicLaw& d) { os << "deterministic(T=" << d.T << ")"; },
                   [&](const ExponentialLaw& e) { os << "exponential(rate=" << e.rate << ")"; },
                   [&](const GammaLaw& g) {
                       os << "gamma(shape=" << g.shape << ", rate=" << g.rate << ")";
                   },
                   [&](const LogNormalLaw& l) {
                       os << "lognormal(mu_log=" << l.mu_log << ", sigma_log=" << l.sigma_log
                          << ")";
                   },
               },
               law);
    return os.str();
}

double laplace_transform(const GenerationTimeLaw& law, double nu) {
    validate(law);
    return std::visit(
        Overloaded{
            [&](const DeterministicLaw& d) { return std::exp(-nu * d.T); },
            [&](const ExponentialLaw& e) { return e.rate / (e.rate + nu); },
            [&](const GammaLaw& g) { return std::pow(g.rate / (g.rate + nu), g.shape); },
            [&](const LogNormalLaw& l) {
                return lognormal_expectation(l, [&](double s) { return std::exp(-nu * s); });
            },
        },
        law);
}

double malthusian(const GenerationTimeLaw& law) {
    validate(law);
    if (const auto* d = std::get_if<DeterministicLaw>(&law)) return std::numbers::ln2 / d->T;
    if (const auto* e = std::get_if<ExponentialLaw>(&law)) return e->rate;
    if (const auto* g = std::get_if<GammaLaw>(&law))
        return g->rate * std::expm1(std::numbers::ln2 / g->shape);
    try {
        return find_root([&](double nu) { return 2.0 * laplace_transform(law, nu) - 1.0; },
                         RootSpec{1e-8, 1e4, 1e-13, 400});
    } catch (const BracketError&) {
        throw DomainError("Malthusian parameter of " + describe(law) +
                          " is not bracketed by [1e-8, 1e4]");
    }
}

double harris_constant(const GenerationTimeLaw& law, double nu, HarrisForm form) {
    validate(law);
    require(nu > 0.0, "harris_constant: nu must be positive");
    const double moment = weighted_laplace(law, nu);
    return form == HarrisForm::BellmanHarris ? 1.0 / (4.0 * nu * moment) : 1.0 / (4.0 * moment);
}

void GenerationModel::validate() const {
    ldstat::validate(law);
    require(mu > 0.0 && std::isfinite(mu), "mutant division rate mu must be > 0");
    require(p >= 0.0 && p <= 1.0, "mutation probability p must lie in [0,1]");
    require(n0 >= 1, "initial cell count n0 must be >= 1");
    require(t_end > 0.0 && std::isfinite(t_end), "t_end must be > 0");
    require(max_divisions >= 1, "max_divisions must be >= 1");
}

SimulationOutcome simulate_gm0(const GenerationModel& model, Rng& rng) {
    model.validate();
    struct Event {
        double time;
        std::uint64_t seq;
        bool operator>(const Event& o) const {
            return time > o.time || (time == o.time && seq > o.seq);
        }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> pending;
    std::uint64_t seq = 0;
    SimulationOutcome out;

    const auto schedule = [&](double birth) {
        const double division = birth + draw_generation_time(model.law, rng);
        if (division <= model.t_end)
            pending.push({division, seq++});
        else
            ++out.normal_cells;
    };

    for (std::int64_t i = 0; i < model.n0; ++i) schedule(0.0);
    while (!pending.empty()) {
        const double tau = pending.top().time;
        pending.pop();
        if (++out.divisions > model.max_divisions) {
            out.normal_cells += static_cast<std::int64_t>(pending.size());
            throw SimulationBudgetError("simulation exceeded " +
                                            std::to_string(model.max_divisions) + " divisions",
                                        out);
        }
        if (model.p > 0.0 && uniform_open(rng) < model.p) {
            ++out.mutations;
            out.mutants = saturating_add(
                out.mutants, geometric(std::exp(-model.mu * (model.t_end - tau)), rng));
            schedule(tau);
        } else {
            schedule(tau);
            schedule(tau);
        }
    }
    return out;
}

std::vector<SimulationOutcome> simulate_replicates(const GenerationModel& model,
                                                   std::size_t replicates, std::uint64_t seed) {
    std::vector<SimulationOutcome> out;
    out.reserve(replicates);
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, r));
        out.push_back(simulate_gm0(model, rng));
    }
    return out;
}

double mean_generation_time(const GenerationTimeLaw& law) {
    validate(law);
    return std::visit(
        Overloaded{
            [](const DeterministicLaw& d) { return d.T; },
            [](const ExponentialLaw& e) { return 1.0 / e.rate; },
            [](const GammaLaw& g) { return g.shape / g.rate; },
            [](const LogNormalLaw& l) {
                return std::exp(l.mu_log + 0.5 * l.sigma_log * l.sigma_log);
            },
        },
        law);
}

GrowthRatio growth_ratio(const GenerationTimeLaw& law, double t_end, std::size_t replicates,
                         std::uint64_t seed, bool random_phase, std::int64_t max_divisions) {
    require(replicates >= 2, "growth_ratio needs at least two replicates");
    const double nu = malthusian(law);
    const double window = mean_generation_time(law);
    GenerationModel model;
    model.law = law;
    model.p = 0.0;
    model.n0 = 1;
    model.max_divisions = max_divisions;
    CompensatedSum sum, sum_sq;
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, r));
        model.t_end = random_phase ? t_end + window * uniform_open(rng) : t_end;
        const SimulationOutcome o = simulate_gm0(model, rng);
        const double ratio = static_cast<double>(o.normal_cells) * std::exp(-nu * model.t_end);
        sum += ratio;
        sum_sq += ratio * ratio;
    }
    const auto n = static_cast<double>(replicates);
    GrowthRatio g;
    g.replicates = replicates;
    g.mean = sum.value() / n;
    const double var = std::max(0.0, (sum_sq.value() - n * g.mean * g.mean) / (n - 1.0));
    g.std_error = std::sqrt(var / n);
    return g;
}

Calibration theorem1_calibrate(const GenerationTimeLaw& law, double mu, double alpha,
                               double t_end, std::int64_t n0) {
    require(alpha > 0.0 && std::isfinite(alpha), "target alpha must be > 0");
    require(mu > 0.0, "mutant division rate mu must be > 0");
    require(t_end > 0.0, "t_end must be > 0");
    require(n0 >= 1, "n0 must be >= 1");
    Calibration c;
    c.nu = malthusian(law);
    c.harris = harris_constant(law, c.nu);
    c.p = alpha / (static_cast<double>(n0) * c.harris * std::exp(c.nu * t_end));
    if (c.p > 1.0) {
        c.p = 1.0;
        c.clipped = true;
        c.warnings.push_back("calibrated p exceeded 1 and was clipped; the culture is too small "
                             "for the requested alpha");
    }
    return c;
}

}  // namespace ldstat
