#pragma once

#include "ldstat/errors.hpp"
#include "ldstat/random.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ldstat {

struct DeterministicLaw {
    double T;
};
struct ExponentialLaw {
    double rate;
};
struct GammaLaw {
    double shape;
    double rate;
};
struct LogNormalLaw {
    double mu_log;
    double sigma_log;
};

/// Generation-time distribution G of normal cells.
using GenerationTimeLaw = std::variant<DeterministicLaw, ExponentialLaw, GammaLaw, LogNormalLaw>;

void validate(const GenerationTimeLaw& law);
double draw_generation_time(const GenerationTimeLaw& law, Rng& rng);
std::string describe(const GenerationTimeLaw& law);

/// E[e^{-nu S}] for S ~ G.
double laplace_transform(const GenerationTimeLaw& law, double nu);

/// Malthusian parameter: the root nu > 0 of 2 E[e^{-nu S}] = 1.
/// Throws DomainError when the root is not bracketed by [1e-8, 1e4].
double malthusian(const GenerationTimeLaw& law);

enum class HarrisForm {
    /// C = (4 nu E[S e^{-nu S}])^{-1}; gives C = 1 for exponential laws.
    BellmanHarris,
    /// C = (4 E[S e^{-nu S}])^{-1}, kept for comparison only.
    AsPrinted,
};

/// Limit of E[N(t)] e^{-nu t} for a binary-splitting population started
/// from one newborn cell.
double harris_constant(const GenerationTimeLaw& law, double nu,
                       HarrisForm form = HarrisForm::BellmanHarris);

/// G/M/0 culture: normal cells with generation law G, each division yielding
/// one mutant with probability p; mutants split at rate mu.
struct GenerationModel {
    GenerationTimeLaw law = ExponentialLaw{1.0};
    double mu = 1.0;
    double p = 0.0;
    std::int64_t n0 = 1;
    double t_end = 1.0;
    std::int64_t max_divisions = 10'000'000;

    void validate() const;
};

struct SimulationOutcome {
    std::int64_t mutants = 0;
    std::int64_t normal_cells = 0;
    std::int64_t mutations = 0;
    std::int64_t divisions = 0;
};

class SimulationBudgetError : public BudgetError {
public:
    SimulationBudgetError(const std::string& what, SimulationOutcome partial)
        : BudgetError(what), partial_(partial) {}
    const SimulationOutcome& partial() const noexcept { return partial_; }

private:
    SimulationOutcome partial_;
};

/// Event-driven run up to t_end. Normal divisions are processed in time order
/// (ties in insertion order); each mutant clone is resolved by its size at t_end,
/// geometric with parameter e^{-mu (t_end - birth)}.
SimulationOutcome simulate_gm0(const GenerationModel& model, Rng& rng);

/// Replicate r runs on the stream derive_seed(seed, r).
std::vector<SimulationOutcome> simulate_replicates(const GenerationModel& model,
                                                   std::size_t replicates, std::uint64_t seed);

struct GrowthRatio {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
};

/// Mean of N(t) e^{-nu t} over mutation-free populations started from one
/// newborn cell. With `random_phase`, each replicate observes at t drawn
/// uniformly from [t_end, t_end + mean generation time), which averages out the
/// periodic oscillation of lattice (deterministic) laws.
GrowthRatio growth_ratio(const GenerationTimeLaw& law, double t_end, std::size_t replicates,
                         std::uint64_t seed, bool random_phase,
                         std::int64_t max_divisions = 10'000'000);

double mean_generation_time(const GenerationTimeLaw& law);

struct Calibration {
    double p = 0.0;
    double nu = 0.0;
    double harris = 0.0;
    bool clipped = false;
    std::vector<std::string> warnings;
};

/// Mutation probability p with p n0 C e^{nu t_end} = alpha, clipped to [0, 1].
Calibration theorem1_calibrate(const GenerationTimeLaw& law, double mu, double alpha,
                               double t_end, std::int64_t n0);

}  // namespace ldstat
