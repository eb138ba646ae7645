#include "ldstat/cli.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/gf.hpp"
#include "ldstat/goodness_of_fit.hpp"
#include "ldstat/growth.hpp"
#include "ldstat/harness.hpp"
#include "ldstat/lddist.hpp"
#include "ldstat/ml.hpp"
#include "ldstat/wald.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace ldstat::cli {

namespace {

using nlohmann::json;

// Serialised reals keep 12 significant digits.
double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json real(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round12(x);
}

struct FitOptions {
    std::string input;
    std::string method = "gf";
    GFControls controls;
    std::int64_t winsor_bound = 500;
    double level = 0.95;
    std::optional<double> total_cells;
    bool test_rho1 = false;
    std::string format = "json";
};

struct SampleOptions {
    double alpha = 1.0;
    double rho = 1.0;
    std::size_t size = 100;
    std::uint64_t seed = 1;
    std::string output;
};

struct HistOptions {
    std::string input;
    bool linear = false;
};

struct MseOptions {
    std::vector<double> alphas{1.0};
    std::vector<double> rhos{1.0};
    std::size_t replicates = 1000;
    std::size_t size = 100;
    std::vector<std::string> methods{"gf"};
    std::uint64_t seed = 1;
    GFControls controls;
    std::int64_t winsor_bound = 500;
};

struct SimulateOptions {
    std::string law = "exponential";
    double rate = 1.0;
    double T = 1.0;
    double shape = 2.0;
    double mu_log = 0.0;
    double sigma_log = 0.25;
    double mu = 1.0;
    std::optional<double> p;
    std::optional<double> alpha;
    std::int64_t n0 = 100;
    double t_end = 1.0;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    std::int64_t max_divisions = 10'000'000;
    bool random_phase = false;
    bool tv = false;
    std::string output;
    std::string summary;
};

class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InputError("cannot write '" + path + "'", 0);
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void add_controls(CLI::App* cmd, GFControls& c) {
    cmd->add_option("--z1", c.z1, "first GF control point")->capture_default_str();
    cmd->add_option("--z2", c.z2, "second GF control point")->capture_default_str();
    cmd->add_option("--z3", c.z3, "control point of the alpha estimate")->capture_default_str();
    cmd->add_option("--q", c.q, "quantile level of the rescaling factor")->capture_default_str();
}

json estimate_json(const EstimateResult& r, std::size_t n) {
    json j;
    j["method"] = std::string(method_name(r.method));
    j["n"] = n;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["alpha_hat"] = real(r.alpha_hat);
    j["rho_hat"] = r.has_rho ? real(r.rho_hat) : json(nullptr);
    j["cov"] = r.has_rho ? json::array({real(r.cov[0][0]), real(r.cov[0][1]), real(r.cov[1][0]),
                                        real(r.cov[1][1])})
                         : json::array({real(r.cov[0][0]), nullptr, nullptr, nullptr});
    j["warnings"] = r.warnings;
    return j;
}

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    Sample sample = [&] {
        if (o.input.empty() || o.input == "-") return read_sample(std::cin);
        return read_sample_file(o.input);
    }();
    const Method method = parse_method(o.method);
    if (!(o.level > 0.0 && o.level < 1.0)) throw InputError("--level must lie in (0,1)", 0);
    if (o.total_cells && !(*o.total_cells > 0.0))
        throw InputError("--total-cells must be positive", 0);
    o.controls.validate();

    EstimateResult result;
    std::optional<GFDiagnostics> diagnostics;
    std::string failure;
    try {
        switch (method) {
            case Method::GF: {
                GFFit fit = gf_fit(sample, o.controls);
                result = fit.result;
                diagnostics = fit.diagnostics;
                break;
            }
            case Method::ML: result = ml_fit(sample); break;
            case Method::MLWinsor: result = ml_fit_winsorized(sample, o.winsor_bound); break;
            case Method::P0: result = p0_estimate(sample); break;
        }
        if (!result.converged) failure = result.message;
    } catch (const GFError& e) {
        failure = e.what();
        diagnostics = e.diagnostics();
    } catch (const EstimationError& e) {
        failure = e.what();
    }

    json j;
    if (!failure.empty()) {
        j["method"] = std::string(method_name(method));
        j["n"] = sample.size();
        j["converged"] = false;
        j["error"] = failure;
        if (result.warnings.size()) j["warnings"] = result.warnings;
    } else {
        j = estimate_json(result, sample.size());
        j["level"] = o.level;
        std::optional<NullHypothesis> null;
        if (o.test_rho1 && result.has_rho) null = NullHypothesis{std::nullopt, 1.0};
        const WaldInference inf = wald_inference(result, o.level, null);
        j["ci_alpha"] = {real(inf.alpha.lo), real(inf.alpha.hi)};
        j["ci_rho"] = inf.rho ? json{real(inf.rho->lo), real(inf.rho->hi)} : json(nullptr);
        if (inf.region) {
            const Ellipse& e = *inf.region;
            j["ellipse"] = {{"center", {real(e.center[0]), real(e.center[1])}},
                            {"semi_axes", {real(e.semi_axes[0]), real(e.semi_axes[1])}},
                            {"axes",
                             {{real(e.axes[0][0]), real(e.axes[1][0])},
                              {real(e.axes[0][1]), real(e.axes[1][1])}}},
                            {"chi2_quantile", real(e.radius2)}};
        }
        if (o.test_rho1) {
            if (inf.p_value)
                j["p_value_rho1"] = real(*inf.p_value);
            else
                j["p_value_rho1"] = nullptr;
        }
        if (o.total_cells) {
            const double N = *o.total_cells;
            j["total_cells"] = N;
            j["mutation_probability"] = real(result.alpha_hat / N);
            j["ci_mutation_probability"] = {real(inf.alpha.lo / N), real(inf.alpha.hi / N)};
        }
    }
    if (diagnostics) {
        const GFDiagnostics& d = *diagnostics;
        j["diagnostics"] = {{"b", real(d.b)},
                            {"z_eff", {real(d.z_eff[0]), real(d.z_eff[1]), real(d.z_eff[2])}},
                            {"g_hat", {real(d.g_hat[0]), real(d.g_hat[1]), real(d.g_hat[2])}},
                            {"y_hat", real(d.y_hat)}};
    }

    if (o.format == "csv") {
        const auto cell = [](const json& v) -> std::string {
            return v.is_null() ? "NA" : v.dump();
        };
        out << "method,n,converged,alpha_hat,rho_hat,cov_aa,cov_ar,cov_ra,cov_rr,ci_alpha_lo,"
               "ci_alpha_hi,ci_rho_lo,ci_rho_hi\n";
        out << j["method"].get<std::string>() << ',' << sample.size() << ','
            << (failure.empty() ? "true" : "false");
        if (failure.empty()) {
            out << ',' << cell(j["alpha_hat"]) << ',' << cell(j["rho_hat"]);
            for (const auto& c : j["cov"]) out << ',' << cell(c);
            out << ',' << cell(j["ci_alpha"][0]) << ',' << cell(j["ci_alpha"][1]);
            if (j["ci_rho"].is_null())
                out << ",NA,NA";
            else
                out << ',' << cell(j["ci_rho"][0]) << ',' << cell(j["ci_rho"][1]);
        } else {
            out << std::string(10, ',').replace(0, 10, ",NA,NA,NA,NA,NA,NA,NA,NA,NA,NA");
        }
        out << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    if (!failure.empty()) {
        err << "estimation failed: " << failure << '\n';
        return kEstimationFailure;
    }
    return kSuccess;
}

int cmd_sample(const SampleOptions& o, std::ostream& out) {
    if (!(o.alpha >= 0.0) || !std::isfinite(o.alpha)) throw InputError("--alpha must be >= 0", 0);
    if (!(o.rho > 0.0)) throw InputError("--rho must be > 0", 0);
    if (o.size < 1) throw InputError("--size must be >= 1", 0);
    Rng rng(o.seed);
    const Sample s = ld_sample(o.alpha, Fitness(o.rho), o.size, rng);
    OutputFile file(o.output, out);
    std::ostream& os = file.get();
    for (std::int64_t x : s.counts()) os << x << '\n';
    return kSuccess;
}

int cmd_hist(const HistOptions& o, std::ostream& out) {
    const Sample s = (o.input.empty() || o.input == "-") ? read_sample(std::cin)
                                                           : read_sample_file(o.input);
    if (o.linear) {
        if (s.max() > 1'000'000) throw InputError("--linear histogram limited to max 1e6", 0);
        out << "value,count\n";
        for (std::int64_t v = 0; v <= s.max(); ++v) out << v << ',' << s.count_of(v) << '\n';
        return kSuccess;
    }
    // Decade classes [10^n, 10^{n+1}); the zero row holds X = 0.
    std::vector<std::int64_t> classes;
    std::int64_t zeros = 0;
    for (const auto& [value, mult] : s.frequencies()) {
        if (value == 0) {
            zeros += mult;
            continue;
        }
        std::size_t n = 0;
        for (std::int64_t v = value; v >= 10; v /= 10) ++n;
        if (classes.size() <= n) classes.resize(n + 1, 0);
        classes[n] += mult;
    }
    out << "class,lower,upper,count\n";
    out << "zero,0,0," << zeros << '\n';
    for (std::size_t n = 0; n < classes.size(); ++n)
        out << n << ",1e" << n << ",1e" << n + 1 << ',' << classes[n] << '\n';
    return kSuccess;
}

int cmd_mse(const MseOptions& o, std::ostream& out) {
    HarnessConfig config;
    for (double a : o.alphas)
        for (double r : o.rhos) {
            if (!(a > 0.0) || !(r > 0.0)) throw InputError("grid values must be positive", 0);
            config.grid.emplace_back(a, r);
        }
    if (o.replicates < 1) throw InputError("--replicates must be >= 1", 0);
    if (o.size < 1) throw InputError("--size must be >= 1", 0);
    config.replicates = o.replicates;
    config.sample_size = o.size;
    config.seed = o.seed;
    config.methods.clear();
    for (const auto& m : o.methods) config.methods.push_back(parse_method(m));
    o.controls.validate();
    config.estimator.controls = o.controls;
    config.estimator.winsor_bound = o.winsor_bound;
    write_harness_csv(out, run_mse_harness(config));
    return kSuccess;
}

GenerationTimeLaw make_law(const SimulateOptions& o) {
    if (o.law == "exponential") return ExponentialLaw{o.rate};
    if (o.law == "deterministic") return DeterministicLaw{o.T};
    if (o.law == "gamma") return GammaLaw{o.shape, o.rate};
    if (o.law == "lognormal") return LogNormalLaw{o.mu_log, o.sigma_log};
    throw InputError("unknown --law '" + o.law + "'", 0);
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    GenerationModel model;
    model.law = make_law(o);
    model.mu = o.mu;
    model.n0 = o.n0;
    model.t_end = o.t_end;
    model.max_divisions = o.max_divisions;
    if (o.p && o.alpha) throw InputError("give either --p or --alpha, not both", 0);
    json summary;
    const double nu = malthusian(model.law);
    const double harris = harris_constant(model.law, nu);
    std::vector<std::string> warnings;
    std::optional<double> alpha;
    if (o.alpha) {
        const Calibration c = theorem1_calibrate(model.law, o.mu, *o.alpha, o.t_end, o.n0);
        model.p = c.p;
        alpha = *o.alpha;
        warnings = c.warnings;
    } else {
        model.p = o.p.value_or(0.0);
        if (model.p > 0.0)
            alpha = model.p * static_cast<double>(o.n0) * harris * std::exp(nu * o.t_end);
    }
    model.validate();
    if (o.replicates < 1) throw InputError("--replicates must be >= 1", 0);

    OutputFile file(o.output, out);
    std::ostream& os = file.get();
    const double window = mean_generation_time(model.law);
    std::vector<std::int64_t> counts;
    std::size_t failures = 0;
    CompensatedSum mutations, population_ratio;
    for (std::size_t r = 0; r < o.replicates; ++r) {
        Rng rng(derive_seed(o.seed, r));
        GenerationModel m = model;
        if (o.random_phase) m.t_end = o.t_end + window * uniform_open(rng);
        try {
            const SimulationOutcome s = simulate_gm0(m, rng);
            os << s.mutants << '\n';
            counts.push_back(s.mutants);
            mutations += static_cast<double>(s.mutations);
            population_ratio += static_cast<double>(s.normal_cells + s.mutants) /
                                (static_cast<double>(m.n0) * std::exp(nu * m.t_end));
        } catch (const SimulationBudgetError& e) {
            ++failures;
            os << "# replicate " << r << ": " << e.what() << '\n';
        }
    }
    const auto done = static_cast<double>(counts.size());
    summary["law"] = describe(model.law);
    summary["replicates"] = o.replicates;
    summary["failures"] = failures;
    summary["nu"] = real(nu);
    summary["rho"] = real(nu / o.mu);
    summary["harris_constant"] = real(harris);
    summary["p"] = real(model.p);
    summary["alpha"] = alpha ? real(*alpha) : json(nullptr);
    summary["mean_mutations"] = done > 0 ? real(mutations.value() / done) : json(nullptr);
    summary["mean_population_ratio"] =
        done > 0 ? real(population_ratio.value() / done) : json(nullptr);
    summary["warnings"] = warnings;
    if (o.tv && alpha && !counts.empty()) {
        const PmfTable table = ld_pmf_table(LDParams(*alpha, nu / o.mu), 200);
        summary["tv_distance"] = real(total_variation(counts, table, 200));
    }
    if (o.summary.empty()) {
        err << summary.dump(2) << '\n';
    } else {
        std::ofstream s(o.summary);
        if (!s) throw InputError("cannot write '" + o.summary + "'", 0);
        s << summary.dump(2) << '\n';
    }
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Luria-Delbrueck fluctuation analysis: sampling, estimation and simulation"};
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "estimate (alpha, rho) from a file of mutant counts");
    fit_cmd->add_option("input,--input", fit.input, "count file ('-' for stdin)");
    fit_cmd->add_option("--method", fit.method, "gf | ml | ml-winsor | p0")->capture_default_str();
    add_controls(fit_cmd, fit.controls);
    fit_cmd->add_option("--winsor-bound", fit.winsor_bound, "Winsorization bound")
        ->capture_default_str();
    fit_cmd->add_option("--level", fit.level, "confidence level")->capture_default_str();
    fit_cmd->add_option("--total-cells", fit.total_cells,
                        "final number of cells; reports alpha / N as mutation probability");
    fit_cmd->add_flag("--test-rho1", fit.test_rho1, "Wald p-value for the null rho = 1");
    fit_cmd->add_option("--format", fit.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SampleOptions smp;
    auto* sample_cmd = app.add_subcommand("sample", "draw a sample of LD(alpha, rho)");
    sample_cmd->add_option("--alpha", smp.alpha, "expected number of mutations")->required();
    sample_cmd->add_option("--rho", smp.rho, "relative fitness")->required();
    sample_cmd->add_option("--size", smp.size, "sample size")->capture_default_str();
    sample_cmd->add_option("--seed", smp.seed, "random seed")->capture_default_str();
    sample_cmd->add_option("--output,-o", smp.output, "output file (default stdout)");

    HistOptions hist;
    auto* hist_cmd = app.add_subcommand("hist", "decade histogram of a count file");
    hist_cmd->add_option("input,--input", hist.input, "count file ('-' for stdin)");
    hist_cmd->add_flag("--linear,!--log10", hist.linear,
                       "one class per value instead of decade classes");

    MseOptions mse;
    auto* mse_cmd = app.add_subcommand("mse", "Monte Carlo mean squared errors of the estimators");
    mse_cmd->add_option("--alpha", mse.alphas, "alpha grid")->delimiter(',');
    mse_cmd->add_option("--rho", mse.rhos, "rho grid")->delimiter(',');
    mse_cmd->add_option("--replicates", mse.replicates, "samples per cell")->capture_default_str();
    mse_cmd->add_option("--size", mse.size, "sample size")->capture_default_str();
    mse_cmd->add_option("--methods,--method", mse.methods, "gf,ml,ml-winsor,p0")->delimiter(',');
    mse_cmd->add_option("--seed", mse.seed, "random seed")->capture_default_str();
    mse_cmd->add_option("--winsor-bound", mse.winsor_bound, "Winsorization bound")
        ->capture_default_str();
    add_controls(mse_cmd, mse.controls);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate G/M/0 cultures");
    sim_cmd->add_option("--law", sim.law, "exponential | deterministic | gamma | lognormal")
        ->capture_default_str();
    sim_cmd->add_option("--rate", sim.rate, "rate of the exponential/gamma law")
        ->capture_default_str();
    sim_cmd->add_option("--T", sim.T, "deterministic generation time")->capture_default_str();
    sim_cmd->add_option("--shape", sim.shape, "gamma shape")->capture_default_str();
    sim_cmd->add_option("--mu-log", sim.mu_log, "log-normal location")->capture_default_str();
    sim_cmd->add_option("--sigma-log", sim.sigma_log, "log-normal scale")->capture_default_str();
    sim_cmd->add_option("--mu", sim.mu, "mutant division rate")->capture_default_str();
    sim_cmd->add_option("--p", sim.p, "mutation probability per division");
    sim_cmd->add_option("--alpha", sim.alpha, "calibrate p to this expected mutation count");
    sim_cmd->add_option("--n0", sim.n0, "initial normal cells")->capture_default_str();
    sim_cmd->add_option("--t-end", sim.t_end, "observation time")->capture_default_str();
    sim_cmd->add_option("--replicates", sim.replicates, "cultures")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    sim_cmd->add_option("--max-divisions", sim.max_divisions, "division budget per culture")
        ->capture_default_str();
    sim_cmd->add_flag("--random-phase", sim.random_phase,
                      "observe each culture at t uniform in [t_end, t_end + mean generation time)");
    sim_cmd->add_flag("--tv", sim.tv, "report the TV distance to LD(alpha, nu/mu)");
    sim_cmd->add_option("--output,-o", sim.output, "count file (default stdout)");
    sim_cmd->add_option("--summary", sim.summary, "summary JSON file (default stderr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out, err);
        if (*sample_cmd) return cmd_sample(smp, out);
        if (*hist_cmd) return cmd_hist(hist, out);
        if (*mse_cmd) return cmd_mse(mse, out);
        if (*sim_cmd) return cmd_simulate(sim, out, err);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kEstimationFailure;
    }
    return kInputError;
}

}  // namespace ldstat::cli
