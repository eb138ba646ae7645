#include "ldstat/harness.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/lddist.hpp"

#include <cmath>
#include <limits>

namespace ldstat {

EstimateResult estimate(const Sample& sample, Method method, const EstimatorOptions& opts) {
    try {
        switch (method) {
            case Method::GF: return gf_fit(sample, opts.controls).result;
            case Method::ML: return ml_fit(sample, opts.ml);
            case Method::MLWinsor: return ml_fit_winsorized(sample, opts.winsor_bound, opts.ml);
            case Method::P0: return p0_estimate(sample);
        }
    } catch (const Error& e) {
        EstimateResult r;
        r.method = method;
        r.converged = false;
        r.message = e.what();
        r.warnings.push_back(r.message);
        return r;
    }
    throw DomainError("unknown estimation method");
}

Method parse_method(const std::string& name) {
    if (name == "gf" || name == "GF") return Method::GF;
    if (name == "ml" || name == "ML") return Method::ML;
    if (name == "ml-winsor" || name == "ML_WINSOR") return Method::MLWinsor;
    if (name == "p0" || name == "P0") return Method::P0;
    throw DomainError("unknown method '" + name + "' (expected gf, ml, ml-winsor or p0)");
}

Sample harness_sample(const HarnessConfig& config, std::size_t cell, std::size_t replicate) {
    const auto& [alpha, rho] = config.grid.at(cell);
    Rng rng(derive_seed(derive_seed(config.seed, cell), replicate));
    return ld_sample(alpha, Fitness(rho), config.sample_size, rng);
}

std::vector<HarnessRow> run_mse_harness(const HarnessConfig& config) {
    if (config.grid.empty()) throw DomainError("MSE harness needs a non-empty grid");
    if (config.replicates == 0) throw DomainError("MSE harness needs at least one replicate");
    if (config.methods.empty()) throw DomainError("MSE harness needs at least one method");
    std::vector<HarnessRow> rows;
    for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
        const auto [alpha, rho] = config.grid[cell];
        HarnessRow row{alpha, rho, {}};
        std::vector<CompensatedSum> sq_a(config.methods.size()), sq_r(config.methods.size()),
            sum_a(config.methods.size()), sum_r(config.methods.size());
        for (Method m : config.methods) row.methods.push_back(MethodSummary{m});
        for (std::size_t r = 0; r < config.replicates; ++r) {
            const Sample sample = harness_sample(config, cell, r);
            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                const EstimateResult est = estimate(sample, config.methods[m], config.estimator);
                MethodSummary& s = row.methods[m];
                if (!est.converged || !std::isfinite(est.alpha_hat)) {
                    ++s.failures;
                    continue;
                }
                ++s.successes;
                sq_a[m] += (est.alpha_hat - alpha) * (est.alpha_hat - alpha);
                sum_a[m] += est.alpha_hat;
                if (est.has_rho) {
                    sq_r[m] += (est.rho_hat - rho) * (est.rho_hat - rho);
                    sum_r[m] += est.rho_hat;
                }
            }
        }
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            MethodSummary& s = row.methods[m];
            const double nan = std::numeric_limits<double>::quiet_NaN();
            const auto k = static_cast<double>(s.successes);
            const bool rho_available = config.methods[m] != Method::P0;
            s.mse_alpha = s.successes ? sq_a[m].value() / k : nan;
            s.mean_alpha = s.successes ? sum_a[m].value() / k : nan;
            s.mse_rho = (s.successes && rho_available) ? sq_r[m].value() / k : nan;
            s.mean_rho = (s.successes && rho_available) ? sum_r[m].value() / k : nan;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_harness_csv(std::ostream& out, const std::vector<HarnessRow>& rows) {
    const auto num = [&](double x) -> std::ostream& {
        if (std::isnan(x))
            out << "NA";
        else
            out << x;
        return out;
    };
    const auto flags = out.flags();
    const auto precision = out.precision(6);
    out << "alpha,rho,method,replicates,successes,failures,mse_alpha,mse_rho,mean_alpha,mean_rho\n";
    for (const HarnessRow& row : rows) {
        for (const MethodSummary& s : row.methods) {
            out << row.alpha << ',' << row.rho << ',' << method_name(s.method) << ','
                << s.successes + s.failures << ',' << s.successes << ',' << s.failures << ',';
            num(s.mse_alpha) << ',';
            num(s.mse_rho) << ',';
            num(s.mean_alpha) << ',';
            num(s.mean_rho) << '\n';
        }
    }
    out.flags(flags);
    out.precision(precision);
}

}  // namespace ldstat
