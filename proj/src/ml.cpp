#include "ldstat/ml.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/gf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ldstat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_budget(const Sample& sample, const TableBudget& budget) {
    if (static_cast<std::uint64_t>(sample.max()) + 1 > budget.max_entries)
        throw BudgetError("sample maximum " + std::to_string(sample.max()) +
                          " exceeds the likelihood table budget of " +
                          std::to_string(budget.max_entries) +
                          " entries; use the GF estimator instead");
}

bool inside_domain(double alpha, double rho) {
    return alpha > 0.0 && rho > 0.0 && std::isfinite(alpha) && std::isfinite(rho);
}

EstimateResult failure(Method method, std::string message) {
    EstimateResult r;
    r.method = method;
    r.converged = false;
    r.message = std::move(message);
    return r;
}

}  // namespace

DerivativeRecursion::DerivativeRecursion(const LDParams& params, std::size_t capacity,
                                         bool second_order)
    : alpha_(params.alpha()),
      second_order_(second_order),
      yule_(yule_tables(params.fitness(), capacity)) {
    weighted_.resize(capacity + 1);
    for (std::size_t i = 0; i <= capacity; ++i) weighted_[i] = static_cast<double>(i) * yule_.p[i];
    const double q0 = std::exp(-alpha_);
    q_ = {q0};
    qa_ = {-q0};
    qr_ = {0.0};
    if (second_order_) {
        qaa_ = {q0};
        qar_ = {0.0};
        qrr_ = {0.0};
    }
}

void DerivativeRecursion::extend_to(std::size_t K) {
    if (K + 1 > weighted_.size())
        throw BudgetError("derivative recursion extended beyond its capacity");
    const double* p = yule_.p.data();
    const double* dp = yule_.dp.data();
    const double* d2p = yule_.d2p.data();
    const double* w = weighted_.data();
    q_.reserve(K + 1);
    qa_.reserve(K + 1);
    qr_.reserve(K + 1);
    if (second_order_) {
        qaa_.reserve(K + 1);
        qar_.reserve(K + 1);
        qrr_.reserve(K + 1);
    }
    for (std::size_t k = q_.size(); k <= K; ++k) {
        CompensatedSum s_wq, s_pq, s_dpq;
        if (!second_order_) {
            for (std::size_t h = 1; h <= k; ++h) {
                const double qk = q_[k - h];
                s_wq += w[h] * qk;
                s_pq += p[h] * qk;
                s_dpq += dp[h] * qk;
            }
        } else {
            CompensatedSum s_pqa, s_dpqa, s_d2pq, s_dpqr;
            for (std::size_t h = 1; h <= k; ++h) {
                const double qk = q_[k - h];
                const double qak = qa_[k - h];
                s_wq += w[h] * qk;
                s_pq += p[h] * qk;
                s_dpq += dp[h] * qk;
                s_pqa += p[h] * qak;
                s_dpqa += dp[h] * qak;
                s_d2pq += d2p[h] * qk;
                s_dpqr += dp[h] * qr_[k - h];
            }
            const double qk = alpha_ / static_cast<double>(k) * s_wq.value();
            const double qak = s_pq.value() - qk;
            qaa_.push_back(s_pqa.value() - qak);
            qar_.push_back(s_dpq.value() + alpha_ * s_dpqa.value());
            qrr_.push_back(alpha_ * (s_d2pq.value() + s_dpqr.value()));
        }
        const double qk = alpha_ / static_cast<double>(k) * s_wq.value();
        q_.push_back(qk);
        qa_.push_back(s_pq.value() - qk);
        qr_.push_back(alpha_ * s_dpq.value());
    }
}

double ld_loglik(const Sample& sample, const LDParams& params, const TableBudget& budget) {
    check_budget(sample, budget);
    const PmfTable table = ld_pmf_table(params, static_cast<std::size_t>(sample.max()), budget);
    CompensatedSum ll;
    for (const auto& [value, mult] : sample.frequencies()) {
        const double qj = table.q[static_cast<std::size_t>(value)];
        if (!(qj > 0.0)) return kNegInf;
        ll += static_cast<double>(mult) * std::log(qj);
    }
    return ll.value();
}

LogLikDerivatives ld_loglik_derivatives(const Sample& sample, const LDParams& params,
                                        const TableBudget& budget) {
    check_budget(sample, budget);
    const auto M = static_cast<std::size_t>(sample.max());
    DerivativeRecursion rec(params, M);
    rec.extend_to(M);
    CompensatedSum ll, sa, sr, haa, har, hrr;
    for (const auto& [value, mult] : sample.frequencies()) {
        const auto j = static_cast<std::size_t>(value);
        const double c = static_cast<double>(mult);
        const double qj = rec.q()[j];
        if (!(qj > 0.0)) {
            LogLikDerivatives out;
            out.loglik = kNegInf;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            out.score = {nan, nan};
            out.hessian = {{{nan, nan}, {nan, nan}}};
            return out;
        }
        const double ga = rec.dq_dalpha()[j] / qj;
        const double gr = rec.dq_drho()[j] / qj;
        ll += c * std::log(qj);
        sa += c * ga;
        sr += c * gr;
        haa += c * (rec.d2q_dalpha2()[j] / qj - ga * ga);
        har += c * (rec.d2q_dalpha_drho()[j] / qj - ga * gr);
        hrr += c * (rec.d2q_drho2()[j] / qj - gr * gr);
    }
    LogLikDerivatives out;
    out.loglik = ll.value();
    out.score = {sa.value(), sr.value()};
    out.hessian = {{{haa.value(), har.value()}, {har.value(), hrr.value()}}};
    return out;
}

Vector2 ld_score(const Sample& sample, const LDParams& params, const TableBudget& budget) {
    return ld_loglik_derivatives(sample, params, budget).score;
}

Matrix2 ld_hessian(const Sample& sample, const LDParams& params, const TableBudget& budget) {
    return ld_loglik_derivatives(sample, params, budget).hessian;
}

EstimateResult ml_fit(const Sample& sample, const LDParams& init, const MLOptions& opts) {
    if (sample.max() == 0) {
        EstimateResult r = failure(Method::ML,
                                   "all counts are zero: the likelihood -n alpha has no interior "
                                   "maximum and rho is not identifiable");
        r.alpha_hat = 0.0;
        r.has_rho = false;
        r.warnings.push_back("alpha_hat at boundary 0; rho unidentifiable");
        return r;
    }
    try {
        check_budget(sample, opts.budget);
    } catch (const BudgetError& e) {
        return failure(Method::ML, e.what());
    }

    double alpha = init.alpha();
    double rho = init.rho();
    EstimateResult result;
    result.method = Method::ML;

    LogLikDerivatives cur = ld_loglik_derivatives(sample, LDParams(alpha, rho), opts.budget);
    if (!std::isfinite(cur.loglik)) {
        result.message = "log-likelihood is -infinity at the initial point (q_j underflow)";
        result.warnings.push_back(result.message);
        return result;
    }

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        result.iterations = iter;
        const Matrix2& H = cur.hessian;
        const Vector2& D = cur.score;
        Matrix2 neg{{{-H[0][0], -H[0][1]}, {-H[1][0], -H[1][1]}}};
        const SymmetricEigen eig = symmetric_eigen(neg);
        if (!(eig.values[0] > 0.0)) {
            // Not a local maximum model: shift to the nearest positive definite curvature.
            const double shift = -eig.values[0] + 1e-6 * std::max(1.0, std::fabs(eig.values[1]));
            neg[0][0] += shift;
            neg[1][1] += shift;
        }
        Vector2 step;
        try {
            const Matrix2 inv = inverse(neg);
            step = {inv[0][0] * D[0] + inv[0][1] * D[1], inv[1][0] * D[0] + inv[1][1] * D[1]};
        } catch (const DomainError&) {
            result.message = "singular Hessian during Newton iteration";
            break;
        }
        const double step_norm = std::hypot(step[0], step[1]);
        if (!std::isfinite(step_norm)) {
            result.message = "non-finite Newton step";
            break;
        }

        bool accepted = false;
        double scale = 1.0;
        for (int halving = 0; halving <= opts.max_halvings; ++halving, scale *= 0.5) {
            const double a_try = alpha + scale * step[0];
            const double r_try = rho + scale * step[1];
            if (!inside_domain(a_try, r_try)) continue;
            const double ll_try = ld_loglik(sample, LDParams(a_try, r_try), opts.budget);
            if (ll_try >= cur.loglik) {
                alpha = a_try;
                rho = r_try;
                accepted = true;
                break;
            }
        }

        const double tol = opts.step_tol * (1.0 + std::hypot(alpha, rho));
        if (!accepted) {
            // No trial improved l: the step is below the rounding floor of l or the
            // iteration is stuck.
            if (step_norm < 1e3 * tol) {
                result.converged = true;
            } else {
                result.message = "line search failed to increase the log-likelihood";
            }
            break;
        }
        cur = ld_loglik_derivatives(sample, LDParams(alpha, rho), opts.budget);
        if (scale * step_norm < tol) {
            result.converged = true;
            break;
        }
    }
    if (!result.converged && result.message.empty())
        result.message = "Newton iteration did not converge within " +
                         std::to_string(opts.max_iter) + " iterations";

    result.alpha_hat = alpha;
    result.rho_hat = rho;
    if (result.converged) {
        const Matrix2& H = cur.hessian;
        const Matrix2 observed{{{-H[0][0], -0.5 * (H[0][1] + H[1][0])},
                                {-0.5 * (H[0][1] + H[1][0]), -H[1][1]}}};
        if (symmetric_eigen(observed).values[0] > 0.0) {
            result.cov = inverse(observed);
            result.cov[1][0] = result.cov[0][1];
        } else {
            result.converged = false;
            result.message = "observed information is not positive definite at the optimum";
        }
    }
    if (!result.converged) result.warnings.push_back(result.message);
    return result;
}

EstimateResult ml_fit(const Sample& sample, const MLOptions& opts) {
    if (sample.max() == 0) return ml_fit(sample, LDParams(1.0, 1.0), opts);
    double alpha0 = 0.0, rho0 = 1.0;
    std::string note;
    try {
        const GFFit gf = gf_fit(sample);
        alpha0 = gf.result.alpha_hat;
        rho0 = gf.result.rho_hat;
    } catch (const Error& e) {
        note = std::string("GF initialisation failed (") + e.what() + "); ";
    }
    if (!inside_domain(alpha0, rho0)) {
        const auto n = static_cast<double>(sample.size());
        const auto zeros = static_cast<double>(sample.zeros());
        alpha0 = zeros > 0.0 ? std::max(-std::log(zeros / n), 0.05) : std::log(n) + 1.0;
        rho0 = 1.0;
        note += "initialised at p0 estimate with rho = 1";
    }
    EstimateResult r = ml_fit(sample, LDParams(alpha0, rho0), opts);
    if (!note.empty()) r.warnings.insert(r.warnings.begin(), note);
    return r;
}

Winsorized winsorize(const Sample& sample, std::int64_t bound) {
    if (bound < 1) throw DomainError("Winsorization bound must be at least 1");
    std::vector<std::int64_t> counts(sample.counts().begin(), sample.counts().end());
    std::size_t clipped = 0;
    for (auto& x : counts) {
        if (x > bound) {
            x = bound;
            ++clipped;
        }
    }
    return Winsorized{Sample(std::move(counts)), clipped};
}

EstimateResult ml_fit_winsorized(const Sample& sample, std::int64_t bound, const MLOptions& opts) {
    const Winsorized w = winsorize(sample, bound);
    EstimateResult r = ml_fit(w.sample, opts);
    r.method = Method::MLWinsor;
    if (w.clipped > 0)
        r.warnings.push_back(std::to_string(w.clipped) + " value(s) clipped at " +
                             std::to_string(bound));
    return r;
}

FisherInfo fisher_info(const LDParams& params, double rel_tol, std::size_t window,
                       std::size_t max_terms) {
    if (!(rel_tol > 0.0)) throw DomainError("fisher_info: rel_tol must be positive");
    if (window == 0 || max_terms == 0) throw DomainError("fisher_info: empty window or budget");
    DerivativeRecursion rec(params, max_terms - 1, false);
    CompensatedSum saa, sar, srr;
    FisherInfo out;
    std::size_t next = 0;
    Matrix2 previous{};
    while (next < max_terms) {
        const std::size_t last = std::min(next + window, max_terms) - 1;
        rec.extend_to(last);
        for (std::size_t k = next; k <= last; ++k) {
            const double qk = rec.q()[k];
            if (!(qk > 0.0)) continue;
            const double a = rec.dq_dalpha()[k];
            const double r = rec.dq_drho()[k];
            saa += a * a / qk;
            sar += a * r / qk;
            srr += r * r / qk;
        }
        next = last + 1;
        out.info = {{{saa.value(), sar.value()}, {sar.value(), srr.value()}}};
        out.terms = next;
        const double d00 = out.info[0][0] - previous[0][0];
        const double d01 = out.info[0][1] - previous[0][1];
        const double d11 = out.info[1][1] - previous[1][1];
        const double increment = std::sqrt(d00 * d00 + 2 * d01 * d01 + d11 * d11);
        const double norm = std::sqrt(out.info[0][0] * out.info[0][0] +
                                      2 * out.info[0][1] * out.info[0][1] +
                                      out.info[1][1] * out.info[1][1]);
        out.last_relative_increment = norm > 0.0 ? increment / norm : 0.0;
        previous = out.info;
        if (out.terms > window && out.last_relative_increment < rel_tol) return out;
    }
    out.conservative = true;
    return out;
}

}  // namespace ldstat
