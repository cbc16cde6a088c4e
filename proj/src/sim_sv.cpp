#include "lfikit/sim_sv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "lfikit/errors.hpp"
#include "lfikit/optim.hpp"
#include "lfikit/space.hpp"

namespace lfikit {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;

void check_params(const SvParams& p) {
    if (!(std::abs(p.rho) < 1.0))
        throw ConfigError("volatility model needs |rho| < 1");
    if (!(p.sigma >= 0.0))
        throw ConfigError("volatility model needs sigma >= 0");
}

double stationary_logv(const SvParams& p, RngStream& rng) {
    double mean = p.omega / (1.0 - p.rho);
    if (p.sigma == 0.0) return mean;
    double sd = p.sigma / std::sqrt(1.0 - p.rho * p.rho);
    return mean + sd * rng.normal01();
}

} // namespace

SvPath sv_simulate_path(const SvParams& p, int n, RngStream rng) {
    check_params(p);
    if (n < 1) throw ConfigError("volatility model needs n >= 1");
    SvPath path;
    path.y.resize(static_cast<std::size_t>(n));
    path.v.resize(static_cast<std::size_t>(n));
    double logv = stationary_logv(p, rng);
    for (int t = 0; t < n; ++t) {
        logv = p.omega + p.rho * logv + p.sigma * rng.normal01();
        double v = std::exp(logv);
        path.v[static_cast<std::size_t>(t)] = v;
        path.y[static_cast<std::size_t>(t)] = p.mu + std::sqrt(v) * rng.normal01();
    }
    return path;
}

std::vector<double> sv_simulate(const SvParams& p, int n, RngStream rng) {
    return sv_simulate_path(p, n, std::move(rng)).y;
}

namespace {

// Negative average GARCH(1,1)-normal log-likelihood on standardized data.
// x = (mu, omega, alpha, beta); alpha + beta > 0.999 is projected back onto
// the constraint before evaluating, keeping the surface finite everywhere.
double garch_negloglik(const Eigen::VectorXd& x, const std::vector<double>& z,
                       double h1) {
    double mu = x[0], omega = x[1], alpha = x[2], beta = x[3];
    double ab = alpha + beta;
    if (ab > 0.999) {
        alpha *= 0.999 / ab;
        beta *= 0.999 / ab;
    }
    double h = h1;
    double nll = 0.0;
    for (std::size_t t = 0; t < z.size(); ++t) {
        if (t > 0) {
            double d = z[t - 1] - mu;
            h = omega + alpha * d * d + beta * h;
        }
        if (!(h > 0.0)) return std::numeric_limits<double>::max();
        double r = z[t] - mu;
        nll += 0.5 * (kLog2Pi + std::log(h) + r * r / h);
    }
    return nll / static_cast<double>(z.size());
}

} // namespace

GarchSummary garch_summary(const std::vector<double>& y) {
    if (y.size() < 50)
        throw ConfigError("auxiliary GARCH fit needs at least 50 observations");
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= (n - 1.0);

    GarchSummary s;
    s.mean = mean;
    s.var = var;
    if (!(var > 0.0)) {
        // Constant series: degenerate but well-defined boundary summary.
        s.mu_g = mean;
        s.omega_g = 0.0;
        s.alpha_g = 0.0;
        s.beta_g = 0.0;
        s.converged = false;
        return s;
    }

    const double sd = std::sqrt(var);
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = (y[i] - mean) / sd;
    // Standardized scale: sample variance of z is exactly 1.
    const double h1 = 1.0;

    auto objective = [&z, h1](const Eigen::VectorXd& x) {
        return garch_negloglik(x, z, h1);
    };

    Eigen::VectorXd lo(4), hi(4);
    lo << -5.0, 1e-8, 0.0, 0.0;
    hi << 5.0, 10.0, 0.999, 0.999;
    BoundedSpace box(lo, hi);

    NelderMeadOptions opts;
    opts.max_evals = 600;
    opts.x_tol = 1e-9;
    opts.f_tol = 1e-12;

    const double starts[3][4] = {
        {0.0, 0.10, 0.05, 0.85},
        {0.0, 0.50, 0.10, 0.40},
        {0.0, 0.95, 0.02, 0.02},
    };
    OptimResult best;
    best.value = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    for (const auto& st : starts) {
        Eigen::VectorXd x0(4);
        x0 << st[0], st[1], st[2], st[3];
        OptimResult r = nelder_mead(objective, x0, box, opts);
        if (r.value < best.value) {
            best = r;
            any_converged = r.evals < opts.max_evals;
        }
    }

    double mu = best.x[0], omega = best.x[1], alpha = best.x[2], beta = best.x[3];
    double ab = alpha + beta;
    if (ab > 0.999) {
        alpha *= 0.999 / ab;
        beta *= 0.999 / ab;
    }
    // Undo the standardization: y = mean + sd * z.
    s.mu_g = mean + sd * mu;
    s.omega_g = var * omega;
    s.alpha_g = alpha;
    s.beta_g = beta;
    s.converged = any_converged;
    return s;
}

PfResult pf_filter(const std::vector<double>& y, const SvParams& p,
                   int n_particles, RngStream rng) {
    check_params(p);
    if (y.empty()) throw ConfigError("particle filter needs at least one observation");
    if (n_particles < 1) throw ConfigError("particle filter needs >= 1 particle");
    const std::size_t m = static_cast<std::size_t>(n_particles);

    std::vector<double> logv(m), logv_next(m), logw(m), w(m);
    for (std::size_t j = 0; j < m; ++j) logv[j] = stationary_logv(p, rng);

    PfResult res;
    for (std::size_t t = 0; t < y.size(); ++t) {
        // Propagate, then weight by the observation density.
        for (std::size_t j = 0; j < m; ++j) {
            double lv = p.omega + p.rho * logv[j];
            if (p.sigma > 0.0) lv += p.sigma * rng.normal01();
            logv_next[j] = lv;
            double r = y[t] - p.mu;
            logw[j] = -0.5 * (kLog2Pi + lv + r * r / std::exp(lv));
        }
        double mx = -std::numeric_limits<double>::infinity();
        for (double lw : logw) mx = std::max(mx, lw);
        if (!std::isfinite(mx))
            throw ParticleCollapse(
                "particle filter: every weight underflowed at step " +
                    std::to_string(t + 1),
                static_cast<int>(t + 1));
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            w[j] = std::exp(logw[j] - mx);
            sum += w[j];
        }
        res.loglik += mx + std::log(sum / static_cast<double>(m));

        if (t + 1 == y.size()) {
            res.terminal_v.resize(m);
            res.terminal_w.resize(m);
            for (std::size_t j = 0; j < m; ++j) {
                res.terminal_v[j] = std::exp(logv_next[j]);
                res.terminal_w[j] = w[j] / sum;
            }
            break;
        }

        // Multinomial resample into the next generation. Inverse-CDF lookup
        // on the running sum; equivalent to m categorical draws but
        // O(m log m) instead of O(m^2).
        std::vector<double> cum(m);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += w[j];
            cum[j] = acc;
        }
        for (std::size_t j = 0; j < m; ++j) {
            double u = rng.uniform01() * acc;
            std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            logv[j] = logv_next[idx < m ? idx : m - 1];
        }
    }
    return res;
}

} // namespace lfikit
