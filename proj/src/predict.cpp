#include "lfikit/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lfikit/errors.hpp"
#include "lfikit/optim.hpp"
#include "lfikit/parallel.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

ForecastBands posterior_predictive(const Eigen::MatrixXd& draws,
                                   const Eigen::VectorXd& weights,
                                   const TrajectorySimulator& simulate,
                                   int horizon, int n_traj, RngStream rng,
                                   unsigned workers) {
    if (draws.rows() < 1) throw ConfigError("forecast needs a nonempty posterior");
    if (draws.rows() != weights.size())
        throw ConfigError("forecast: draw/weight length mismatch");
    if (horizon < 1) throw ConfigError("forecast horizon must be >= 1");
    if (n_traj < 1) throw ConfigError("forecast needs >= 1 trajectory");

    const std::size_t h = static_cast<std::size_t>(horizon);
    const std::size_t m = static_cast<std::size_t>(n_traj);
    // traj[k] is written only by task k.
    std::vector<std::vector<double>> traj(m);
    parallel_for(m, resolve_workers(workers), [&](std::size_t k) {
        RngStream stream = rng.child(k);
        std::size_t idx = stream.categorical(weights.data(),
                                             static_cast<std::size_t>(weights.size()));
        std::vector<double> path =
            simulate(draws.row(static_cast<Eigen::Index>(idx)), horizon, stream);
        if (path.size() != h)
            throw ConfigError("forecast trajectory length mismatch");
        traj[k] = std::move(path);
    });

    ForecastBands bands;
    bands.n_trajectories = n_traj;
    bands.t.resize(h);
    bands.median.resize(h);
    bands.lo95.resize(h);
    bands.lo80.resize(h);
    bands.hi80.resize(h);
    bands.hi95.resize(h);
    std::vector<double> column(m);
    for (std::size_t s = 0; s < h; ++s) {
        for (std::size_t k = 0; k < m; ++k) column[k] = traj[k][s];
        std::sort(column.begin(), column.end());
        bands.t[s] = static_cast<double>(s + 1);
        bands.lo95[s] = quantile_sorted(column, 0.025);
        bands.lo80[s] = quantile_sorted(column, 0.10);
        bands.median[s] = quantile_sorted(column, 0.50);
        bands.hi80[s] = quantile_sorted(column, 0.90);
        bands.hi95[s] = quantile_sorted(column, 0.975);
    }
    return bands;
}

double power_utility(double wealth, double gamma) {
    if (!(gamma > 1.0)) throw ConfigError("power utility needs gamma > 1");
    if (!(wealth > 0.0)) throw ConfigError("power utility needs positive wealth");
    return std::pow(wealth, 1.0 - gamma) / (1.0 - gamma);
}

namespace {

double mean_utility(double alpha, const std::vector<double>& returns,
                    const PortfolioConfig& cfg) {
    double acc = 0.0;
    for (double r : returns) {
        double w = cfg.wealth * (alpha * r + (1.0 - alpha) * cfg.rf_gross);
        if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
        acc += power_utility(w, cfg.gamma);
    }
    return acc / static_cast<double>(returns.size());
}

} // namespace

AllocationResult optimal_alpha(const std::vector<double>& risky_gross_returns,
                               const PortfolioConfig& cfg) {
    if (risky_gross_returns.empty())
        throw ConfigError("allocation needs at least one predictive return");
    if (!(cfg.gamma > 1.0)) throw ConfigError("allocation needs gamma > 1");
    if (!(cfg.wealth > 0.0)) throw ConfigError("allocation needs positive wealth");
    if (!(cfg.rf_gross > 0.0))
        throw ConfigError("allocation needs a positive gross risk-free return");
    if (cfg.alpha_grid < 1) throw ConfigError("allocation grid must be >= 1");

    const int g = cfg.alpha_grid;
    double best_alpha = 0.0;
    double best_u = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= g; ++i) {
        double a = static_cast<double>(i) / static_cast<double>(g);
        double u = mean_utility(a, risky_gross_returns, cfg);
        if (u > best_u) { // strict: ties keep the smaller alpha
            best_u = u;
            best_alpha = a;
        }
    }
    if (!std::isfinite(best_u))
        throw ConfigError("allocation infeasible: wealth nonpositive at every alpha");

    double lo = std::max(0.0, best_alpha - 1.0 / g);
    double hi = std::min(1.0, best_alpha + 1.0 / g);
    double refined = golden_section_min(
        [&](double a) { return -mean_utility(a, risky_gross_returns, cfg); }, lo, hi,
        1e-10);
    double refined_u = mean_utility(refined, risky_gross_returns, cfg);

    AllocationResult res;
    if (refined_u > best_u) {
        res.alpha = refined;
        res.expected_utility = refined_u;
    } else {
        res.alpha = best_alpha;
        res.expected_utility = best_u;
    }
    return res;
}

SvParams sv_params_from_vector(const Eigen::VectorXd& theta) {
    if (theta.size() != 4)
        throw ConfigError("volatility parameter vector must have 4 entries");
    SvParams p;
    p.rho = theta[0];
    p.sigma = theta[1];
    p.omega = theta[2];
    p.mu = theta[3];
    return p;
}

std::vector<double> sv_predictive_draws(const Eigen::MatrixXd& draws,
                                        const Eigen::VectorXd& weights,
                                        const std::vector<double>& y_obs, int m_draws,
                                        int n_pf_particles, RngStream rng,
                                        unsigned workers) {
    if (draws.rows() < 1) throw ConfigError("predictive needs a nonempty posterior");
    if (draws.rows() != weights.size())
        throw ConfigError("predictive: draw/weight length mismatch");
    if (m_draws < 1) throw ConfigError("predictive needs >= 1 draw");
    if (y_obs.empty()) throw ConfigError("predictive needs observed returns");

    std::vector<double> gross(static_cast<std::size_t>(m_draws));
    parallel_for(gross.size(), resolve_workers(workers), [&](std::size_t k) {
        RngStream stream = rng.child(k);
        std::size_t idx = stream.categorical(weights.data(),
                                             static_cast<std::size_t>(weights.size()));
        SvParams p = sv_params_from_vector(draws.row(static_cast<Eigen::Index>(idx)));
        PfResult pf = pf_filter(y_obs, p, n_pf_particles, stream.child(0));
        std::size_t j = stream.categorical(pf.terminal_w.data(), pf.terminal_w.size());
        double logv = p.omega + p.rho * std::log(pf.terminal_v[j]);
        if (p.sigma > 0.0) logv += p.sigma * stream.normal01();
        double y_next = p.mu + std::sqrt(std::exp(logv)) * stream.normal01();
        gross[k] = std::exp(y_next);
    });
    return gross;
}

} // namespace lfikit
