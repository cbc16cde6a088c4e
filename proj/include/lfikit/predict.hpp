#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "lfikit/rng.hpp"
#include "lfikit/sim_sv.hpp"

namespace lfikit {

// Pointwise forecast envelope: per-horizon-step median plus central 80% and
// 95% intervals over simulated trajectories. Intervals nest by construction.
struct ForecastBands {
    std::vector<double> t; // forecast step, 1-based
    std::vector<double> median, lo95, lo80, hi80, hi95;
    int n_trajectories = 0;
};

// Simulates one forward trajectory of `horizon` values for a parameter draw.
using TrajectorySimulator = std::function<std::vector<double>(
    const Eigen::VectorXd& theta, int horizon, RngStream& rng)>;

// Resamples posterior draws by weight, simulates n_traj trajectories, and
// reduces them to pointwise quantile bands. Trajectory k uses rng.child(k),
// so results do not depend on the worker count.
ForecastBands posterior_predictive(const Eigen::MatrixXd& draws,
                                   const Eigen::VectorXd& weights,
                                   const TrajectorySimulator& simulate,
                                   int horizon, int n_traj, RngStream rng,
                                   unsigned workers = 0);

// Power utility W^(1-gamma) / (1-gamma); gamma > 1, W > 0.
double power_utility(double wealth, double gamma);

struct PortfolioConfig {
    double gamma = 4.0;     // risk aversion, > 1
    double rf_gross = 1.0;  // gross risk-free return per period
    double wealth = 1.0;    // current wealth W_n, > 0
    int alpha_grid = 1000;  // grid resolution for the allocation search
};

struct AllocationResult {
    double alpha = 0.0;            // risky-asset fraction in [0, 1]
    double expected_utility = 0.0; // Monte Carlo average utility at alpha
};

// Maximizes mean power utility of W_n (alpha R + (1-alpha) rf) over the
// allocation grid {0, 1/G, ..., 1}, then refines the best bracket by
// golden-section search. Ties break toward the smaller alpha.
AllocationResult optimal_alpha(const std::vector<double>& risky_gross_returns,
                               const PortfolioConfig& cfg);

// Approximate one-step-ahead predictive for the volatility model: for each of
// M draws, pick theta from the weighted posterior sample, condition on the
// observed series through a bootstrap particle filter, advance the volatility
// recursion one step, and emit the gross return exp(y_{n+1}).
// Posterior draw columns follow the study convention (rho, sigma, omega, mu).
std::vector<double> sv_predictive_draws(const Eigen::MatrixXd& draws,
                                        const Eigen::VectorXd& weights,
                                        const std::vector<double>& y_obs, int m_draws,
                                        int n_pf_particles, RngStream rng,
                                        unsigned workers = 0);

// Column convention shared by the volatility study and its predictive layer.
SvParams sv_params_from_vector(const Eigen::VectorXd& theta);

} // namespace lfikit
