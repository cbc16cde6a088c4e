#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lfikit/rng.hpp"

namespace lfikit {

// Posterior draws with importance weights. Weights are kept normalized
// (sum 1) whenever the producing algorithm guarantees it.
struct WeightedSample {
    Eigen::MatrixXd draws;     // n x p
    Eigen::VectorXd weights;   // n
    Eigen::VectorXd distances; // n (accepted discrepancies; empty if n/a)
    std::uint64_t simulator_calls = 0;
};

// MCMC output. draws holds only post-burn-in states.
struct Chain {
    Eigen::MatrixXd draws;      // n_kept x p
    Eigen::VectorXd log_target; // n_kept
    double acceptance_rate = 0.0; // post burn-in
    std::size_t burn_in = 0;      // discarded leading states
    std::size_t thinning = 1;
    double final_scale = 0.0;     // proposal scale frozen at burn-in end
    bool adaptation_frozen = false;
};

// One generation of an importance-weighted particle system. kernel_cov is the
// perturbation covariance attached to this population, i.e. twice its own
// weighted covariance; proposals drawn *from* this population use it.
struct ParticlePopulation {
    Eigen::MatrixXd particles; // n x p
    Eigen::VectorXd weights;   // n, normalized
    Eigen::VectorXd distances; // n
    Eigen::MatrixXd kernel_cov;
};

double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& w);

// Weighted quantile: linear interpolation of the piecewise-linear inverse CDF
// through the cumulative-weight midpoints (S_i - w_i/2); clamped to the data
// range outside the midpoints.
double weighted_quantile(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double q);

// Narrowest interval holding at least `mass` posterior mass: sliding window
// over sorted draws (cumulative weight for weighted input), earliest window
// on width ties.
std::pair<double, double> hpd_interval(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& w, double mass);

// Draw n indices from a weighted sample (weights need not be normalized).
std::vector<std::size_t> resample_indices(const Eigen::VectorXd& weights, std::size_t n,
                                          RngStream& rng);

} // namespace lfikit
