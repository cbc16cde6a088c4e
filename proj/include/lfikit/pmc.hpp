#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lfikit/model.hpp"
#include "lfikit/samples.hpp"

namespace lfikit {

struct PmcConfig {
    std::size_t n_particles = 0;
    // Explicit tolerance schedule; if empty, the schedule is adaptive:
    // epsilon1 for the first generation, then the `quantile`-quantile of the
    // previous generation's accepted discrepancies.
    std::vector<double> epsilons;
    double epsilon1 = 0.0;
    double quantile = 0.5;
    std::size_t n_iterations = 0; // adaptive mode only
    std::uint64_t max_attempts_per_particle = 10'000'000;
};

struct PmcResult {
    ParticlePopulation population; // final generation
    std::vector<double> epsilon_used;
    std::vector<std::uint64_t> calls_per_iteration;
    std::uint64_t simulator_calls = 0;
    bool stopped_early = false; // adaptive tolerance failed to decrease
};

// Twice the weighted covariance is the population-monte-carlo perturbation
// kernel; this returns the plain weighted covariance (1/N-style: weights
// normalized, no small-sample correction). diag_floor, when given, bounds
// each diagonal entry from below (degenerate-population guard).
Eigen::MatrixXd weighted_covariance(const Eigen::MatrixXd& particles,
                                    const Eigen::VectorXd& weights,
                                    const Eigen::VectorXd& diag_floor = {});

// Unnormalized importance weight of a fresh particle proposed from `prev`:
// prior density over the mixture kernel density
//   sum_K W_K phi(kernel_cov^{-1/2} (theta - theta_K))
// with phi the standard multivariate normal density (constant Jacobian
// dropped; it cancels in normalization).
double pmc_weight(const Eigen::VectorXd& theta, const ParticlePopulation& prev,
                  const Prior& prior);

// Next tolerance: the q-quantile of the accepted discrepancies, interpolated
// at rank 1 + q (n - 1).
double adaptive_next_epsilon(const Eigen::VectorXd& distances, double q);

// One generation: resample-perturb-simulate until n_particles acceptances at
// tolerance eps, then importance-reweight. Particle J uses rng.child(J);
// out-of-support proposals are rejected before simulating.
ParticlePopulation pmc_step(const Model& model, const ParticlePopulation& prev,
                            double eps, RngStream rng,
                            std::uint64_t max_attempts, unsigned workers,
                            std::uint64_t* calls_out = nullptr);

PmcResult abc_pmc(const Model& model, const PmcConfig& cfg, RngStream rng,
                  unsigned workers = 0);

} // namespace lfikit
