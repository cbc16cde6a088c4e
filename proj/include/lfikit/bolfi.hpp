#pragma once

#include <cstdint>

#include "lfikit/gp.hpp"
#include "lfikit/model.hpp"
#include "lfikit/samples.hpp"

namespace lfikit {

struct BolfiConfig {
    std::size_t n_init = 10;     // initial prior-design evaluations
    std::size_t n_evidence = 0;  // total simulator budget (>= n_init)
    std::size_t update_interval = 1; // refit hyperparams when t % interval == 0
    Eigen::VectorXd acq_noise_var;   // per-dim exploration variance (scalar ok)
    double epsilon_eta = 0.1;        // exploration confidence parameter
    std::size_t n_sample = 1000;     // posterior draws returned
    bool log_discrepancy = false;    // fit the GP to log-transformed targets
    // Total MH steps = (factor * n_sample + 2) / 3, sized so the post-burn-in
    // chain still holds at least n_sample states before trimming.
    std::size_t mh_steps_factor = 4;
};

struct BolfiResult {
    Gp gp;
    Eigen::MatrixXd evidence_x;  // n_evidence x p
    Eigen::VectorXd evidence_d;  // GP targets (transformed if log_discrepancy)
    double h = 0.0;              // min of the posterior mean surface
    Chain chain;                 // n_sample posterior draws
    std::uint64_t simulator_calls = 0;
};

// Exploration weight eta_t^2 = 2 log(t^(d/2 + 2) pi^2 / (3 epsilon_eta)),
// clamped at zero.
double eta_sq(std::size_t t, std::size_t dim, double epsilon_eta);

// Lower confidence bound acquisition value mu(x) - sqrt(eta^2 var(x)).
double acquisition_lcbsc(const Gp& gp, const Eigen::VectorXd& x, std::size_t t,
                         double epsilon_eta);

// Stochastic acquisition: truncated-normal jitter around the acquisition
// minimizer, dimension-wise, truncated to the box.
Eigen::VectorXd propose_next(const Eigen::VectorXd& acq_min,
                             const Eigen::VectorXd& acq_noise_var,
                             const BoundedSpace& space, RngStream& rng);

// log of the surrogate likelihood Phi((h - mu(x)) / sqrt(var(x) + sigma_n2)).
// With zero total variance this degenerates to an indicator.
double surrogate_loglik(const Gp& gp, double h, const Eigen::VectorXd& x);

// Full pipeline: initial design drawn from the prior restricted to the search
// box, sequential lower-confidence-bound acquisitions with periodic
// hyperparameter refits, then Metropolis sampling of the surrogate posterior
// L(theta) p(theta). Spends exactly n_evidence simulator calls.
BolfiResult bolfi_run(const Model& model, const BolfiConfig& cfg, RngStream rng,
                      unsigned workers = 0);

} // namespace lfikit
