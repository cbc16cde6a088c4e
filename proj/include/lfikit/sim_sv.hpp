#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lfikit/rng.hpp"

namespace lfikit {

// Log-volatility AR(1) return model:
//   y_t = mu + sqrt(V_t) eps_t,   ln V_t = omega + rho ln V_{t-1} + sigma v_t,
// eps_t, v_t iid standard normal, ln V_0 from the stationary distribution
// N(omega/(1-rho), sigma^2/(1-rho^2)). sigma = 0 degenerates to deterministic
// volatility and is allowed; |rho| < 1 is required.
struct SvParams {
    double mu = 0.0;
    double omega = 0.0;
    double rho = 0.0;
    double sigma = 0.0;
};

struct SvPath {
    std::vector<double> y; // returns y_1..y_n
    std::vector<double> v; // variances V_1..V_n
};

SvPath sv_simulate_path(const SvParams& p, int n, RngStream rng);
std::vector<double> sv_simulate(const SvParams& p, int n, RngStream rng);

// Auxiliary-model summary: constrained quasi-MLE of a GARCH(1,1) with normal
// errors (conditional variance h_t = omega_g + alpha_g (y_{t-1}-mu_g)^2 +
// beta_g h_{t-1}, h_1 = sample variance), plus the sample mean and variance.
// The fit runs on internally standardized data with a fixed deterministic
// search schedule, so equal inputs give equal summaries and rescaled inputs
// give equivariantly rescaled fits.
struct GarchSummary {
    double omega_g = 0.0;
    double alpha_g = 0.0;
    double beta_g = 0.0;
    double mu_g = 0.0;
    double mean = 0.0;
    double var = 0.0;
    bool converged = true; // false: tolerance not reached, boundary solution
    std::array<double, 6> vec() const { return {omega_g, alpha_g, beta_g, mu_g, mean, var}; }
};

// Requires at least 50 observations (shorter series make the auxiliary fit
// meaningless); throws ConfigError below that.
GarchSummary garch_summary(const std::vector<double>& y);

// Bootstrap particle filter for the model above: multinomial resampling every
// step, log-space weights. Returns the log-likelihood estimate and the
// terminal V_n cloud with its normalized weights (taken before the final
// resample). Throws ParticleCollapse when every particle weight underflows.
struct PfResult {
    double loglik = 0.0;
    std::vector<double> terminal_v;
    std::vector<double> terminal_w; // normalized
};

PfResult pf_filter(const std::vector<double>& y, const SvParams& p,
                   int n_particles, RngStream rng);

} // namespace lfikit
