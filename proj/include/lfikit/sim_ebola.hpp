#pragma once

#include <cstdint>
#include <vector>

#include "lfikit/rng.hpp"

namespace lfikit {

// Individual-based epidemic simulator. Progression per individual:
// latent (Gamma(2, 5) days, symptoms appear at a U(0.8, 1.2) multiple of the
// latent duration), then infectious for Gamma(1, 5) days during which each
// time step transmits with probability dt * r0 / mean_infectious, then a
// terminal delay: recovery after Gamma(4, 3) days with probability 0.3,
// death after Gamma(4/9, 9) days otherwise.
struct EbolaConfig {
    double dt = 0.2;              // days per step
    double latent_shape = 2.0, latent_scale = 5.0;
    double infectious_shape = 1.0, infectious_scale = 5.0;
    double mean_infectious = 5.0; // analytic mean of the infectious duration
    double incubation_lo = 0.8, incubation_hi = 1.2;
    double p_recover = 0.3;
    double recover_shape = 4.0, recover_scale = 3.0;
    double death_shape = 4.0 / 9.0, death_scale = 9.0;
    int max_weeks = 104;          // hard simulation horizon
    std::uint32_t max_infected = 100000; // hard epidemic size cap
};

// Daily cumulative counts of symptomatic cases; counts[k] is the count at day
// first_day + k since the index infection. Nondecreasing, first entry >= 1.
struct CaseSeries {
    std::vector<std::int64_t> counts;
    std::int64_t first_day = 0;
};

struct EbolaRun {
    CaseSeries series;
    std::uint64_t n_infected = 0;
    std::uint64_t n_recovered = 0; // resolved as recovered inside the horizon
    std::uint64_t n_perished = 0;
    bool died_out = false; // epidemic ended with no active individuals
};

// Full run to the horizon/size caps. Deterministic given the stream;
// single-threaded.
EbolaRun ebola_simulate_full(const EbolaConfig& cfg, double r0, RngStream rng);

// Convenience: the case series only.
CaseSeries ebola_simulate(const EbolaConfig& cfg, double r0, RngStream rng);

// Observation alignment: re-simulates fresh epidemics (retry cap 1000) until
// the cumulative count first exceeds first_obs_count, then returns the
// n_days-long window starting at that day. Simulator invocations performed
// are added to *calls_out when given. Throws AlignmentFailed if no epidemic
// reaches the threshold with a full window inside the horizon.
std::vector<std::int64_t> align_to_observed(const EbolaConfig& cfg, double r0,
                                            std::int64_t first_obs_count, int n_days,
                                            RngStream rng, int max_retries = 1000,
                                            std::uint64_t* calls_out = nullptr);

// Summary statistic: median slope of the log-transformed daily cumulative
// counts (counts clamped at 1 before the log). Real-valued input so exact
// exponential series act as analytic fixtures.
double ebola_summary(const std::vector<double>& window);

// Serial-interval weights: a Gamma(mean 15, coefficient of variation 0.66)
// discretized to daily masses omega_s = F(s) - F(s-1), s = 1..max_days.
std::vector<double> serial_interval_weights(int max_days);

// Poisson regression log-likelihood of the incident series under the
// discretized serial-interval model: I(t) ~ Poisson(r0 * sum_s w_s I(t-s)),
// evaluated for t = 1..t_exp (index 0 is history). Rates are floored at
// 1e-12 to keep zero-history terms finite.
double team_wer_loglik(const std::vector<std::int64_t>& incidence, double r0,
                       int t_exp, const std::vector<double>& omega);

} // namespace lfikit
