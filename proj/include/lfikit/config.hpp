#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lfikit {

// Fully resolved experiment description: file values merged over the
// study-and-method default tables, every field concrete. Built only by
// load_config/parse_config, which validate strictly (unknown keys, type
// mismatches, and inconsistent blocks are ConfigError).
struct ExperimentConfig {
    std::string study;  // toy | ebola | supernova | sv-portfolio
    std::string method; // rejection | nn-rejection | pmc | bolfi
    std::uint64_t seed = 0;
    unsigned workers = 0; // 0: resolve from environment/hardware
    std::filesystem::path output_dir = ".";

    struct Rejection {
        std::size_t n_accept = 0;
        double epsilon = 0.0;
        std::uint64_t max_attempts = 10'000'000;
    } rejection;

    struct NnRejection {
        std::size_t n_total = 0;
        double fraction = 0.0;
    } nn_rejection;

    struct Pmc {
        std::size_t n_particles = 0;
        std::vector<double> epsilons; // explicit schedule; empty = adaptive
        double epsilon1 = 0.0;
        double quantile = 0.5;
        std::size_t n_iterations = 0;
        std::uint64_t max_attempts_per_particle = 10'000'000;
    } pmc;

    struct Bolfi {
        std::size_t n_init = 0;
        std::size_t n_evidence = 0;
        std::size_t update_interval = 1;
        double acq_noise_var = 0.1;
        double epsilon_eta = 0.1;
        std::size_t n_sample = 1000;
        bool log_discrepancy = false;
    } bolfi;

    struct Toy {
        double y_obs = 0.0;
    } toy;

    struct Ebola {
        std::uint64_t obs_seed = 1;
        double true_r0 = 1.7;
        std::int64_t obs_start_count = 49; // observed window starts past this count
        int n_obs_days = 9;
        int forecast_horizon = 28;
        int n_forecast_traj = 500;
    } ebola;

    struct Supernova {
        std::uint64_t obs_seed = 1;
        double true_omega_m = 0.3;
        double true_w0 = -1.0;
        double h0 = 0.7;
        int n_sn = 400;
        int n_bins = 20;
        double z_lo = 0.5, z_hi = 1.0;
        double noise_loc = -0.1, noise_scale = 0.3, noise_shape = 5.0;
    } supernova;

    struct SvPortfolio {
        std::uint64_t obs_seed = 1;
        int n_obs = 324;
        double true_rho = 0.90;
        double true_sigma = 0.25;
        double true_omega = -0.644;
        double true_mu = 0.005;
        int m_predictive = 2000;
        int n_pf_particles = 500;
        double gamma = 4.0;
        double rf_log = 0.003; // per-period risk-free log return
        double wealth = 0.207;
    } sv_portfolio;
};

// Parses and validates a config document (JSON text). Throws ConfigError on
// any schema violation.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical serialization of the experiment identity: resolved values,
// sorted keys, with execution details (workers, output_dir) excluded so the
// hash is stable across machines and worker counts.
std::string canonical_config_json(const ExperimentConfig& cfg);

} // namespace lfikit
