#include "lfikit/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include <json.hpp>

#include "lfikit/bolfi.hpp"
#include "lfikit/csv.hpp"
#include "lfikit/distance.hpp"
#include "lfikit/errors.hpp"
#include "lfikit/parallel.hpp"
#include "lfikit/pmc.hpp"
#include "lfikit/predict.hpp"
#include "lfikit/prior.hpp"
#include "lfikit/rejection.hpp"
#include "lfikit/samples.hpp"
#include "lfikit/sim_ebola.hpp"
#include "lfikit/sim_supernova.hpp"
#include "lfikit/sim_sv.hpp"
#include "lfikit/version.hpp"

namespace lfikit {

namespace {

using nlohmann::json;

Eigen::VectorXd scalar_vec(double v) {
    Eigen::VectorXd x(1);
    x[0] = v;
    return x;
}

std::vector<double> to_doubles(const std::vector<std::int64_t>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

Model build_toy(const ExperimentConfig& cfg) {
    Model m;
    m.prior = Prior({dist::Normal{0.0, 1.0}});
    m.space = BoundedSpace(scalar_vec(-3.0), scalar_vec(3.0));
    m.param_names = {"theta"};
    const double y_obs = cfg.toy.y_obs;
    m.discrepancy = [y_obs](const Eigen::VectorXd& theta, RngStream& rng) {
        double y_sim = theta[0] + rng.normal01();
        return std::abs(y_sim - y_obs);
    };
    return m;
}

Model build_ebola(const ExperimentConfig& cfg) {
    EbolaConfig sim_cfg;
    RngStream obs_rng(cfg.ebola.obs_seed);
    std::vector<std::int64_t> obs_window =
        align_to_observed(sim_cfg, cfg.ebola.true_r0, cfg.ebola.obs_start_count,
                          cfg.ebola.n_obs_days, obs_rng);
    const double s_obs = ebola_summary(to_doubles(obs_window));
    const std::int64_t first_obs = obs_window.front();
    const int n_days = cfg.ebola.n_obs_days;

    Model m;
    m.prior = Prior({dist::TruncatedNormal{1.7, 0.5, 1.05, 4.0}});
    m.space = BoundedSpace(scalar_vec(1.05), scalar_vec(4.0));
    m.param_names = {"r0"};
    DistanceFn dist = DistanceFn::log_euclidean();
    m.discrepancy = [sim_cfg, first_obs, n_days, s_obs,
                     dist](const Eigen::VectorXd& theta, RngStream& rng) {
        std::vector<std::int64_t> window =
            align_to_observed(sim_cfg, theta[0], first_obs, n_days, rng);
        double s_sim = ebola_summary(to_doubles(window));
        return dist(scalar_vec(s_sim), scalar_vec(s_obs));
    };
    return m;
}

SupernovaDesign sn_design(const ExperimentConfig& cfg) {
    SupernovaDesign d;
    d.n_sn = cfg.supernova.n_sn;
    d.n_bins = cfg.supernova.n_bins;
    d.z_lo = cfg.supernova.z_lo;
    d.z_hi = cfg.supernova.z_hi;
    return d;
}

SkewNormalNoise sn_noise(const ExperimentConfig& cfg) {
    SkewNormalNoise n;
    n.loc = cfg.supernova.noise_loc;
    n.scale = cfg.supernova.noise_scale;
    n.shape = cfg.supernova.noise_shape;
    return n;
}

SupernovaDataset sn_observed(const ExperimentConfig& cfg) {
    SupernovaParams truth;
    truth.omega_m = cfg.supernova.true_omega_m;
    truth.w0 = cfg.supernova.true_w0;
    truth.h0 = cfg.supernova.h0;
    return supernova_simulate(truth, sn_design(cfg), sn_noise(cfg),
                              RngStream(cfg.supernova.obs_seed));
}

Model build_supernova(const ExperimentConfig& cfg) {
    SupernovaDataset obs = sn_observed(cfg);
    SupernovaDesign design = sn_design(cfg);
    SkewNormalNoise noise = sn_noise(cfg);
    const double h0 = cfg.supernova.h0;

    Eigen::VectorXd obs_mu(obs.mu.size());
    Eigen::VectorXd obs_w(obs.sigma.size());
    for (std::size_t i = 0; i < obs.mu.size(); ++i) {
        obs_mu[static_cast<Eigen::Index>(i)] = obs.mu[i];
        obs_w[static_cast<Eigen::Index>(i)] = obs.sigma[i];
    }
    DistanceFn dist = DistanceFn::weighted_squared(obs_w);

    Model m;
    m.prior = Prior({dist::Normal{0.3, 0.5}, dist::Normal{-1.0, 0.5}});
    Eigen::VectorXd lo(2), hi(2);
    lo << 0.01, -3.0;
    hi << 0.99, 0.0;
    m.space = BoundedSpace(lo, hi);
    m.param_names = {"omega_m", "w0"};
    m.discrepancy = [design, noise, h0, obs_mu,
                     dist](const Eigen::VectorXd& theta, RngStream& rng) {
        SupernovaParams p;
        p.omega_m = theta[0];
        p.w0 = theta[1];
        p.h0 = h0;
        try {
            SupernovaDataset sim = supernova_simulate(p, design, noise, rng);
            Eigen::VectorXd sim_mu(sim.mu.size());
            for (std::size_t i = 0; i < sim.mu.size(); ++i)
                sim_mu[static_cast<Eigen::Index>(i)] = sim.mu[i];
            return dist(sim_mu, obs_mu);
        } catch (const UnphysicalParams&) {
            // The expansion history breaks down at this point; infinitely far
            // from the data is the faithful discrepancy.
            return std::numeric_limits<double>::infinity();
        }
    };
    return m;
}

SvParams sv_truth(const ExperimentConfig& cfg) {
    SvParams p;
    p.rho = cfg.sv_portfolio.true_rho;
    p.sigma = cfg.sv_portfolio.true_sigma;
    p.omega = cfg.sv_portfolio.true_omega;
    p.mu = cfg.sv_portfolio.true_mu;
    return p;
}

std::vector<double> sv_observed(const ExperimentConfig& cfg) {
    return sv_simulate(sv_truth(cfg), cfg.sv_portfolio.n_obs,
                       RngStream(cfg.sv_portfolio.obs_seed));
}

Eigen::VectorXd garch_vec(const GarchSummary& s) {
    auto a = s.vec();
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i];
    return v;
}

Model build_sv(const ExperimentConfig& cfg) {
    std::vector<double> obs = sv_observed(cfg);
    const Eigen::VectorXd s_obs = garch_vec(garch_summary(obs));
    const int n = cfg.sv_portfolio.n_obs;
    DistanceFn dist = DistanceFn::euclidean();

    Model m;
    // Parameter order (rho, sigma, omega, mu) -- shared with the predictive
    // layer's sv_params_from_vector.
    m.prior = Prior({dist::Uniform{-0.99, 0.99}, dist::Uniform{0.01, 2.0},
                     dist::Uniform{-2.0, 2.0}, dist::Uniform{-1.0, 1.0}});
    Eigen::VectorXd lo(4), hi(4);
    lo << -0.99, 0.01, -2.0, -1.0;
    hi << 0.99, 2.0, 2.0, 1.0;
    m.space = BoundedSpace(lo, hi);
    m.param_names = {"rho", "sigma", "omega", "mu"};
    m.discrepancy = [n, s_obs, dist](const Eigen::VectorXd& theta, RngStream& rng) {
        SvParams p = sv_params_from_vector(theta);
        std::vector<double> y = sv_simulate(p, n, rng.child(0));
        return dist(garch_vec(garch_summary(y)), s_obs);
    };
    return m;
}

} // namespace

Model build_model(const ExperimentConfig& cfg) {
    if (cfg.study == "toy") return build_toy(cfg);
    if (cfg.study == "ebola") return build_ebola(cfg);
    if (cfg.study == "supernova") return build_supernova(cfg);
    return build_sv(cfg);
}

RunArtifacts run_inference(const ExperimentConfig& cfg, const Model& model) {
    RngStream root(cfg.seed);
    RngStream method_rng = root.child(0);
    RunArtifacts art;

    if (cfg.method == "rejection") {
        WeightedSample ws =
            rejection_abc(model, cfg.rejection.n_accept, cfg.rejection.epsilon,
                          method_rng, cfg.rejection.max_attempts, cfg.workers);
        art.draws = std::move(ws.draws);
        art.weights = std::move(ws.weights);
        art.simulator_calls = ws.simulator_calls;
    } else if (cfg.method == "nn-rejection") {
        WeightedSample ws = nn_rejection(model, cfg.nn_rejection.n_total,
                                         cfg.nn_rejection.fraction, method_rng,
                                         cfg.workers);
        art.draws = std::move(ws.draws);
        art.weights = std::move(ws.weights);
        art.simulator_calls = ws.simulator_calls;
    } else if (cfg.method == "pmc") {
        PmcConfig pc;
        pc.n_particles = cfg.pmc.n_particles;
        pc.epsilons = cfg.pmc.epsilons;
        pc.epsilon1 = cfg.pmc.epsilon1;
        pc.quantile = cfg.pmc.quantile;
        pc.n_iterations = cfg.pmc.n_iterations;
        pc.max_attempts_per_particle = cfg.pmc.max_attempts_per_particle;
        PmcResult res = abc_pmc(model, pc, method_rng, cfg.workers);
        art.draws = std::move(res.population.particles);
        art.weights = std::move(res.population.weights);
        art.simulator_calls = res.simulator_calls;
        art.epsilon_schedule = std::move(res.epsilon_used);
        art.stopped_early = res.stopped_early;
    } else {
        BolfiConfig bc;
        bc.n_init = cfg.bolfi.n_init;
        bc.n_evidence = cfg.bolfi.n_evidence;
        bc.update_interval = cfg.bolfi.update_interval;
        bc.acq_noise_var =
            Eigen::VectorXd::Constant(model.dim(), cfg.bolfi.acq_noise_var);
        bc.epsilon_eta = cfg.bolfi.epsilon_eta;
        bc.n_sample = cfg.bolfi.n_sample;
        bc.log_discrepancy = cfg.bolfi.log_discrepancy;
        BolfiResult res = bolfi_run(model, bc, method_rng, cfg.workers);
        art.draws = std::move(res.chain.draws);
        art.weights = Eigen::VectorXd::Constant(
            art.draws.rows(), 1.0 / static_cast<double>(art.draws.rows()));
        art.simulator_calls = res.simulator_calls;
    }
    return art;
}

std::string summary_json(const ExperimentConfig& cfg, const RunArtifacts& art,
                         const std::vector<std::string>& param_names) {
    json j;
    j["study"] = cfg.study;
    j["method"] = cfg.method;
    j["seed"] = cfg.seed;
    j["n_draws"] = static_cast<std::uint64_t>(art.draws.rows());
    j["simulator_calls"] = art.simulator_calls;
    json params = json::object();
    for (Eigen::Index p = 0; p < art.draws.cols(); ++p) {
        Eigen::VectorXd col = art.draws.col(p);
        auto hpd = hpd_interval(col, art.weights, 0.90);
        json stats;
        stats["mean"] = weighted_mean(col, art.weights);
        stats["median"] = weighted_quantile(col, art.weights, 0.5);
        stats["q05"] = weighted_quantile(col, art.weights, 0.05);
        stats["q95"] = weighted_quantile(col, art.weights, 0.95);
        stats["hpd90_lo"] = hpd.first;
        stats["hpd90_hi"] = hpd.second;
        params[param_names[static_cast<std::size_t>(p)]] = stats;
    }
    j["parameters"] = params;
    return j.dump(2) + "\n";
}

namespace {

std::string posterior_csv(const RunArtifacts& art,
                          const std::vector<std::string>& param_names) {
    std::vector<std::string> header;
    header.push_back("draw");
    for (const auto& n : param_names) header.push_back(n);
    header.push_back("weight");
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(art.draws.rows()));
    for (Eigen::Index i = 0; i < art.draws.rows(); ++i) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(art.draws.cols()) + 2);
        row.push_back(static_cast<double>(i));
        for (Eigen::Index p = 0; p < art.draws.cols(); ++p)
            row.push_back(art.draws(i, p));
        row.push_back(art.weights[i]);
        rows.push_back(std::move(row));
    }
    return csv_string(header, rows);
}

std::string bands_csv(const ForecastBands& b) {
    std::vector<std::vector<double>> rows;
    rows.reserve(b.t.size());
    for (std::size_t i = 0; i < b.t.size(); ++i)
        rows.push_back(
            {b.t[i], b.median[i], b.lo95[i], b.lo80[i], b.hi80[i], b.hi95[i]});
    return csv_string({"t", "median", "lo95", "lo80", "hi80", "hi95"}, rows);
}

// Study-specific artifacts beyond the posterior sample, written from their
// own stream so they are identical across methods' call patterns.
void write_extras(const ExperimentConfig& cfg, const RunArtifacts& art,
                  std::map<std::string, std::string>& files) {
    RngStream extras_rng = RngStream(cfg.seed).child(1);
    if (cfg.study == "ebola") {
        EbolaConfig sim_cfg;
        RngStream obs_rng(cfg.ebola.obs_seed);
        std::vector<std::int64_t> obs_window =
            align_to_observed(sim_cfg, cfg.ebola.true_r0, cfg.ebola.obs_start_count,
                              cfg.ebola.n_obs_days, obs_rng);
        std::vector<std::vector<double>> obs_rows;
        for (std::size_t d = 0; d < obs_window.size(); ++d)
            obs_rows.push_back(
                {static_cast<double>(d), static_cast<double>(obs_window[d])});
        files["observed_series.csv"] = csv_string({"day", "cumulative_count"}, obs_rows);

        const std::int64_t first_obs = obs_window.front();
        TrajectorySimulator traj = [sim_cfg, first_obs](const Eigen::VectorXd& theta,
                                                        int horizon, RngStream& rng) {
            return to_doubles(
                align_to_observed(sim_cfg, theta[0], first_obs, horizon, rng));
        };
        ForecastBands bands = posterior_predictive(
            art.draws, art.weights, traj, cfg.ebola.forecast_horizon,
            cfg.ebola.n_forecast_traj, extras_rng, cfg.workers);
        files["forecast_bands.csv"] = bands_csv(bands);
    } else if (cfg.study == "supernova") {
        SupernovaDataset obs = sn_observed(cfg);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < obs.mu.size(); ++i)
            rows.push_back({obs.z_centers[i], obs.mu[i], obs.sigma[i]});
        files["observed_bins.csv"] = csv_string({"z_center", "mu", "sigma"}, rows);
    } else if (cfg.study == "sv-portfolio") {
        std::vector<double> obs = sv_observed(cfg);
        std::vector<std::vector<double>> obs_rows;
        for (double y : obs) obs_rows.push_back({y});
        files["observed_returns.csv"] = csv_string({"y"}, obs_rows);

        std::vector<double> gross = sv_predictive_draws(
            art.draws, art.weights, obs, cfg.sv_portfolio.m_predictive,
            cfg.sv_portfolio.n_pf_particles, extras_rng, cfg.workers);
        std::vector<std::vector<double>> ret_rows;
        for (double g : gross) ret_rows.push_back({g});
        files["predictive_returns.csv"] = csv_string({"gross_return"}, ret_rows);

        PortfolioConfig pc;
        pc.gamma = cfg.sv_portfolio.gamma;
        pc.rf_gross = std::exp(cfg.sv_portfolio.rf_log);
        pc.wealth = cfg.sv_portfolio.wealth;
        AllocationResult alloc = optimal_alpha(gross, pc);
        json report;
        report["alpha"] = alloc.alpha;
        report["expected_utility"] = alloc.expected_utility;
        report["gamma"] = pc.gamma;
        report["rf_gross"] = pc.rf_gross;
        report["wealth"] = pc.wealth;
        report["m_predictive"] = cfg.sv_portfolio.m_predictive;
        report["n_pf_particles"] = cfg.sv_portfolio.n_pf_particles;
        files["portfolio.json"] = report.dump(2) + "\n";
    }
}

} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();

    Model model = build_model(cfg);
    RunArtifacts art = run_inference(cfg, model);

    // Relative name -> content; written in deterministic order below.
    std::map<std::string, std::string> files;
    files["posterior_samples.csv"] = posterior_csv(art, model.param_names);
    files["summary.json"] = summary_json(cfg, art, model.param_names);
    write_extras(cfg, art, files);

    for (const auto& [name, content] : files)
        atomic_write_file(cfg.output_dir / name, content);

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();

    json manifest;
    manifest["config_hash"] = fnv1a64_hex(canonical_config_json(cfg));
    manifest["library_version"] = kLibraryVersion;
    manifest["study"] = cfg.study;
    manifest["method"] = cfg.method;
    manifest["seed"] = cfg.seed;
    manifest["simulator_calls"] = art.simulator_calls;
    manifest["wall_clock_seconds"] = wall;
    json checksums = json::object();
    for (const auto& [name, content] : files) checksums[name] = fnv1a64_hex(content);
    manifest["outputs"] = checksums;
    if (cfg.method == "pmc") {
        manifest["method_details"] = {{"epsilon_schedule", art.epsilon_schedule},
                                      {"stopped_early", art.stopped_early}};
    }
    atomic_write_file(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");

    ExperimentOutcome out;
    for (const auto& [name, content] : files) out.files.push_back(name);
    out.files.push_back("manifest.json");
    out.simulator_calls = art.simulator_calls;
    out.wall_clock_seconds = wall;
    return out;
}

std::string compare_manifests_csv(const std::vector<std::string>& manifest_texts) {
    if (manifest_texts.size() < 2)
        throw ConfigError("comparison needs at least two manifests");
    struct Row {
        std::string study, method;
        std::uint64_t seed = 0;
        std::uint64_t calls = 0;
        double wall = 0.0;
    };
    std::vector<Row> rows;
    std::uint64_t min_calls = std::numeric_limits<std::uint64_t>::max();
    for (const auto& text : manifest_texts) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
        }
        Row r;
        try {
            r.study = j.at("study").get<std::string>();
            r.method = j.at("method").get<std::string>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.calls = j.at("simulator_calls").get<std::uint64_t>();
            r.wall = j.at("wall_clock_seconds").get<double>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("manifest missing required field: ") +
                              e.what());
        }
        min_calls = std::min(min_calls, r.calls);
        rows.push_back(std::move(r));
    }
    if (min_calls == 0) min_calls = 1;
    std::string out =
        "study,method,seed,simulator_calls,wall_clock_seconds,call_ratio_vs_min\n";
    for (const Row& r : rows) {
        out += r.study + ',' + r.method + ',' + std::to_string(r.seed) + ',' +
               std::to_string(r.calls) + ',' + format_double(r.wall) + ',' +
               format_double(static_cast<double>(r.calls) /
                             static_cast<double>(min_calls)) +
               '\n';
    }
    return out;
}

} // namespace lfikit
