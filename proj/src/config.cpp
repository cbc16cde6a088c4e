#include "lfikit/config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "lfikit/csv.hpp"
#include "lfikit/errors.hpp"

namespace lfikit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
}

// Strict field access: every getter records the key it consumed; after a
// block is read, reject_unknown flags leftovers.
class Block {
public:
    Block(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        expect_object(j_, name_);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key, double fallback) {
        mark(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) fail(name_ + "." + key + " must be a number");
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        mark(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(name_ + "." + key + " must be an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        mark(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(name_ + "." + key + " must be a boolean");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        mark(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(name_ + "." + key + " must be a string");
        return v.get<std::string>();
    }

    std::vector<double> number_list(const std::string& key) {
        mark(key);
        std::vector<double> out;
        if (!j_.contains(key)) return out;
        const json& v = j_.at(key);
        if (!v.is_array()) fail(name_ + "." + key + " must be an array of numbers");
        for (const json& e : v) {
            if (!e.is_number()) fail(name_ + "." + key + " must contain only numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json& raw(const std::string& key) {
        mark(key);
        return j_.at(key);
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key()))
                fail("unknown key '" + it.key() + "' in " + name_);
        }
    }

private:
    void mark(const std::string& key) { seen_.insert(key); }
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

std::uint64_t to_seed(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where + " must be an integer");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    std::int64_t s = v.get<std::int64_t>();
    if (s < 0) fail(where + " must be nonnegative");
    return static_cast<std::uint64_t>(s);
}

std::size_t positive_count(Block& b, const std::string& key, std::int64_t fallback,
                           const std::string& label) {
    std::int64_t v = b.integer(key, fallback);
    if (v < 1) fail(label + "." + key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

// Per-study method defaults. Values for the study/method pairs exercised by
// the bundled experiments come from the experiment definitions; the rest are
// workable defaults for ad-hoc runs.
struct MethodDefaults {
    ExperimentConfig::Rejection rejection;
    ExperimentConfig::NnRejection nn;
    ExperimentConfig::Pmc pmc;
    ExperimentConfig::Bolfi bolfi;
};

MethodDefaults defaults_for(const std::string& study) {
    MethodDefaults d;
    if (study == "toy") {
        d.rejection = {2000, 0.05, 10'000'000};
        d.nn = {20000, 0.01};
        d.pmc.n_particles = 500;
        d.pmc.epsilon1 = 10.0;
        d.pmc.quantile = 0.5;
        d.pmc.n_iterations = 6;
        d.bolfi.n_init = 5;
        d.bolfi.n_evidence = 60;
        d.bolfi.update_interval = 1;
        d.bolfi.acq_noise_var = 0.1;
        d.bolfi.n_sample = 1000;
        d.bolfi.log_discrepancy = false;
    } else if (study == "ebola") {
        d.rejection = {500, -2.5, 10'000'000};
        d.nn = {5000, 0.06};
        d.pmc.n_particles = 500;
        d.pmc.epsilon1 = 2.0;
        d.pmc.quantile = 0.75;
        d.pmc.n_iterations = 8;
        d.bolfi.n_init = 5;
        d.bolfi.n_evidence = 100;
        d.bolfi.update_interval = 5;
        d.bolfi.acq_noise_var = 0.1;
        d.bolfi.n_sample = 2000;
        d.bolfi.log_discrepancy = false; // discrepancy is already log-scaled
    } else if (study == "supernova") {
        d.rejection = {500, 40.0, 10'000'000};
        d.nn = {10000, 0.03};
        d.pmc.n_particles = 1000;
        d.pmc.epsilon1 = 500.0;
        d.pmc.quantile = 0.75;
        d.pmc.n_iterations = 20;
        d.bolfi.n_init = 50;
        d.bolfi.n_evidence = 300;
        d.bolfi.update_interval = 1;
        d.bolfi.acq_noise_var = 1.0;
        d.bolfi.n_sample = 1000;
        // The quadratic-form distance is already on a likelihood-friendly
        // scale; modelling its log would leave the zero-mean surrogate
        // reverting downward (toward high plausibility) in unexplored
        // regions and fatten the lower tail of the fit.
        d.bolfi.log_discrepancy = false;
    } else { // sv-portfolio
        d.rejection = {300, 1.0, 10'000'000};
        d.nn = {34992, 0.0086};
        d.pmc.n_particles = 500;
        d.pmc.epsilon1 = 20.0;
        d.pmc.quantile = 0.75;
        d.pmc.n_iterations = 10;
        d.bolfi.n_init = 20;
        d.bolfi.n_evidence = 200;
        d.bolfi.update_interval = 5;
        d.bolfi.acq_noise_var = 0.1;
        d.bolfi.n_sample = 1000;
        d.bolfi.log_discrepancy = true;
    }
    return d;
}

void parse_rejection(Block& b, ExperimentConfig::Rejection& out) {
    out.n_accept = positive_count(b, "n_accept",
                                  static_cast<std::int64_t>(out.n_accept), "rejection");
    out.epsilon = b.number("epsilon", out.epsilon);
    std::int64_t ma = b.integer("max_attempts",
                                static_cast<std::int64_t>(out.max_attempts));
    if (ma < 1) fail("rejection.max_attempts must be >= 1");
    out.max_attempts = static_cast<std::uint64_t>(ma);
    b.reject_unknown();
}

void parse_nn(Block& b, ExperimentConfig::NnRejection& out) {
    out.n_total = positive_count(b, "n_total",
                                 static_cast<std::int64_t>(out.n_total), "nn-rejection");
    out.fraction = b.number("fraction", out.fraction);
    if (!(out.fraction > 0.0 && out.fraction <= 1.0))
        fail("nn-rejection.fraction must lie in (0, 1]");
    b.reject_unknown();
}

void parse_pmc(Block& b, ExperimentConfig::Pmc& out) {
    out.n_particles = positive_count(b, "n_particles",
                                     static_cast<std::int64_t>(out.n_particles), "pmc");
    out.epsilons = b.number_list("epsilons");
    out.epsilon1 = b.number("epsilon1", out.epsilon1);
    out.quantile = b.number("quantile", out.quantile);
    if (!(out.quantile > 0.0 && out.quantile < 1.0))
        fail("pmc.quantile must lie in (0, 1)");
    out.n_iterations = positive_count(
        b, "n_iterations", static_cast<std::int64_t>(out.n_iterations), "pmc");
    std::int64_t ma = b.integer("max_attempts_per_particle",
                                static_cast<std::int64_t>(out.max_attempts_per_particle));
    if (ma < 1) fail("pmc.max_attempts_per_particle must be >= 1");
    out.max_attempts_per_particle = static_cast<std::uint64_t>(ma);
    if (!out.epsilons.empty()) {
        for (std::size_t i = 1; i < out.epsilons.size(); ++i)
            if (!(out.epsilons[i] < out.epsilons[i - 1]))
                fail("pmc.epsilons must be strictly decreasing");
    }
    b.reject_unknown();
}

void parse_bolfi(Block& b, ExperimentConfig::Bolfi& out) {
    out.n_init = positive_count(b, "n_init", static_cast<std::int64_t>(out.n_init),
                                "bolfi");
    out.n_evidence = positive_count(
        b, "n_evidence", static_cast<std::int64_t>(out.n_evidence), "bolfi");
    if (out.n_evidence < out.n_init) fail("bolfi.n_evidence must be >= bolfi.n_init");
    out.update_interval = positive_count(
        b, "update_interval", static_cast<std::int64_t>(out.update_interval), "bolfi");
    out.acq_noise_var = b.number("acq_noise_var", out.acq_noise_var);
    if (!(out.acq_noise_var > 0.0)) fail("bolfi.acq_noise_var must be positive");
    out.epsilon_eta = b.number("epsilon_eta", out.epsilon_eta);
    if (!(out.epsilon_eta > 0.0 && out.epsilon_eta < 1.0))
        fail("bolfi.epsilon_eta must lie in (0, 1)");
    out.n_sample = positive_count(b, "n_sample",
                                  static_cast<std::int64_t>(out.n_sample), "bolfi");
    out.log_discrepancy = b.boolean("log_discrepancy", out.log_discrepancy);
    b.reject_unknown();
}

void parse_toy(Block& b, ExperimentConfig::Toy& out) {
    out.y_obs = b.number("y_obs", out.y_obs);
    b.reject_unknown();
}

void parse_ebola(Block& b, ExperimentConfig::Ebola& out) {
    out.obs_seed = to_seed(b.has("obs_seed") ? b.raw("obs_seed")
                                             : json(out.obs_seed),
                           "ebola.obs_seed");
    out.true_r0 = b.number("true_r0", out.true_r0);
    if (!(out.true_r0 > 0.0)) fail("ebola.true_r0 must be positive");
    std::int64_t sc = b.integer("obs_start_count", out.obs_start_count);
    if (sc < 0) fail("ebola.obs_start_count must be nonnegative");
    out.obs_start_count = sc;
    std::int64_t nd = b.integer("n_obs_days", out.n_obs_days);
    if (nd < 2) fail("ebola.n_obs_days must be >= 2");
    out.n_obs_days = static_cast<int>(nd);
    std::int64_t fh = b.integer("forecast_horizon", out.forecast_horizon);
    if (fh < 1) fail("ebola.forecast_horizon must be >= 1");
    out.forecast_horizon = static_cast<int>(fh);
    std::int64_t nt = b.integer("n_forecast_traj", out.n_forecast_traj);
    if (nt < 1) fail("ebola.n_forecast_traj must be >= 1");
    out.n_forecast_traj = static_cast<int>(nt);
    b.reject_unknown();
}

void parse_supernova(Block& b, ExperimentConfig::Supernova& out) {
    out.obs_seed = to_seed(b.has("obs_seed") ? b.raw("obs_seed")
                                             : json(out.obs_seed),
                           "supernova.obs_seed");
    out.true_omega_m = b.number("true_omega_m", out.true_omega_m);
    out.true_w0 = b.number("true_w0", out.true_w0);
    out.h0 = b.number("h0", out.h0);
    if (!(out.h0 > 0.0)) fail("supernova.h0 must be positive");
    std::int64_t n_sn = b.integer("n_sn", out.n_sn);
    std::int64_t n_bins = b.integer("n_bins", out.n_bins);
    if (n_bins < 1) fail("supernova.n_bins must be >= 1");
    if (n_sn < 2 * n_bins) fail("supernova.n_sn must be >= 2 * n_bins");
    out.n_sn = static_cast<int>(n_sn);
    out.n_bins = static_cast<int>(n_bins);
    out.z_lo = b.number("z_lo", out.z_lo);
    out.z_hi = b.number("z_hi", out.z_hi);
    if (!(out.z_lo > 0.0 && out.z_hi > out.z_lo))
        fail("supernova redshift range needs 0 < z_lo < z_hi");
    out.noise_loc = b.number("noise_loc", out.noise_loc);
    out.noise_scale = b.number("noise_scale", out.noise_scale);
    if (!(out.noise_scale > 0.0)) fail("supernova.noise_scale must be positive");
    out.noise_shape = b.number("noise_shape", out.noise_shape);
    b.reject_unknown();
}

void parse_sv(Block& b, ExperimentConfig::SvPortfolio& out) {
    out.obs_seed = to_seed(b.has("obs_seed") ? b.raw("obs_seed")
                                             : json(out.obs_seed),
                           "sv-portfolio.obs_seed");
    std::int64_t n = b.integer("n_obs", out.n_obs);
    if (n < 50) fail("sv-portfolio.n_obs must be >= 50");
    out.n_obs = static_cast<int>(n);
    out.true_rho = b.number("true_rho", out.true_rho);
    if (!(std::abs(out.true_rho) < 1.0)) fail("sv-portfolio.true_rho needs |rho| < 1");
    out.true_sigma = b.number("true_sigma", out.true_sigma);
    if (!(out.true_sigma >= 0.0)) fail("sv-portfolio.true_sigma must be >= 0");
    out.true_omega = b.number("true_omega", out.true_omega);
    out.true_mu = b.number("true_mu", out.true_mu);
    std::int64_t m = b.integer("m_predictive", out.m_predictive);
    if (m < 1) fail("sv-portfolio.m_predictive must be >= 1");
    out.m_predictive = static_cast<int>(m);
    std::int64_t np = b.integer("n_pf_particles", out.n_pf_particles);
    if (np < 1) fail("sv-portfolio.n_pf_particles must be >= 1");
    out.n_pf_particles = static_cast<int>(np);
    out.gamma = b.number("gamma", out.gamma);
    if (!(out.gamma > 1.0)) fail("sv-portfolio.gamma must be > 1");
    out.rf_log = b.number("rf_log", out.rf_log);
    out.wealth = b.number("wealth", out.wealth);
    if (!(out.wealth > 0.0)) fail("sv-portfolio.wealth must be positive");
    b.reject_unknown();
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    Block top(doc, "config");

    ExperimentConfig cfg;
    cfg.study = top.text("study", "");
    if (cfg.study != "toy" && cfg.study != "ebola" && cfg.study != "supernova" &&
        cfg.study != "sv-portfolio")
        fail("study must be one of toy, ebola, supernova, sv-portfolio");
    cfg.method = top.text("method", "");
    if (cfg.method != "rejection" && cfg.method != "nn-rejection" &&
        cfg.method != "pmc" && cfg.method != "bolfi")
        fail("method must be one of rejection, nn-rejection, pmc, bolfi");
    if (!top.has("seed")) fail("config.seed is required");
    cfg.seed = to_seed(top.raw("seed"), "config.seed");

    std::int64_t workers = top.integer("workers", 0);
    if (workers < 0) fail("config.workers must be nonnegative");
    cfg.workers = static_cast<unsigned>(workers);
    cfg.output_dir = top.text("output_dir", ".");

    MethodDefaults defaults = defaults_for(cfg.study);
    cfg.rejection = defaults.rejection;
    cfg.nn_rejection = defaults.nn;
    cfg.pmc = defaults.pmc;
    cfg.bolfi = defaults.bolfi;

    // Exactly the block matching `method` may appear.
    for (const char* name : {"rejection", "nn-rejection", "pmc", "bolfi"}) {
        if (doc.contains(name) && cfg.method != name)
            fail(std::string("method block '") + name + "' does not match method '" +
                 cfg.method + "'");
    }
    if (top.has(cfg.method)) {
        Block b(top.raw(cfg.method), cfg.method);
        if (cfg.method == "rejection") parse_rejection(b, cfg.rejection);
        else if (cfg.method == "nn-rejection") parse_nn(b, cfg.nn_rejection);
        else if (cfg.method == "pmc") parse_pmc(b, cfg.pmc);
        else parse_bolfi(b, cfg.bolfi);
    }

    for (const char* name : {"toy", "ebola", "supernova", "sv-portfolio"}) {
        if (doc.contains(name) && cfg.study != name)
            fail(std::string("study block '") + name + "' does not match study '" +
                 cfg.study + "'");
    }
    if (top.has(cfg.study)) {
        Block b(top.raw(cfg.study), cfg.study);
        if (cfg.study == "toy") parse_toy(b, cfg.toy);
        else if (cfg.study == "ebola") parse_ebola(b, cfg.ebola);
        else if (cfg.study == "supernova") parse_supernova(b, cfg.supernova);
        else parse_sv(b, cfg.sv_portfolio);
    }

    top.reject_unknown();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
    json j;
    j["study"] = cfg.study;
    j["method"] = cfg.method;
    j["seed"] = cfg.seed;

    if (cfg.method == "rejection") {
        j["rejection"] = {{"n_accept", cfg.rejection.n_accept},
                          {"epsilon", cfg.rejection.epsilon},
                          {"max_attempts", cfg.rejection.max_attempts}};
    } else if (cfg.method == "nn-rejection") {
        j["nn-rejection"] = {{"n_total", cfg.nn_rejection.n_total},
                             {"fraction", cfg.nn_rejection.fraction}};
    } else if (cfg.method == "pmc") {
        j["pmc"] = {{"n_particles", cfg.pmc.n_particles},
                    {"epsilons", cfg.pmc.epsilons},
                    {"epsilon1", cfg.pmc.epsilon1},
                    {"quantile", cfg.pmc.quantile},
                    {"n_iterations", cfg.pmc.n_iterations},
                    {"max_attempts_per_particle", cfg.pmc.max_attempts_per_particle}};
    } else {
        j["bolfi"] = {{"n_init", cfg.bolfi.n_init},
                      {"n_evidence", cfg.bolfi.n_evidence},
                      {"update_interval", cfg.bolfi.update_interval},
                      {"acq_noise_var", cfg.bolfi.acq_noise_var},
                      {"epsilon_eta", cfg.bolfi.epsilon_eta},
                      {"n_sample", cfg.bolfi.n_sample},
                      {"log_discrepancy", cfg.bolfi.log_discrepancy}};
    }

    if (cfg.study == "toy") {
        j["toy"] = {{"y_obs", cfg.toy.y_obs}};
    } else if (cfg.study == "ebola") {
        j["ebola"] = {{"obs_seed", cfg.ebola.obs_seed},
                      {"true_r0", cfg.ebola.true_r0},
                      {"obs_start_count", cfg.ebola.obs_start_count},
                      {"n_obs_days", cfg.ebola.n_obs_days},
                      {"forecast_horizon", cfg.ebola.forecast_horizon},
                      {"n_forecast_traj", cfg.ebola.n_forecast_traj}};
    } else if (cfg.study == "supernova") {
        j["supernova"] = {{"obs_seed", cfg.supernova.obs_seed},
                          {"true_omega_m", cfg.supernova.true_omega_m},
                          {"true_w0", cfg.supernova.true_w0},
                          {"h0", cfg.supernova.h0},
                          {"n_sn", cfg.supernova.n_sn},
                          {"n_bins", cfg.supernova.n_bins},
                          {"z_lo", cfg.supernova.z_lo},
                          {"z_hi", cfg.supernova.z_hi},
                          {"noise_loc", cfg.supernova.noise_loc},
                          {"noise_scale", cfg.supernova.noise_scale},
                          {"noise_shape", cfg.supernova.noise_shape}};
    } else {
        j["sv-portfolio"] = {{"obs_seed", cfg.sv_portfolio.obs_seed},
                             {"n_obs", cfg.sv_portfolio.n_obs},
                             {"true_rho", cfg.sv_portfolio.true_rho},
                             {"true_sigma", cfg.sv_portfolio.true_sigma},
                             {"true_omega", cfg.sv_portfolio.true_omega},
                             {"true_mu", cfg.sv_portfolio.true_mu},
                             {"m_predictive", cfg.sv_portfolio.m_predictive},
                             {"n_pf_particles", cfg.sv_portfolio.n_pf_particles},
                             {"gamma", cfg.sv_portfolio.gamma},
                             {"rf_log", cfg.sv_portfolio.rf_log},
                             {"wealth", cfg.sv_portfolio.wealth}};
    }
    return j.dump();
}

} // namespace lfikit
