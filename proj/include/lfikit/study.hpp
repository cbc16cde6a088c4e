#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfikit/config.hpp"
#include "lfikit/model.hpp"

namespace lfikit {

// Builds the inference problem an experiment describes: prior, search box,
// and discrepancy against the observed dataset (synthesized deterministically
// from the study block's obs_seed, independent of the run seed).
Model build_model(const ExperimentConfig& cfg);

// Inference result in a method-independent shape.
struct RunArtifacts {
    Eigen::MatrixXd draws;   // n x p
    Eigen::VectorXd weights; // normalized
    std::uint64_t simulator_calls = 0;
    // Present for the population method only:
    std::vector<double> epsilon_schedule;
    bool stopped_early = false;
};

// Runs the configured method on the model. All method randomness descends
// from RngStream(cfg.seed).child(0).
RunArtifacts run_inference(const ExperimentConfig& cfg, const Model& model);

// Full batch pipeline: inference, posterior_samples.csv, summary.json,
// study-specific outputs, and manifest.json (written last, carrying
// checksums of the rest). Returns the relative names of every file written.
struct ExperimentOutcome {
    std::vector<std::string> files;
    std::uint64_t simulator_calls = 0;
    double wall_clock_seconds = 0.0;
};

ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// summary.json body for a finished run (exposed for tests: every statistic
// must be recomputable from the posterior sample itself).
std::string summary_json(const ExperimentConfig& cfg, const RunArtifacts& art,
                         const std::vector<std::string>& param_names);

// Comparison table across run manifests: one CSV row per manifest with the
// simulator-call count, wall clock, and the call ratio against the smallest
// count in the set.
std::string compare_manifests_csv(const std::vector<std::string>& manifest_texts);

} // namespace lfikit
