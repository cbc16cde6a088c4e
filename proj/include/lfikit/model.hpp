#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfikit/prior.hpp"
#include "lfikit/space.hpp"

namespace lfikit {

// Observation matrix plus channel labels. Columns are channels; rows are
// observations (a plain time series is an n x 1 matrix).
struct Dataset {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;
};

// A simulation-based model as the inference algorithms see it: a prior, an
// optional bounded search region, and the discrepancy between a simulated and
// the observed dataset at a parameter point. One discrepancy evaluation is
// one simulator call for accounting purposes.
struct Model {
    Prior prior;
    std::optional<BoundedSpace> space;
    std::function<double(const Eigen::VectorXd&, RngStream&)> discrepancy;
    std::vector<std::string> param_names;

    Eigen::Index dim() const { return prior.dim(); }
};

} // namespace lfikit
