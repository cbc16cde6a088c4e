#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "lfikit/rng.hpp"
#include "lfikit/space.hpp"

namespace lfikit {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
    int max_evals = 200;
    double x_tol = 1e-10;  // simplex spread below which we stop
    double f_tol = 1e-12;
    double init_step = 0.1; // fraction of box range for the initial simplex
};

struct OptimResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evals = 0;
};

// Nelder-Mead minimization restricted to a box: every evaluation point is
// clamped into [lower, upper] first. Deterministic given the start point.
OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& start,
                        const BoundedSpace& box, const NelderMeadOptions& opts = {});

struct MultiStartOptions {
    int n_random_starts = 10;
    // For dims <= 2 a coarse grid pre-scan seeds extra starts, which makes
    // the search reproducible against multimodal objectives.
    int grid_points = 10000;
    NelderMeadOptions local{};
};

// Multi-start minimization over a box: grid pre-scan (dim <= 2), uniform
// random starts from `rng`, plus any caller-provided extra starts. Returns
// the best local optimum found.
OptimResult minimize_multistart(const ObjectiveFn& f, const BoundedSpace& box,
                                RngStream rng,
                                const std::vector<Eigen::VectorXd>& extra_starts = {},
                                const MultiStartOptions& opts = {});

// Golden-section minimization of a unimodal 1-D function on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10);

} // namespace lfikit
