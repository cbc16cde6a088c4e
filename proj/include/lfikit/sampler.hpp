#pragma once

#include <functional>

#include "lfikit/samples.hpp"
#include "lfikit/space.hpp"

namespace lfikit {

using LogTargetFn = std::function<double(const Eigen::VectorXd&)>;

struct MhConfig {
    std::size_t n_steps = 0;        // total steps, burn-in included
    double burn_in_fraction = 0.25; // leading fraction discarded
    std::size_t thinning = 1;
    Eigen::VectorXd init;           // start point; must have finite log target
    double init_scale = 0.1;        // proposal sd as a fraction of the box range
    // Target acceptance rate; <= 0 picks 0.44 for 1-D and 0.30 otherwise.
    double target_accept = 0.0;
};

// Gaussian random-walk Metropolis over a box. Proposals falling outside the
// box are rejected via the (-inf) target. The global proposal scale follows a
// Robbins-Monro recursion toward the target acceptance rate during burn-in
// and is frozen afterwards, keeping the post-burn-in chain a valid
// fixed-kernel Metropolis chain.
Chain mh_sample(const LogTargetFn& log_target, const BoundedSpace& space,
                const MhConfig& cfg, RngStream rng);

} // namespace lfikit
