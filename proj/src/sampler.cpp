#include "lfikit/sampler.hpp"

#include <cmath>
#include <limits>

#include "lfikit/errors.hpp"

namespace lfikit {

Chain mh_sample(const LogTargetFn& log_target, const BoundedSpace& space,
                const MhConfig& cfg, RngStream rng) {
    const Eigen::Index p = space.dim();
    if (cfg.n_steps == 0) throw ConfigError("mh: n_steps must be positive");
    if (cfg.init.size() != p) throw ConfigError("mh: init point dimension mismatch");
    if (!space.contains(cfg.init)) throw InitInvalid("mh: init point outside the box");
    double lt = log_target(cfg.init);
    if (!std::isfinite(lt))
        throw InitInvalid("mh: init point has non-finite log target");

    double target = cfg.target_accept;
    if (target <= 0.0) target = (p == 1) ? 0.44 : 0.30;

    const std::size_t burn = static_cast<std::size_t>(
        cfg.burn_in_fraction * static_cast<double>(cfg.n_steps));
    const Eigen::VectorXd base = space.range() * cfg.init_scale;

    Eigen::VectorXd x = cfg.init;
    double log_scale = 0.0;
    double scale = 1.0;

    std::size_t kept_cap = (cfg.n_steps - burn + cfg.thinning - 1) / cfg.thinning;
    Chain chain;
    chain.draws.resize(static_cast<Eigen::Index>(kept_cap), p);
    chain.log_target.resize(static_cast<Eigen::Index>(kept_cap));
    chain.burn_in = burn;
    chain.thinning = cfg.thinning;

    std::size_t kept = 0;
    std::size_t post_accepts = 0;
    std::size_t post_steps = 0;

    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
        Eigen::VectorXd prop(p);
        for (Eigen::Index j = 0; j < p; ++j)
            prop[j] = x[j] + scale * base[j] * rng.normal01();
        double lt_prop = space.contains(prop)
                             ? log_target(prop)
                             : -std::numeric_limits<double>::infinity();
        double log_alpha = lt_prop - lt;
        bool accept = (log_alpha >= 0.0) || (std::log(rng.uniform01()) < log_alpha);
        if (accept) {
            x = prop;
            lt = lt_prop;
        }
        if (step < burn) {
            // Robbins-Monro on the log scale; gain decays so the kernel
            // settles before the freeze.
            double gain = 1.0 / std::pow(static_cast<double>(step + 1), 0.6);
            log_scale += gain * ((accept ? 1.0 : 0.0) - target);
            log_scale = std::min(std::max(log_scale, -15.0), 15.0);
            scale = std::exp(log_scale);
        } else {
            post_steps += 1;
            post_accepts += accept ? 1 : 0;
            std::size_t since = step - burn;
            if (since % cfg.thinning == 0) {
                chain.draws.row(static_cast<Eigen::Index>(kept)) = x;
                chain.log_target[static_cast<Eigen::Index>(kept)] = lt;
                ++kept;
            }
        }
    }

    chain.draws.conservativeResize(static_cast<Eigen::Index>(kept), p);
    chain.log_target.conservativeResize(static_cast<Eigen::Index>(kept));
    chain.acceptance_rate =
        post_steps > 0 ? static_cast<double>(post_accepts) / static_cast<double>(post_steps)
                       : 0.0;
    chain.final_scale = scale;
    chain.adaptation_frozen = true;
    return chain;
}

} // namespace lfikit
