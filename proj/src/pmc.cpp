#include "lfikit/pmc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "lfikit/errors.hpp"
#include "lfikit/parallel.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

namespace {

// Cholesky with escalating diagonal jitter; the population covariance can be
// numerically semidefinite even after flooring.
Eigen::LLT<Eigen::MatrixXd> factor_kernel(Eigen::MatrixXd cov) {
    double scale = cov.diagonal().maxCoeff();
    if (!(scale > 0.0)) scale = 1.0;
    double jitter = 0.0;
    for (int i = 0; i < 8; ++i) {
        Eigen::MatrixXd k = cov;
        if (jitter > 0.0)
            k += jitter * scale * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
        Eigen::LLT<Eigen::MatrixXd> llt(k);
        if (llt.info() == Eigen::Success) return llt;
        jitter = (jitter == 0.0) ? 1e-12 : jitter * 100.0;
    }
    throw FactorizationFailure("pmc: perturbation kernel covariance not factorizable");
}

} // namespace

Eigen::MatrixXd weighted_covariance(const Eigen::MatrixXd& particles,
                                    const Eigen::VectorXd& weights,
                                    const Eigen::VectorXd& diag_floor) {
    const Eigen::Index n = particles.rows();
    const Eigen::Index p = particles.cols();
    if (n == 0 || weights.size() != n)
        throw ConfigError("weighted_covariance: particle/weight shape mismatch");
    Eigen::VectorXd w = weights / weights.sum();
    Eigen::RowVectorXd mean = w.transpose() * particles;
    Eigen::MatrixXd centered = particles.rowwise() - mean;
    Eigen::MatrixXd cov = centered.transpose() * w.asDiagonal() * centered;
    if (diag_floor.size() == p) {
        for (Eigen::Index j = 0; j < p; ++j)
            cov(j, j) = std::max(cov(j, j), diag_floor[j]);
    }
    return cov;
}

double pmc_weight(const Eigen::VectorXd& theta, const ParticlePopulation& prev,
                  const Prior& prior) {
    double lp = prior.logpdf(theta);
    if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
    auto llt = factor_kernel(prev.kernel_cov);
    const Eigen::Index p = theta.size();
    double mix = 0.0;
    for (Eigen::Index k = 0; k < prev.particles.rows(); ++k) {
        Eigen::VectorXd delta = theta - prev.particles.row(k).transpose();
        Eigen::VectorXd z = llt.matrixL().solve(delta);
        constexpr double kLog2Pi = 1.8378770664093454836;
        mix += prev.weights[k] *
               std::exp(-0.5 * z.squaredNorm() - 0.5 * static_cast<double>(p) * kLog2Pi);
    }
    if (mix <= 0.0) {
        // Proposal infinitely far from every previous particle; the weight is
        // formally unbounded. Flag it rather than returning inf.
        throw ParticleCollapse("pmc: mixture kernel density underflowed to zero", -1);
    }
    return std::exp(lp) / mix;
}

double adaptive_next_epsilon(const Eigen::VectorXd& distances, double q) {
    if (distances.size() == 0)
        throw ConfigError("adaptive_next_epsilon: empty distance vector");
    std::vector<double> d(distances.data(), distances.data() + distances.size());
    return quantile(std::move(d), q);
}

ParticlePopulation pmc_step(const Model& model, const ParticlePopulation& prev,
                            double eps, RngStream rng, std::uint64_t max_attempts,
                            unsigned workers, std::uint64_t* calls_out) {
    const Eigen::Index p = model.dim();
    const std::size_t n = static_cast<std::size_t>(prev.particles.rows());
    auto llt = factor_kernel(prev.kernel_cov);
    Eigen::MatrixXd lmat = llt.matrixL();

    Eigen::MatrixXd particles(n, p);
    Eigen::VectorXd dist(static_cast<Eigen::Index>(n));
    std::vector<std::uint64_t> calls(n, 0);

    parallel_for(n, workers, [&](std::size_t j) {
        RngStream slot = rng.child(j);
        for (std::uint64_t a = 0; a < max_attempts; ++a) {
            RngStream attempt = slot.child(a);
            std::size_t pick =
                attempt.categorical(prev.weights.data(),
                                    static_cast<std::size_t>(prev.weights.size()));
            Eigen::VectorXd z(p);
            for (Eigen::Index r = 0; r < p; ++r) z[r] = attempt.normal01();
            Eigen::VectorXd theta =
                prev.particles.row(static_cast<Eigen::Index>(pick)).transpose() +
                lmat * z;
            if (!model.prior.in_support(theta)) continue;
            double d = model.discrepancy(theta, attempt);
            ++calls[j];
            if (d <= eps) {
                particles.row(static_cast<Eigen::Index>(j)) = theta;
                dist[static_cast<Eigen::Index>(j)] = d;
                return;
            }
        }
        throw AttemptBudgetExceeded("pmc: particle " + std::to_string(j) +
                                    " exhausted " + std::to_string(max_attempts) +
                                    " attempts at epsilon " + std::to_string(eps));
    });

    ParticlePopulation next;
    next.particles = std::move(particles);
    next.distances = std::move(dist);
    next.weights.resize(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        next.weights[static_cast<Eigen::Index>(j)] =
            pmc_weight(next.particles.row(static_cast<Eigen::Index>(j)).transpose(),
                       prev, model.prior);
    }
    double total = next.weights.sum();
    if (!(total > 0.0))
        throw ParticleCollapse("pmc: all importance weights vanished", -1);
    next.weights /= total;
    Eigen::VectorXd floor_vec =
        1e-12 * model.prior.range_proxy().array().square().matrix();
    next.kernel_cov =
        2.0 * weighted_covariance(next.particles, next.weights, floor_vec);
    if (calls_out)
        *calls_out = std::accumulate(calls.begin(), calls.end(), std::uint64_t{0});
    return next;
}

PmcResult abc_pmc(const Model& model, const PmcConfig& cfg, RngStream rng,
                  unsigned workers) {
    if (cfg.n_particles == 0) throw ConfigError("pmc: n_particles must be positive");
    const bool adaptive = cfg.epsilons.empty();
    if (adaptive) {
        if (cfg.n_iterations == 0)
            throw ConfigError("pmc: adaptive mode needs n_iterations");
        if (!(cfg.epsilon1 > 0.0))
            throw ConfigError("pmc: adaptive mode needs epsilon1 > 0");
        if (!(cfg.quantile > 0.0 && cfg.quantile < 1.0))
            throw ConfigError("pmc: quantile must lie in (0, 1)");
    } else {
        for (std::size_t t = 1; t < cfg.epsilons.size(); ++t)
            if (!(cfg.epsilons[t] < cfg.epsilons[t - 1]))
                throw ConfigError("pmc: explicit tolerance schedule must decrease");
    }
    const std::size_t T = adaptive ? cfg.n_iterations : cfg.epsilons.size();
    const Eigen::Index p = model.dim();
    const std::size_t n = cfg.n_particles;

    PmcResult res;
    double eps = adaptive ? cfg.epsilon1 : cfg.epsilons[0];

    // Generation 1 is plain rejection at eps with uniform weights.
    ParticlePopulation pop;
    {
        pop.particles.resize(n, p);
        pop.distances.resize(static_cast<Eigen::Index>(n));
        std::vector<std::uint64_t> calls(n, 0);
        RngStream gen_rng = rng.child(1);
        parallel_for(n, workers, [&](std::size_t j) {
            RngStream slot = gen_rng.child(j);
            for (std::uint64_t a = 0; a < cfg.max_attempts_per_particle; ++a) {
                RngStream attempt = slot.child(a);
                Eigen::VectorXd theta = model.prior.sample(attempt);
                double d = model.discrepancy(theta, attempt);
                ++calls[j];
                if (d <= eps) {
                    pop.particles.row(static_cast<Eigen::Index>(j)) = theta;
                    pop.distances[static_cast<Eigen::Index>(j)] = d;
                    return;
                }
            }
            throw AttemptBudgetExceeded("pmc: particle " + std::to_string(j) +
                                        " exhausted attempt budget in generation 1");
        });
        pop.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                                1.0 / static_cast<double>(n));
        Eigen::VectorXd floor_vec =
            1e-12 * model.prior.range_proxy().array().square().matrix();
        pop.kernel_cov = 2.0 * weighted_covariance(pop.particles, pop.weights, floor_vec);
        res.epsilon_used.push_back(eps);
        res.calls_per_iteration.push_back(
            std::accumulate(calls.begin(), calls.end(), std::uint64_t{0}));
    }

    for (std::size_t t = 2; t <= T; ++t) {
        double next_eps;
        if (adaptive) {
            next_eps = adaptive_next_epsilon(pop.distances, cfg.quantile);
            if (!(next_eps < eps)) {
                res.stopped_early = true;
                break;
            }
        } else {
            next_eps = cfg.epsilons[t - 1];
        }
        std::uint64_t calls = 0;
        pop = pmc_step(model, pop, next_eps, rng.child(t), cfg.max_attempts_per_particle,
                       workers, &calls);
        eps = next_eps;
        res.epsilon_used.push_back(eps);
        res.calls_per_iteration.push_back(calls);
    }

    res.population = std::move(pop);
    res.simulator_calls = std::accumulate(res.calls_per_iteration.begin(),
                                          res.calls_per_iteration.end(),
                                          std::uint64_t{0});
    return res;
}

} // namespace lfikit
