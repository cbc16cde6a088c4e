#include "lfikit/rejection.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lfikit/errors.hpp"
#include "lfikit/parallel.hpp"

namespace lfikit {

WeightedSample rejection_abc(const Model& model, std::size_t n_accept, double epsilon,
                             RngStream rng, std::uint64_t max_attempts,
                             unsigned workers) {
    if (n_accept == 0) throw ConfigError("rejection: n_accept must be positive");
    if (epsilon < 0.0) throw ConfigError("rejection: epsilon must be nonnegative");
    const Eigen::Index p = model.dim();
    Eigen::MatrixXd draws(n_accept, p);
    Eigen::VectorXd dist(n_accept);
    std::vector<std::uint64_t> attempts(n_accept, 0);

    parallel_for(n_accept, workers, [&](std::size_t i) {
        RngStream slot = rng.child(i);
        for (std::uint64_t k = 0; k < max_attempts; ++k) {
            RngStream attempt = slot.child(k);
            Eigen::VectorXd theta = model.prior.sample(attempt);
            double d = model.discrepancy(theta, attempt);
            ++attempts[i];
            if (d <= epsilon) {
                draws.row(static_cast<Eigen::Index>(i)) = theta;
                dist[static_cast<Eigen::Index>(i)] = d;
                return;
            }
        }
        throw AttemptBudgetExceeded("rejection: slot " + std::to_string(i) +
                                    " exhausted " + std::to_string(max_attempts) +
                                    " attempts at epsilon " + std::to_string(epsilon));
    });

    WeightedSample out;
    out.draws = std::move(draws);
    out.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_accept),
                                            1.0 / static_cast<double>(n_accept));
    out.distances = std::move(dist);
    out.simulator_calls = std::accumulate(attempts.begin(), attempts.end(),
                                          std::uint64_t{0});
    return out;
}

WeightedSample nn_rejection(const Model& model, std::size_t n_total,
                            double accept_fraction, RngStream rng, unsigned workers) {
    if (n_total == 0) throw ConfigError("nn rejection: n_total must be positive");
    if (!(accept_fraction > 0.0 && accept_fraction <= 1.0))
        throw ConfigError("nn rejection: accept_fraction must lie in (0, 1]");
    const Eigen::Index p = model.dim();
    Eigen::MatrixXd all(n_total, p);
    Eigen::VectorXd dist(n_total);

    parallel_for(n_total, workers, [&](std::size_t i) {
        RngStream attempt = rng.child(i);
        Eigen::VectorXd theta = model.prior.sample(attempt);
        all.row(static_cast<Eigen::Index>(i)) = theta;
        dist[static_cast<Eigen::Index>(i)] = model.discrepancy(theta, attempt);
    });

    std::size_t keep = static_cast<std::size_t>(
        static_cast<double>(n_total) * accept_fraction);
    keep = std::max<std::size_t>(keep, 1);
    keep = std::min(keep, n_total);

    std::vector<std::size_t> order(n_total);
    std::iota(order.begin(), order.end(), 0);
    // stable sort on distance: ties keep draw order
    std::stable_sort(order.begin(), order.end(), [&dist](std::size_t a, std::size_t b) {
        return dist[static_cast<Eigen::Index>(a)] < dist[static_cast<Eigen::Index>(b)];
    });

    WeightedSample out;
    out.draws.resize(keep, p);
    out.distances.resize(keep);
    for (std::size_t k = 0; k < keep; ++k) {
        out.draws.row(static_cast<Eigen::Index>(k)) =
            all.row(static_cast<Eigen::Index>(order[k]));
        out.distances[static_cast<Eigen::Index>(k)] =
            dist[static_cast<Eigen::Index>(order[k])];
    }
    out.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(keep),
                                            1.0 / static_cast<double>(keep));
    out.simulator_calls = n_total;
    return out;
}

} // namespace lfikit
