#pragma once

#include <Eigen/Core>

namespace lfikit {

enum class DistanceKind {
    Euclidean,
    // log of the Euclidean distance; -inf at exact equality, which callers
    // treat as the global minimum.
    LogEuclidean,
    // sum_i (a_i - b_i)^2 / (2 w_i^2) with per-channel weights w.
    WeightedSquared,
};

struct DistanceFn {
    DistanceKind kind = DistanceKind::Euclidean;
    Eigen::VectorXd weights; // WeightedSquared only

    static DistanceFn euclidean() { return {DistanceKind::Euclidean, {}}; }
    static DistanceFn log_euclidean() { return {DistanceKind::LogEuclidean, {}}; }
    static DistanceFn weighted_squared(Eigen::VectorXd w) {
        return {DistanceKind::WeightedSquared, std::move(w)};
    }

    double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

} // namespace lfikit
