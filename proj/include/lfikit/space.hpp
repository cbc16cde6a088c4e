#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "lfikit/errors.hpp"

namespace lfikit {

// Axis-aligned box of parameter values; the surrogate optimization region.
struct BoundedSpace {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    BoundedSpace() = default;
    BoundedSpace(Eigen::VectorXd lo, Eigen::VectorXd hi)
        : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size() || lower.size() == 0)
            throw ConfigError("space: bound vectors must share a positive length");
        for (Eigen::Index j = 0; j < lower.size(); ++j) {
            if (!(lower[j] < upper[j]) || !std::isfinite(lower[j]) || !std::isfinite(upper[j]))
                throw ConfigError("space: bounds must be finite with lower < upper");
        }
    }

    Eigen::Index dim() const { return lower.size(); }

    bool contains(const Eigen::VectorXd& x) const {
        for (Eigen::Index j = 0; j < lower.size(); ++j)
            if (x[j] < lower[j] || x[j] > upper[j]) return false;
        return true;
    }

    Eigen::VectorXd clamp(Eigen::VectorXd x) const {
        for (Eigen::Index j = 0; j < lower.size(); ++j)
            x[j] = std::min(std::max(x[j], lower[j]), upper[j]);
        return x;
    }

    Eigen::VectorXd range() const { return upper - lower; }
};

} // namespace lfikit
