#include "lfikit/distance.hpp"

#include <cmath>
#include <limits>

#include "lfikit/errors.hpp"

namespace lfikit {

double DistanceFn::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    if (a.size() != b.size())
        throw ConfigError("distance: summary vectors differ in length");
    switch (kind) {
        case DistanceKind::Euclidean:
            return (a - b).norm();
        case DistanceKind::LogEuclidean: {
            double d = (a - b).norm();
            if (d == 0.0) return -std::numeric_limits<double>::infinity();
            return std::log(d);
        }
        case DistanceKind::WeightedSquared: {
            if (weights.size() != a.size())
                throw ConfigError("distance: weight vector length mismatch");
            double total = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                double diff = a[i] - b[i];
                total += diff * diff / (2.0 * weights[i] * weights[i]);
            }
            return total;
        }
    }
    return 0.0;
}

} // namespace lfikit
