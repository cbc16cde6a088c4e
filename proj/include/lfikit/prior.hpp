#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "lfikit/rng.hpp"

namespace lfikit {

namespace dist {

struct Uniform {
    double lo, hi; // lo < hi
};

struct Normal {
    double mean, variance; // variance > 0
};

// Normal(mean, variance) renormalized to [lo, hi].
struct TruncatedNormal {
    double mean, variance, lo, hi;
};

struct Gamma {
    double shape, scale; // both > 0
};

} // namespace dist

using PriorComponent =
    std::variant<dist::Uniform, dist::Normal, dist::TruncatedNormal, dist::Gamma>;

// Product prior over independent scalar components.
class Prior {
public:
    Prior() = default;
    explicit Prior(std::vector<PriorComponent> components);

    Eigen::Index dim() const { return static_cast<Eigen::Index>(components_.size()); }
    const std::vector<PriorComponent>& components() const { return components_; }

    Eigen::VectorXd sample(RngStream& rng) const;
    double logpdf(const Eigen::VectorXd& theta) const;
    bool in_support(const Eigen::VectorXd& theta) const;

    // Finite spread proxy per component, used to floor degenerate kernel
    // covariances: exact range for bounded components, a 6-sigma width for
    // unbounded ones.
    Eigen::VectorXd range_proxy() const;

private:
    std::vector<PriorComponent> components_;
};

double component_logpdf(const PriorComponent& c, double x);
double component_sample(const PriorComponent& c, RngStream& rng);

} // namespace lfikit
