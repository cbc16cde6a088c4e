#include "lfikit/prior.hpp"

#include <cmath>
#include <limits>

#include "lfikit/errors.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const PriorComponent& c) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, dist::Uniform>) {
                if (!(d.lo < d.hi)) throw ConfigError("uniform prior: lo must be < hi");
            } else if constexpr (std::is_same_v<T, dist::Normal>) {
                if (!(d.variance > 0.0)) throw ConfigError("normal prior: variance must be > 0");
            } else if constexpr (std::is_same_v<T, dist::TruncatedNormal>) {
                if (!(d.variance > 0.0))
                    throw ConfigError("truncated normal prior: variance must be > 0");
                if (!(d.lo < d.hi))
                    throw ConfigError("truncated normal prior: lo must be < hi");
            } else if constexpr (std::is_same_v<T, dist::Gamma>) {
                if (!(d.shape > 0.0) || !(d.scale > 0.0))
                    throw ConfigError("gamma prior: shape and scale must be > 0");
            }
        },
        c);
}

} // namespace

Prior::Prior(std::vector<PriorComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("prior: needs at least one component");
    for (const auto& c : components_) validate(c);
}

double component_logpdf(const PriorComponent& c, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, dist::Uniform>) {
                if (x < d.lo || x > d.hi) return kNegInf;
                return -std::log(d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, dist::Normal>) {
                double s = std::sqrt(d.variance);
                return norm_logpdf((x - d.mean) / s) - std::log(s);
            } else if constexpr (std::is_same_v<T, dist::TruncatedNormal>) {
                if (x < d.lo || x > d.hi) return kNegInf;
                double s = std::sqrt(d.variance);
                double mass =
                    norm_cdf((d.hi - d.mean) / s) - norm_cdf((d.lo - d.mean) / s);
                return norm_logpdf((x - d.mean) / s) - std::log(s) - std::log(mass);
            } else {
                return gamma_logpdf(x, d.shape, d.scale);
            }
        },
        c);
}

double component_sample(const PriorComponent& c, RngStream& rng) {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, dist::Uniform>) {
                return rng.uniform(d.lo, d.hi);
            } else if constexpr (std::is_same_v<T, dist::Normal>) {
                return rng.normal(d.mean, std::sqrt(d.variance));
            } else if constexpr (std::is_same_v<T, dist::TruncatedNormal>) {
                return rng.truncated_normal(d.mean, std::sqrt(d.variance), d.lo, d.hi);
            } else {
                return rng.gamma(d.shape, d.scale);
            }
        },
        c);
}

Eigen::VectorXd Prior::sample(RngStream& rng) const {
    Eigen::VectorXd theta(dim());
    for (Eigen::Index j = 0; j < dim(); ++j)
        theta[j] = component_sample(components_[static_cast<std::size_t>(j)], rng);
    return theta;
}

double Prior::logpdf(const Eigen::VectorXd& theta) const {
    double total = 0.0;
    for (Eigen::Index j = 0; j < dim(); ++j) {
        total += component_logpdf(components_[static_cast<std::size_t>(j)], theta[j]);
        if (total == kNegInf) return kNegInf;
    }
    return total;
}

bool Prior::in_support(const Eigen::VectorXd& theta) const {
    return logpdf(theta) > kNegInf;
}

Eigen::VectorXd Prior::range_proxy() const {
    Eigen::VectorXd r(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) {
        r[j] = std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Uniform>) {
                    return d.hi - d.lo;
                } else if constexpr (std::is_same_v<T, dist::Normal>) {
                    return 6.0 * std::sqrt(d.variance);
                } else if constexpr (std::is_same_v<T, dist::TruncatedNormal>) {
                    return d.hi - d.lo;
                } else {
                    return d.shape * d.scale + 6.0 * std::sqrt(d.shape) * d.scale;
                }
            },
            components_[static_cast<std::size_t>(j)]);
    }
    return r;
}

} // namespace lfikit
