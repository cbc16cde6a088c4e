#include "lfikit/samples.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "lfikit/errors.hpp"

namespace lfikit {

namespace {

// Sort order of x carrying weights along.
std::vector<std::size_t> sort_order(const Eigen::VectorXd& x) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(x.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&x](std::size_t a, std::size_t b) { return x[static_cast<Eigen::Index>(a)] < x[static_cast<Eigen::Index>(b)]; });
    return idx;
}

} // namespace

double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    assert(x.size() == w.size() && x.size() > 0);
    double total = w.sum();
    return x.dot(w) / total;
}

double weighted_quantile(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double q) {
    assert(x.size() == w.size() && x.size() > 0);
    assert(q >= 0.0 && q <= 1.0);
    auto idx = sort_order(x);
    const double total = w.sum();
    double cum = 0.0;
    double prev_mid = 0.0;
    double prev_x = x[static_cast<Eigen::Index>(idx[0])];
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double wi = w[static_cast<Eigen::Index>(idx[k])] / total;
        double mid = cum + 0.5 * wi;
        double xi = x[static_cast<Eigen::Index>(idx[k])];
        if (q <= mid) {
            if (k == 0) return xi;
            double t = (q - prev_mid) / (mid - prev_mid);
            return prev_x + t * (xi - prev_x);
        }
        cum += wi;
        prev_mid = mid;
        prev_x = xi;
    }
    return x[static_cast<Eigen::Index>(idx.back())];
}

std::pair<double, double> hpd_interval(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                       double mass) {
    assert(x.size() == w.size() && x.size() > 0);
    if (!(mass > 0.0 && mass <= 1.0))
        throw ConfigError("hpd_interval: mass must lie in (0, 1]");
    auto idx = sort_order(x);
    const std::size_t n = idx.size();
    std::vector<double> xs(n), cw(n + 1, 0.0);
    const double total = w.sum();
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = x[static_cast<Eigen::Index>(idx[k])];
        cw[k + 1] = cw[k] + w[static_cast<Eigen::Index>(idx[k])] / total;
    }
    // Guard against rounding keeping cw.back() fractionally below `mass`.
    const double target = std::min(mass, cw[n]) - 1e-12;
    double best_lo = xs.front(), best_hi = xs.back();
    double best_width = best_hi - best_lo;
    bool found = false;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) j = i;
        while (j < n && cw[j + 1] - cw[i] < target) ++j;
        if (j >= n) break;
        double width = xs[j] - xs[i];
        if (!found || width < best_width) {
            found = true;
            best_width = width;
            best_lo = xs[i];
            best_hi = xs[j];
        }
    }
    return {best_lo, best_hi};
}

std::vector<std::size_t> resample_indices(const Eigen::VectorXd& weights, std::size_t n,
                                          RngStream& rng) {
    std::vector<double> cum(static_cast<std::size_t>(weights.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cum[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<std::size_t> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double u = rng.uniform01() * acc;
        out[k] = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (out[k] >= cum.size()) out[k] = cum.size() - 1;
    }
    return out;
}

} // namespace lfikit
