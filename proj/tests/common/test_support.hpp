#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfikit/model.hpp"
#include "lfikit/prior.hpp"
#include "lfikit/rng.hpp"
#include "lfikit/space.hpp"

namespace testsupport {

// Scalar location model with a closed-form Gaussian check: theta ~ N(0,1),
// simulated observation theta + N(0,1) compared against y_obs. At y_obs = 0
// and small tolerance the target distribution tends to N(0, 1/2).
inline lfikit::Model toy_model(double y_obs = 0.0) {
    lfikit::Model m;
    m.prior = lfikit::Prior({lfikit::PriorComponent{lfikit::dist::Normal{0.0, 1.0}}});
    Eigen::VectorXd lo(1), hi(1);
    lo << -3.0;
    hi << 3.0;
    m.space = lfikit::BoundedSpace(lo, hi);
    m.discrepancy = [y_obs](const Eigen::VectorXd& th, lfikit::RngStream& r) {
        return std::abs(th[0] + r.normal01() - y_obs);
    };
    m.param_names = {"theta"};
    return m;
}

inline double sample_var(const Eigen::VectorXd& x) {
    double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

inline double sample_var(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double sample_mean(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    return m / static_cast<double>(x.size());
}

// Unique scratch directory under the system temp dir; removed on destruction.
struct ScratchDir {
    std::filesystem::path path;

    ScratchDir() {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path = base / ("lfikit-test-" +
                       std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffffu) +
                       "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Kolmogorov–Smirnov distance between a sample and a reference CDF.
template <typename Cdf>
double ks_distance(std::vector<double> x, Cdf cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = cdf(x[i]);
        worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / na -
                                         static_cast<double>(j) / nb));
    }
    return worst;
}

// Pearson lag-1 autocorrelation.
inline double lag1_autocorr(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double m = sample_mean(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        den += (x[i] - m) * (x[i] - m);
        if (i + 1 < n) num += (x[i] - m) * (x[i + 1] - m);
    }
    return num / den;
}

inline double skewness(const std::vector<double>& x) {
    double m = sample_mean(x);
    double s2 = 0.0, s3 = 0.0;
    for (double v : x) {
        double d = v - m;
        s2 += d * d;
        s3 += d * d * d;
    }
    const double n = static_cast<double>(x.size());
    s2 /= n;
    s3 /= n;
    return s3 / std::pow(s2, 1.5);
}

} // namespace testsupport
