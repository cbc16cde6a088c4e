#include "lfikit/rng.hpp"

#include <cassert>
#include <cmath>

#include "lfikit/special.hpp"

namespace lfikit {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream RngStream::child(std::uint64_t index) const {
    // Mix the index through splitmix64 before combining so that adjacent
    // indices land far apart, then finalize once more.
    return RngStream(splitmix64(seed_ ^ splitmix64(0xA24BAED4963EE407ULL + index)));
}

double RngStream::uniform01() {
    // Top 53 bits, offset by half an ulp: values lie strictly inside (0, 1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

double RngStream::normal01() {
    return norm_quantile(uniform01());
}

double RngStream::normal(double mean, double sd) {
    return mean + sd * normal01();
}

double RngStream::gamma(double shape, double scale) {
    assert(shape > 0.0 && scale > 0.0);
    if (shape < 1.0) {
        double u = uniform01();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal01();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = uniform01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double RngStream::truncated_normal(double mean, double sd, double lo, double hi) {
    assert(lo < hi && sd >= 0.0);
    if (sd == 0.0) {
        double x = mean;
        return x < lo ? lo : (x > hi ? hi : x);
    }
    double a = norm_cdf((lo - mean) / sd);
    double b = norm_cdf((hi - mean) / sd);
    if (b <= a) {
        // Truncation interval carries no resolvable mass; both endpoints map
        // to the same CDF value. Return the closer boundary.
        return (lo - mean > 0.0) ? lo : hi;
    }
    double u = a + (b - a) * uniform01();
    double x = mean + sd * norm_quantile(u);
    return x < lo ? lo : (x > hi ? hi : x);
}

std::size_t RngStream::categorical(const double* weights, std::size_t n) {
    assert(n > 0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += weights[i];
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += weights[i];
        if (u <= acc) return i;
    }
    return n - 1;
}

} // namespace lfikit
