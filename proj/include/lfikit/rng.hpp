#pragma once

#include <cstdint>
#include <random>

namespace lfikit {

// 64-bit finalizer from the splitmix64 generator. Good avalanche; used to
// derive child stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic seeded stream with counter-based splitting.
//
// child(i) derives a stream from the parent's *seed* (not its evolved state),
// so the family of streams a task tree sees depends only on the root seed and
// the task indices, never on how much randomness any stream consumed or on
// which thread ran it. Same seed + same index => identical stream.
//
// All variate generation is implemented on top of the raw 64-bit output of
// std::mt19937_64 (whose sequence the standard pins down exactly), so results
// are reproducible across platforms and toolchains.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on the open interval (0, 1); 53-bit resolution, never 0 or 1,
    // so inverse-CDF transforms stay finite.
    double uniform01();

    double uniform(double a, double b);

    // Standard normal via the inverse CDF; one uniform consumed per draw.
    double normal01();

    double normal(double mean, double sd);

    // Gamma(shape, scale), shape > 0, via the Marsaglia-Tsang squeeze with the
    // usual power boost for shape < 1.
    double gamma(double shape, double scale);

    // Truncated normal on [lo, hi] via inverse CDF: exact, one uniform per draw.
    double truncated_normal(double mean, double sd, double lo, double hi);

    // Index into a discrete distribution given by nonnegative weights
    // (not necessarily normalized).
    std::size_t categorical(const double* weights, std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

} // namespace lfikit
