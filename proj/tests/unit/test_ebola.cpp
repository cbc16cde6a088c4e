#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lfikit/errors.hpp"
#include "lfikit/rng.hpp"
#include "lfikit/sim_ebola.hpp"
#include "test_support.hpp"

using namespace lfikit;

TEST_SUITE("ebola") {

TEST_CASE("configured stage durations match their documented means") {
    EbolaConfig ec;
    CHECK(ec.latent_shape * ec.latent_scale == doctest::Approx(10.0));
    CHECK(ec.death_shape * ec.death_scale == doctest::Approx(4.0));
    CHECK(ec.infectious_shape * ec.infectious_scale ==
          doctest::Approx(ec.mean_infectious));
    // Per-step transmission probability dt * r0 / mean infectious duration.
    CHECK(ec.dt * 2.0 / ec.mean_infectious == doctest::Approx(0.08));
}

TEST_CASE("case series is cumulative, positive, and seed-deterministic") {
    EbolaConfig ec;
    auto a = ebola_simulate(ec, 1.7, RngStream(5));
    auto b = ebola_simulate(ec, 1.7, RngStream(5));
    REQUIRE(!a.counts.empty());
    CHECK(a.counts.front() >= 1);
    for (std::size_t i = 1; i < a.counts.size(); ++i)
        CHECK(a.counts[i] >= a.counts[i - 1]);
    CHECK(a.first_day == b.first_day);
    REQUIRE(a.counts.size() == b.counts.size());
    CHECK(a.counts == b.counts);
}

TEST_CASE("full run resolves every terminal individual consistently") {
    EbolaRun run = ebola_simulate_full(EbolaConfig{}, 1.7, RngStream(19));
    CHECK(run.n_infected >= 1);
    CHECK(run.n_recovered + run.n_perished <= run.n_infected);
    CHECK(!run.series.counts.empty());
}

TEST_CASE("alignment with a zero threshold starts at the first case day") {
    EbolaConfig ec;
    RngStream r(7);
    auto w = align_to_observed(ec, 1.7, 0, 5, r);
    REQUIRE(w.size() == 5);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] >= w[i - 1]);
    // The first accepted epidemic is replayable from the same child stream.
    auto s0 = ebola_simulate(ec, 1.7, r.child(0));
    std::size_t j = 0;
    while (j < s0.counts.size() && s0.counts[j] <= 0) ++j;
    REQUIRE(j < s0.counts.size());
    CHECK(w[0] == s0.counts[j]);
}

TEST_CASE("alignment window starts past the observed count") {
    EbolaConfig ec;
    std::uint64_t calls = 0;
    auto w = align_to_observed(ec, 1.9, 30, 12, RngStream(48), 1000, &calls);
    REQUIRE(w.size() == 12);
    CHECK(w[0] > 30);
    CHECK(calls >= 1);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] >= w[i - 1]);
}

TEST_CASE("alignment gives up after the retry cap") {
    EbolaConfig ec;
    try {
        align_to_observed(ec, 1.05, 10000, 9, RngStream(47));
        FAIL("expected AlignmentFailed");
    } catch (const AlignmentFailed& e) {
        CHECK(e.retries == 1000);
    }
    std::uint64_t calls = 0;
    try {
        align_to_observed(ec, 1.05, 10000, 9, RngStream(47), 5, &calls);
        FAIL("expected AlignmentFailed");
    } catch (const AlignmentFailed& e) {
        CHECK(e.retries == 5);
        CHECK(calls == 5);
    }
}

TEST_CASE("summary statistic closed forms") {
    const double e1 = std::exp(1.0);
    CHECK(ebola_summary({1.0, e1, e1 * e1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ebola_summary({7.0, 7.0, 7.0, 7.0}) == 0.0);
    // Two slopes {0, 2}: the median is their midpoint.
    CHECK(ebola_summary({1.0, 1.0, e1 * e1}) == doctest::Approx(1.0).epsilon(1e-12));
    // Counts below one clamp to one before the log.
    CHECK(ebola_summary({0.0, e1}) == doctest::Approx(1.0).epsilon(1e-12));

    const double rate = 0.37;
    std::vector<double> expo(7);
    for (int t = 0; t < 7; ++t) expo[t] = std::exp(rate * t);
    CHECK(ebola_summary(expo) == doctest::Approx(rate).epsilon(1e-12));

    CHECK_THROWS_AS(ebola_summary({1.0}), ConfigError);
}

TEST_CASE("serial-interval weights follow the discretized gamma") {
    auto w = serial_interval_weights(60);
    REQUIRE(w.size() == 60);
    for (double v : w) CHECK(v >= 0.0);
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(total < 1.0);
    CHECK(total > 0.99);
    // Partial sums are gamma CDF values at integer days.
    CHECK(total == doctest::Approx(0.99821025404166).epsilon(1e-9));
    double first12 = std::accumulate(w.begin(), w.begin() + 12, 0.0);
    CHECK(first12 == doctest::Approx(0.459975792069922).epsilon(1e-9));
}

TEST_CASE("incidence log-likelihood hand cases") {
    // One history day with unit weight: rate is exactly r0; observing zero
    // new cases gives log pmf = -r0.
    std::vector<std::int64_t> inc = {1, 0};
    std::vector<double> unit = {1.0};
    CHECK(team_wer_loglik(inc, 0.7, 1, unit) ==
          doctest::Approx(-0.7).epsilon(1e-12));
    // Zero reproduction number and an empty epidemic: the floored rates
    // contribute only ~1e-12 each.
    std::vector<std::int64_t> zeros = {0, 0, 0};
    auto w = serial_interval_weights(10);
    CHECK(team_wer_loglik(zeros, 0.0, 2, w) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(team_wer_loglik(inc, -1.0, 1, unit), ConfigError);
    CHECK_THROWS_AS(team_wer_loglik(inc, 0.7, 5, unit), ConfigError);
}

} // TEST_SUITE
