#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lfikit/csv.hpp"
#include "lfikit/errors.hpp"
#include "lfikit/prior.hpp"
#include "lfikit/rng.hpp"
#include "lfikit/samples.hpp"
#include "lfikit/special.hpp"
#include "lfikit/distance.hpp"

#include "test_support.hpp"

using namespace lfikit;
namespace ts = testsupport;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
    RngStream a(42), b(42);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c = RngStream(42).child(3);
    RngStream d = RngStream(42).child(3);
    for (int i = 0; i < 16; ++i) CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("child streams differ from each other and the parent") {
    RngStream root(7);
    RngStream c0 = root.child(0);
    RngStream c1 = root.child(1);
    CHECK(c0.next_u64() != c1.next_u64());
    CHECK(RngStream(7).next_u64() != RngStream(7).child(0).next_u64());
}

TEST_CASE("child derivation does not consume parent state") {
    RngStream a(11), b(11);
    (void)a.child(5);
    (void)a.child(6);
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform01 lies strictly inside (0,1)") {
    RngStream r(1);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform(a,b) respects its range") {
    RngStream r(2);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform(2.0, 5.0);
        CHECK(u >= 2.0);
        CHECK(u < 5.0);
    }
}

TEST_CASE("normal01 moments at 1e5 draws") {
    RngStream r(3);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = r.normal01();
        s += x;
        s2 += x * x;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.015);     // ~4.7 sigma of the MC error
    CHECK(std::abs(var - 1.0) < 0.02); // ~4.5 sigma
}

TEST_CASE("gamma(2,5) sample mean near 10 at 1e5 draws") {
    RngStream r(8);
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.gamma(2.0, 5.0);
    CHECK(std::abs(s / n - 10.0) < 0.2);
}

TEST_CASE("truncated normal stays inside its bounds") {
    RngStream r(4);
    for (int i = 0; i < 10000; ++i) {
        double x = r.truncated_normal(1.7, std::sqrt(0.5), 1.05, 4.0);
        CHECK(x >= 1.05);
        CHECK(x <= 4.0);
    }
}

TEST_CASE("categorical with a single positive weight is deterministic") {
    RngStream r(5);
    const double w[3] = {0.0, 2.0, 0.0};
    for (int i = 0; i < 1000; ++i) CHECK(r.categorical(w, 3) == 1);
}

} // TEST_SUITE("rng")

TEST_SUITE("special") {

TEST_CASE("normal quantile against reference values") {
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(0.0));
    CHECK(norm_quantile(0.025) == doctest::Approx(-1.95996398454005).epsilon(1e-12));
    CHECK(norm_quantile(0.75) == doctest::Approx(0.674489750196082).epsilon(1e-12));
    CHECK(norm_quantile(1e-10) == doctest::Approx(-6.36134090240406).epsilon(1e-10));
    for (double p : {0.01, 0.2, 0.37, 0.44}) {
        CHECK(norm_quantile(p) == doctest::Approx(-norm_quantile(1.0 - p)).epsilon(1e-12));
    }
}

TEST_CASE("normal cdf/logcdf reference values and far-tail stability") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(-20.0) == doctest::Approx(2.75362411860616e-89).epsilon(1e-8));
    CHECK(norm_logcdf(-20.0) == doctest::Approx(-203.917155371097).epsilon(1e-10));
    CHECK(norm_logcdf(2.0) == doctest::Approx(-0.0230129093289635).epsilon(1e-12));
    double deep = norm_logcdf(-400.0);
    CHECK(std::isfinite(deep));
    CHECK(deep < -70000.0);
    for (double p : {1e-6, 1e-3, 0.1, 0.5, 0.9}) {
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("normal pdf/logpdf at zero") {
    CHECK(norm_pdf(0.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(norm_logpdf(0.0) == doctest::Approx(-0.9189385332046727).epsilon(1e-15));
}

TEST_CASE("gamma cdf and logpdf reference values") {
    CHECK(gamma_cdf(3.0, 2.0, 5.0) == doctest::Approx(0.121901382249558).epsilon(1e-10));
    // Gamma(2,5) density at 10: exp(-2) * 10 / 25.
    double expect = -10.0 / 5.0 + std::log(10.0 / 25.0);
    CHECK(gamma_logpdf(10.0, 2.0, 5.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(gamma_p(2.0, 3.0 / 5.0) == doctest::Approx(gamma_cdf(3.0, 2.0, 5.0)).epsilon(1e-14));
}

TEST_CASE("adaptive simpson on smooth integrands") {
    double a = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-10);
    CHECK(a == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    double b = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                std::numbers::pi, 1e-10);
    CHECK(b == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("quantile interpolates at rank 1 + q(n-1)") {
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(quantile_sorted(v, 0.75) == doctest::Approx(7.75).epsilon(1e-15));
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 10.0);
    CHECK(quantile_sorted({5.0}, 0.3) == 5.0);
    CHECK(quantile_sorted({2.0, 2.0, 2.0}, 0.9) == 2.0);
    CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5).epsilon(1e-15));
}

} // TEST_SUITE("special")

TEST_SUITE("prior") {

TEST_CASE("component log densities") {
    CHECK(component_logpdf(dist::Uniform{0.0, 2.0}, 1.0) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(component_logpdf(dist::Uniform{0.0, 2.0}, 2.5) == -kInf);
    CHECK(component_logpdf(dist::Normal{0.0, 1.0}, 0.0) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-15));
    CHECK(component_logpdf(dist::TruncatedNormal{0.0, 1.0, -1.0, 1.0}, 2.0) == -kInf);
    // Inside the truncation the density exceeds the untruncated normal's.
    CHECK(component_logpdf(dist::TruncatedNormal{0.0, 1.0, -1.0, 1.0}, 0.0) >
          norm_logpdf(0.0));
}

TEST_CASE("truncated normal prior samples stay inside support") {
    dist::TruncatedNormal tn{1.7, 0.5, 1.05, 4.0};
    RngStream r(6);
    for (int i = 0; i < 10000; ++i) {
        double x = component_sample(PriorComponent{tn}, r);
        CHECK(x >= 1.05);
        CHECK(x <= 4.0);
    }
}

TEST_CASE("gamma prior mean at 1e5 draws") {
    Prior p({PriorComponent{dist::Gamma{2.0, 5.0}}});
    RngStream r(9);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += p.sample(r)[0];
    CHECK(std::abs(s / n - 10.0) < 0.2);
}

TEST_CASE("product prior sums component log densities") {
    Prior p({PriorComponent{dist::Uniform{0.0, 2.0}},
             PriorComponent{dist::Normal{0.0, 1.0}}});
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    CHECK(p.dim() == 2);
    CHECK(p.logpdf(x) ==
          doctest::Approx(std::log(0.5) - 0.9189385332046727).epsilon(1e-12));
    CHECK(p.in_support(x));
    x << 3.0, 0.0;
    CHECK_FALSE(p.in_support(x));
    CHECK(p.logpdf(x) == -kInf);
}

TEST_CASE("range proxy: exact range when bounded, 6 sigma when not") {
    Prior p({PriorComponent{dist::Uniform{0.0, 2.0}},
             PriorComponent{dist::Normal{0.0, 1.0}}});
    Eigen::VectorXd proxy = p.range_proxy();
    CHECK(proxy[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(proxy[1] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("sampled densities match a kernel density estimate") {
    // For each prior shape: 1e5 draws, Gaussian KDE with bandwidth
    // 1.06 sd n^{-1/5}, sup-norm against the analytic density over an
    // interior grid must stay below 0.05.
    struct Case {
        PriorComponent comp;
        double grid_lo, grid_hi;
    };
    std::vector<Case> cases{
        {PriorComponent{dist::Uniform{0.0, 1.0}}, 0.1, 0.9},
        {PriorComponent{dist::Normal{0.0, 1.0}}, -2.5, 2.5},
        {PriorComponent{dist::TruncatedNormal{1.7, 0.5, 1.05, 4.0}}, 1.3, 3.0},
        {PriorComponent{dist::Gamma{2.0, 5.0}}, 2.0, 25.0},
    };
    const int n = 100000;
    for (const auto& c : cases) {
        RngStream r(42);
        std::vector<double> draws(n);
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            draws[i] = component_sample(c.comp, r);
            s += draws[i];
            s2 += draws[i] * draws[i];
        }
        double sd = std::sqrt(s2 / n - (s / n) * (s / n));
        double bw = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
        double sup = 0.0;
        const int grid_n = 61;
        for (int g = 0; g < grid_n; ++g) {
            double x = c.grid_lo + (c.grid_hi - c.grid_lo) * g / (grid_n - 1);
            double kde = 0.0;
            for (double d : draws) kde += norm_pdf((x - d) / bw);
            kde /= n * bw;
            sup = std::max(sup, std::abs(kde - std::exp(component_logpdf(c.comp, x))));
        }
        CAPTURE(sup);
        CHECK(sup < 0.05);
    }
}

} // TEST_SUITE("prior")

TEST_SUITE("distance") {

TEST_CASE("euclidean distance") {
    DistanceFn d = DistanceFn::euclidean();
    Eigen::VectorXd a(2), b(2);
    a << 3.0, 4.0;
    b << 0.0, 0.0;
    CHECK(d(a, b) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(d(a, a) == 0.0);
}

TEST_CASE("variance-weighted squared distance") {
    Eigen::VectorXd w(1);
    w << 1.0;
    DistanceFn d = DistanceFn::weighted_squared(w);
    Eigen::VectorXd a(1), b(1);
    a << 2.0;
    b << 0.0;
    // Sum of squared deviations over twice the per-bin variance: 4 / 2 = 2.
    CHECK(d(a, b) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d(b, a) == doctest::Approx(d(a, b)).epsilon(0.0));
    // Quadrupling the variances scales the distance down by 4.
    DistanceFn d4 = DistanceFn::weighted_squared(4.0 * w);
    CHECK(d4(a, b) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("weighted squared distance is symmetric on random vectors") {
    RngStream r(10);
    Eigen::VectorXd w(5), a(5), b(5);
    for (int i = 0; i < 5; ++i) {
        w[i] = r.uniform(0.5, 2.0);
        a[i] = r.normal01();
        b[i] = r.normal01();
    }
    DistanceFn d = DistanceFn::weighted_squared(w);
    CHECK(d(a, b) == doctest::Approx(d(b, a)).epsilon(0.0));
}

TEST_CASE("log euclidean distance") {
    DistanceFn d = DistanceFn::log_euclidean();
    Eigen::VectorXd a(2), b(2);
    a << 3.0, 4.0;
    b << 0.0, 0.0;
    CHECK(d(a, b) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
    CHECK(d(a, a) == -kInf);
}

} // TEST_SUITE("distance")

TEST_SUITE("csv-hash") {

TEST_CASE("fnv1a64 reference hashes") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 2.5066282746310002,
                     -0.625, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("equal doubles format identically") {
    CHECK(format_double(0.5) == format_double(1.0 / 2.0));
    CHECK(format_double(0.1 + 0.2) == format_double(0.30000000000000004));
}

TEST_CASE("csv round-trip through a file with LF endings") {
    ts::ScratchDir dir;
    std::vector<std::string> header{"alpha", "beta"};
    std::vector<std::vector<double>> rows{{1.0, 2.5}, {-0.125, 1e-9}};
    std::string text = csv_string(header, rows);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    atomic_write_file(dir.path / "t.csv", text);
    CHECK(read_file(dir.path / "t.csv") == text);
    CsvTable t = read_csv(dir.path / "t.csv");
    REQUIRE(t.header == header);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == 1.0);
    CHECK(t.rows[0][1] == 2.5);
    CHECK(t.rows[1][0] == -0.125);
    CHECK(t.rows[1][1] == 1e-9);
}

TEST_CASE("atomic write refuses unreachable directories") {
    CHECK_THROWS_AS(atomic_write_file("/nonexistent-root-dir/x/y.txt", "data"),
                    IoError);
}

} // TEST_SUITE("csv-hash")

TEST_SUITE("samples") {

TEST_CASE("weighted mean and quantiles") {
    Eigen::VectorXd x(2), w(2);
    x << 1.0, 3.0;
    w << 0.25, 0.75;
    CHECK(weighted_mean(x, w) == doctest::Approx(2.5).epsilon(1e-15));

    Eigen::VectorXd xs(10), ws(10);
    for (int i = 0; i < 10; ++i) {
        xs[i] = i + 1.0;
        ws[i] = 0.1;
    }
    // Equal weights reduce to the rank-interpolation rule.
    CHECK(weighted_quantile(xs, ws, 0.75) == doctest::Approx(7.75).epsilon(1e-12));
    Eigen::VectorXd c(3), wc(3);
    c << 2.0, 2.0, 2.0;
    wc << 0.2, 0.3, 0.5;
    CHECK(weighted_quantile(c, wc, 0.9) == 2.0);
    Eigen::VectorXd one(1), wone(1);
    one << 5.0;
    wone << 1.0;
    CHECK(weighted_quantile(one, wone, 0.3) == 5.0);
}

TEST_CASE("hpd interval on 1..100 equal weights") {
    Eigen::VectorXd x(100), w(100);
    for (int i = 0; i < 100; ++i) {
        x[i] = i + 1.0;
        w[i] = 0.01;
    }
    auto hpd = hpd_interval(x, w, 0.90);
    // Every 90-wide window ties; the earliest wins.
    CHECK(hpd.first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hpd.second == doctest::Approx(90.0).epsilon(1e-12));
    auto full = hpd_interval(x, w, 1.0);
    CHECK(full.first == 1.0);
    CHECK(full.second == 100.0);
}

TEST_CASE("hpd matches the central interval for a symmetric sample") {
    // Stratified standard-normal draws: quantiles at (i+0.5)/n.
    const int n = 10000;
    Eigen::VectorXd x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = norm_quantile((i + 0.5) / n);
        w[i] = 1.0 / n;
    }
    auto hpd = hpd_interval(x, w, 0.90);
    // Central 90% interval is +-1.6449; allow two grid spacings at the ends.
    const double z = 1.6448536269514722;
    const double spacing = x[9501] - x[9499];
    CHECK(std::abs(hpd.first + z) <= spacing);
    CHECK(std::abs(hpd.second - z) <= spacing);
}

TEST_CASE("hpd rejects degenerate samples") {
    Eigen::VectorXd x(3), w(3);
    x << 5.0, 5.0, 5.0;
    w << 0.3, 0.3, 0.4;
    CHECK_THROWS_AS((void)hpd_interval(x, w, 0.9), Error);
}

TEST_CASE("resample indices follow the weights") {
    Eigen::VectorXd w(3);
    w << 0.0, 0.0, 1.0;
    RngStream r(12);
    auto idx = resample_indices(w, 50, r);
    REQUIRE(idx.size() == 50);
    for (auto i : idx) CHECK(i == 2);
    RngStream r1(13), r2(13);
    Eigen::VectorXd w2(4);
    w2 << 0.1, 0.2, 0.3, 0.4;
    CHECK(resample_indices(w2, 100, r1) == resample_indices(w2, 100, r2));
}

} // TEST_SUITE("samples")
