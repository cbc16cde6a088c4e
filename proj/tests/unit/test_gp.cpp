#include <doctest.h>

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lfikit/errors.hpp"
#include "lfikit/gp.hpp"
#include "lfikit/rng.hpp"
#include "test_support.hpp"

using namespace lfikit;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

GpHyperparams hp1(double sigma_f2, double ell, double sigma_n2) {
    GpHyperparams hp;
    hp.sigma_f2 = sigma_f2;
    hp.lengthscales = vec1(ell);
    hp.sigma_n2 = sigma_n2;
    return hp;
}

} // namespace

TEST_SUITE("gp") {

TEST_CASE("squared-exponential kernel closed forms") {
    GpHyperparams hp = hp1(1.5, 0.8, 0.0);
    Eigen::VectorXd a = vec1(0.0), b = vec1(1.0);
    CHECK(kernel_se(a, a, hp) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(kernel_se(a, b, hp) ==
          doctest::Approx(1.5 * std::exp(-1.0 / 0.64)).epsilon(1e-14));
    CHECK(kernel_se(a, b, hp) == kernel_se(b, a, hp));

    GpHyperparams hp2;
    hp2.sigma_f2 = 1.0;
    hp2.lengthscales = Eigen::VectorXd(2);
    hp2.lengthscales << 1.0, 2.0;
    hp2.sigma_n2 = 0.0;
    Eigen::VectorXd p(2), q(2);
    p << 0.0, 0.0;
    q << 1.0, 2.0;
    CHECK(kernel_se(p, q, hp2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("single-point posterior matches hand calculation") {
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::VectorXd y(1);
    y << 2.0;
    Gp gp(X, y, hp1(1.0, 1.0, 0.0));

    auto at_train = gp.predict(vec1(0.0));
    CHECK(at_train.mean == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(at_train.var == doctest::Approx(0.0).epsilon(1e-9));

    auto away = gp.predict(vec1(1.0));
    CHECK(away.mean == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(away.var ==
          doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("three-point fit matches an independent dense solve") {
    // Frozen reference computed with a dense Cholesky solve of the same
    // model: X = [0, 1, 2], y = [0.5, -0.2, 0.3], sigma_f2 = 1.5,
    // lengthscale 0.8, noise 0.1.
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 1.0, 2.0;
    Eigen::VectorXd y(3);
    y << 0.5, -0.2, 0.3;
    Gp gp(X, y, hp1(1.5, 0.8, 0.1));

    CHECK(gp.log_marginal_likelihood() ==
          doctest::Approx(-3.570922997511).epsilon(1e-6));
    auto p = gp.predict(vec1(0.5));
    CHECK(p.mean == doctest::Approx(0.130075289344).epsilon(1e-6));
    CHECK(p.var == doctest::Approx(0.413872226339).epsilon(1e-6));
    CHECK(gp.jitter_used() == 0.0);
}

TEST_CASE("predictions agree with a direct in-test solve in 2-D") {
    RngStream r(12);
    const int n = 12;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = r.uniform(-1.0, 1.0);
        X(i, 1) = r.uniform(0.0, 3.0);
        y[i] = std::sin(X(i, 0)) + 0.2 * X(i, 1) + 0.05 * r.normal01();
    }
    GpHyperparams hp;
    hp.sigma_f2 = 0.9;
    hp.lengthscales = Eigen::VectorXd(2);
    hp.lengthscales << 0.7, 1.4;
    hp.sigma_n2 = 0.25;
    Gp gp(X, y, hp);

    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K(i, j) = kernel_se(X.row(i), X.row(j), hp);
    K.diagonal().array() += hp.sigma_n2;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    REQUIRE(llt.info() == Eigen::Success);

    RngStream q(13);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd x(2);
        x << q.uniform(-1.5, 1.5), q.uniform(-0.5, 3.5);
        Eigen::VectorXd ks(n);
        for (int i = 0; i < n; ++i) ks[i] = kernel_se(X.row(i), x, hp);
        double mean_ref = ks.dot(llt.solve(y));
        double var_ref = kernel_se(x, x, hp) - ks.dot(llt.solve(ks));
        auto p = gp.predict(x);
        CHECK(p.mean == doctest::Approx(mean_ref).epsilon(1e-6));
        CHECK(p.var == doctest::Approx(std::max(0.0, var_ref)).epsilon(1e-6));
    }
}

TEST_CASE("noiseless fit interpolates its training data") {
    RngStream r(14);
    const int n = 6;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = i * 0.7;
        y[i] = std::cos(X(i, 0));
    }
    Gp gp(X, y, hp1(1.0, 1.0, 0.0));
    for (int i = 0; i < n; ++i) {
        auto p = gp.predict(X.row(i));
        CHECK(p.mean == doctest::Approx(y[i]).epsilon(1e-6));
        CHECK(p.var <= 1e-6);
        CHECK(p.var >= 0.0);
    }
}

TEST_CASE("duplicate noiseless inputs engage the jitter ladder") {
    Eigen::MatrixXd X(2, 1);
    X << 0.5, 0.5;
    Eigen::VectorXd y(2);
    y << 1.0, 1.0;
    Gp gp(X, y, hp1(1.0, 1.0, 0.0));
    CHECK(gp.jitter_used() > 0.0);
    auto p = gp.predict(vec1(0.5));
    CHECK(std::isfinite(p.mean));
    CHECK(p.mean == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::isfinite(p.var));
}

TEST_CASE("far queries revert to the zero-mean prior") {
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 0.3, 0.9;
    Eigen::VectorXd y(3);
    y << 1.2, 0.8, 1.1;
    GpHyperparams hp = hp1(2.0, 0.5, 0.1);
    Gp gp(X, y, hp);
    auto p = gp.predict(vec1(50.0));
    CHECK(std::abs(p.mean) < 1e-8);
    CHECK(p.var == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("variance is clamped into [0, prior variance]") {
    RngStream r(15);
    Eigen::MatrixXd X(8, 1);
    Eigen::VectorXd y(8);
    for (int i = 0; i < 8; ++i) {
        X(i, 0) = r.uniform(-2.0, 2.0);
        y[i] = r.normal01();
    }
    GpHyperparams hp = hp1(1.3, 0.6, 0.05);
    Gp gp(X, y, hp);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x = vec1(r.uniform(-3.0, 3.0));
        auto p = gp.predict(x);
        CHECK(p.var >= 0.0);
        CHECK(p.var <= kernel_se(x, x, hp) + 1e-12);
    }
    // Noisy fits leave more residual uncertainty far from data than on it.
    CHECK(gp.predict(X.row(0)).var < gp.predict(vec1(25.0)).var);
}

TEST_CASE("hyperparameter fit recovers a large noise floor on pure noise") {
    RngStream r(9);
    const int n = 30;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = r.uniform(0.0, 1.0);
        y[i] = r.normal01();
    }
    auto hp = optimize_hyperparams(X, y);
    CHECK(hp.sigma_n2 / testsupport::sample_var(y) >= 0.5);
    CHECK(hp.sigma_f2 > 0.0);
    CHECK(hp.lengthscales.size() == 1);
    CHECK(hp.lengthscales[0] > 0.0);
}

TEST_CASE("hyperparameter fit keeps noise small on a smooth trend") {
    const int n = 20;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = i / double(n - 1);
        y[i] = std::sin(3.0 * X(i, 0)) + 0.2 * X(i, 0);
    }
    auto hp = optimize_hyperparams(X, y);
    CHECK(hp.sigma_n2 / testsupport::sample_var(y) <= 0.05);
    // The fitted model should explain the data better than a rigid default.
    Gp fitted(X, y, hp);
    Gp fallback(X, y, hp1(1.0, 1.0, 0.1));
    CHECK(fitted.log_marginal_likelihood() >=
          fallback.log_marginal_likelihood());
}

TEST_CASE("hyperparameter fit is deterministic") {
    RngStream r(16);
    Eigen::MatrixXd X(10, 1);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
        X(i, 0) = r.uniform(0.0, 2.0);
        y[i] = std::sin(X(i, 0)) + 0.1 * r.normal01();
    }
    auto a = optimize_hyperparams(X, y);
    auto b = optimize_hyperparams(X, y);
    CHECK(a.sigma_f2 == b.sigma_f2);
    CHECK(a.sigma_n2 == b.sigma_n2);
    CHECK(a.lengthscales[0] == b.lengthscales[0]);
}

TEST_CASE("degenerate targets and tiny designs are rejected") {
    Eigen::MatrixXd X(4, 1);
    X << 0.0, 1.0, 2.0, 3.0;
    Eigen::VectorXd y = Eigen::VectorXd::Constant(4, 0.7);
    CHECK_THROWS_AS(optimize_hyperparams(X, y), DegenerateEvidence);

    Eigen::MatrixXd X2(2, 1);
    X2 << 0.0, 1.0;
    Eigen::VectorXd y2(2);
    y2 << 0.0, 1.0;
    CHECK_THROWS_AS(optimize_hyperparams(X2, y2), ConfigError);
}

} // TEST_SUITE
