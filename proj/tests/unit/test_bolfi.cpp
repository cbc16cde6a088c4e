#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "lfikit/bolfi.hpp"
#include "lfikit/errors.hpp"
#include "lfikit/optim.hpp"
#include "lfikit/rng.hpp"
#include "test_support.hpp"

using namespace lfikit;

namespace {

constexpr double kPiSq = 9.869604401089358;

Gp one_point_gp(double y0, double sigma_f2, double sigma_n2) {
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::VectorXd y(1);
    y << y0;
    GpHyperparams hp;
    hp.sigma_f2 = sigma_f2;
    hp.lengthscales = Eigen::VectorXd::Ones(1);
    hp.sigma_n2 = sigma_n2;
    return Gp(std::move(X), std::move(y), hp);
}

} // namespace

TEST_SUITE("bolfi") {

TEST_CASE("exploration weight closed forms") {
    CHECK(eta_sq(1, 1, 1.0) ==
          doctest::Approx(2.0 * std::log(kPiSq / 3.0)).epsilon(1e-12));
    CHECK(eta_sq(100, 2, 0.1) ==
          doctest::Approx(2.0 * std::log(1e6 * kPiSq / 0.3)).epsilon(1e-12));
    // Large tolerance drives the log term negative; the weight clamps at zero.
    CHECK(eta_sq(1, 1, 10.0) == 0.0);
}

TEST_CASE("lower confidence bound acquisition hand case") {
    // One evidence point: mu(0) = 1, latent var(0) = 1. epsilon chosen so the
    // exploration weight is exactly 4, giving 1 - sqrt(4 * 1) = -1.
    Gp gp = one_point_gp(2.0, 2.0, 2.0);
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(gp.predict(x).mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gp.predict(x).var == doctest::Approx(1.0).epsilon(1e-12));
    const double eps_eta = kPiSq / (3.0 * std::exp(2.0));
    CHECK(acquisition_lcbsc(gp, x, 1, eps_eta) ==
          doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("surrogate log-likelihood threshold cases") {
    // mu(0) = 1, latent var 0.5, noise 1 => total variance 1.5.
    Gp gp = one_point_gp(2.0, 1.0, 1.0);
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(surrogate_loglik(gp, 1.0, x) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-12));
    const double z95 = 1.6448536269514722;
    CHECK(surrogate_loglik(gp, 1.0 + z95 * std::sqrt(1.5), x) ==
          doctest::Approx(std::log(0.95)).epsilon(1e-9));
}

TEST_CASE("zero total variance degenerates to an indicator") {
    Gp gp = one_point_gp(2.0, 1.0, 0.0);
    Eigen::VectorXd x(1);
    x << 0.0; // training point: predictive variance exactly zero
    CHECK(gp.predict(x).var == 0.0);
    CHECK(surrogate_loglik(gp, 3.0, x) == 0.0);
    CHECK(surrogate_loglik(gp, 1.0, x) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("acquisition jitter honours zero noise and the box") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1.0, 0.0;
    hi << 1.0, 2.0;
    BoundedSpace space(lo, hi);
    Eigen::VectorXd centre(2);
    centre << 0.3, 1.9;

    RngStream r(5);
    Eigen::VectorXd exact =
        propose_next(centre, Eigen::VectorXd::Zero(2), space, r);
    CHECK(exact == centre);

    Eigen::VectorXd noise(2);
    noise << 0.0, 0.5;
    bool moved = false;
    for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd p = propose_next(centre, noise, space, r);
        CHECK(p[0] == centre[0]); // zero-noise dimension stays put
        CHECK(p[1] >= lo[1]);
        CHECK(p[1] <= hi[1]);
        moved = moved || p[1] != centre[1];
    }
    CHECK(moved);

    RngStream a(6), b(6);
    CHECK(propose_next(centre, noise, space, a) ==
          propose_next(centre, noise, space, b));
}

TEST_CASE("toy run recovers the conjugate posterior") {
    BolfiConfig bc;
    bc.n_init = 5;
    bc.n_evidence = 60;
    bc.update_interval = 1;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 1000;
    auto br = bolfi_run(testsupport::toy_model(), bc, RngStream(14));

    CHECK(br.simulator_calls == 60);
    CHECK(br.evidence_x.rows() == 60);
    CHECK(br.evidence_d.size() == 60);
    CHECK(br.chain.draws.rows() == 1000);
    for (Eigen::Index i = 0; i < br.chain.draws.rows(); ++i) {
        CHECK(br.chain.draws(i, 0) >= -3.0);
        CHECK(br.chain.draws(i, 0) <= 3.0);
    }
    double mean = br.chain.draws.col(0).mean();
    double sd = std::sqrt(testsupport::sample_var(br.chain.draws.col(0)));
    CHECK(std::abs(mean) <= 0.15);
    CHECK(std::abs(sd / std::sqrt(0.5) - 1.0) <= 0.25);
}

TEST_CASE("threshold is the minimum of the posterior mean surface") {
    BolfiConfig bc;
    bc.n_init = 5;
    bc.n_evidence = 30;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 100;
    auto br = bolfi_run(testsupport::toy_model(), bc, RngStream(52));
    double grid_min = std::numeric_limits<double>::infinity();
    for (int g = 0; g < 10000; ++g) {
        Eigen::VectorXd x(1);
        x << -3.0 + 6.0 * g / 9999.0;
        grid_min = std::min(grid_min, br.gp.predict(x).mean);
    }
    CHECK(br.h <= grid_min + 1e-9);
    CHECK(std::isfinite(br.h));
}

TEST_CASE("log transform equals modelling the log discrepancy directly") {
    Model a = testsupport::toy_model();
    Model b = testsupport::toy_model();
    b.discrepancy = [](const Eigen::VectorXd& th, RngStream& r) {
        return std::log(std::abs(th[0] + r.normal01()));
    };
    BolfiConfig bc;
    bc.n_init = 4;
    bc.n_evidence = 20;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 200;
    BolfiConfig bca = bc;
    bca.log_discrepancy = true;
    auto ra = bolfi_run(a, bca, RngStream(21));
    auto rb = bolfi_run(b, bc, RngStream(21));
    CHECK((ra.evidence_x - rb.evidence_x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ra.evidence_d - rb.evidence_d).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ra.h == rb.h);
    CHECK((ra.chain.draws - rb.chain.draws).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("acquisition optimizer matches a dense grid search") {
    BolfiConfig bc;
    bc.n_init = 6;
    bc.n_evidence = 25;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 100;
    Model m = testsupport::toy_model();
    auto br = bolfi_run(m, bc, RngStream(35));
    const std::size_t t = 25;
    auto f = [&](const Eigen::VectorXd& x) {
        return acquisition_lcbsc(br.gp, x, t, 0.1);
    };
    double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
    for (int g = 0; g < 10000; ++g) {
        Eigen::VectorXd x(1);
        x << -3.0 + 6.0 * g / 9999.0;
        double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x[0];
        }
    }
    std::vector<Eigen::VectorXd> extra = {Eigen::VectorXd::Zero(1)};
    MultiStartOptions mso;
    mso.grid_points = 0;
    mso.local.max_evals = 120;
    auto opt = minimize_multistart(f, *m.space, RngStream(36), extra, mso);
    CHECK(std::abs(best_x - opt.x[0]) <= 6e-4);
    CHECK(opt.value <= best_v + 1e-9);
}

TEST_CASE("nonfinite evidence handling") {
    Model all_inf = testsupport::toy_model();
    all_inf.discrepancy = [](const Eigen::VectorXd&, RngStream&) {
        return std::numeric_limits<double>::infinity();
    };
    BolfiConfig bc;
    bc.n_init = 4;
    bc.n_evidence = 10;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 50;
    CHECK_THROWS_AS(bolfi_run(all_inf, bc, RngStream(9)), DegenerateEvidence);

    Model mixed = testsupport::toy_model();
    mixed.discrepancy = [](const Eigen::VectorXd& th, RngStream&) {
        if (th[0] < 0.0) return std::numeric_limits<double>::infinity();
        return std::abs(th[0]);
    };
    auto br = bolfi_run(mixed, bc, RngStream(10));
    CHECK(br.evidence_d.allFinite());
    CHECK(std::isfinite(br.h));
}

TEST_CASE("log transform rejects negative discrepancies") {
    Model neg = testsupport::toy_model();
    neg.discrepancy = [](const Eigen::VectorXd&, RngStream&) { return -1.0; };
    BolfiConfig bc;
    bc.n_init = 4;
    bc.n_evidence = 10;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 50;
    bc.log_discrepancy = true;
    CHECK_THROWS_AS(bolfi_run(neg, bc, RngStream(11)), ConfigError);
}

TEST_CASE("same seed gives identical runs") {
    BolfiConfig bc;
    bc.n_init = 4;
    bc.n_evidence = 15;
    bc.acq_noise_var = Eigen::VectorXd::Constant(1, 0.1);
    bc.n_sample = 100;
    auto r1 = bolfi_run(testsupport::toy_model(), bc, RngStream(77));
    auto r2 = bolfi_run(testsupport::toy_model(), bc, RngStream(77));
    CHECK((r1.evidence_x - r2.evidence_x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r1.chain.draws - r2.chain.draws).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r1.h == r2.h);
}

} // TEST_SUITE
