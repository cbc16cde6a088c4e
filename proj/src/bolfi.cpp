#include "lfikit/bolfi.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "lfikit/errors.hpp"
#include "lfikit/optim.hpp"
#include "lfikit/parallel.hpp"
#include "lfikit/sampler.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

double eta_sq(std::size_t t, std::size_t dim, double epsilon_eta) {
    constexpr double kPiSq = 9.869604401089358;
    double td = static_cast<double>(t);
    double expo = 0.5 * static_cast<double>(dim) + 2.0;
    double v = 2.0 * std::log(std::pow(td, expo) * kPiSq / (3.0 * epsilon_eta));
    return std::max(v, 0.0);
}

double acquisition_lcbsc(const Gp& gp, const Eigen::VectorXd& x, std::size_t t,
                         double epsilon_eta) {
    GpPrediction pr = gp.predict(x);
    double e2 = eta_sq(t, static_cast<std::size_t>(x.size()), epsilon_eta);
    return pr.mean - std::sqrt(e2 * pr.var);
}

Eigen::VectorXd propose_next(const Eigen::VectorXd& acq_min,
                             const Eigen::VectorXd& acq_noise_var,
                             const BoundedSpace& space, RngStream& rng) {
    Eigen::VectorXd out(acq_min.size());
    for (Eigen::Index j = 0; j < acq_min.size(); ++j) {
        double v = acq_noise_var[j];
        if (v <= 0.0) {
            out[j] = acq_min[j];
        } else {
            out[j] = rng.truncated_normal(acq_min[j], std::sqrt(v), space.lower[j],
                                          space.upper[j]);
        }
    }
    return out;
}

double surrogate_loglik(const Gp& gp, double h, const Eigen::VectorXd& x) {
    GpPrediction pr = gp.predict(x);
    double total_var = pr.var + gp.hyperparams().sigma_n2;
    if (total_var <= 0.0) {
        return (pr.mean <= h) ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return norm_logcdf((h - pr.mean) / std::sqrt(total_var));
}

namespace {

// The GP needs finite targets; a log-transformed exact match (-inf) is
// treated as "strictly better than everything seen", one unit below the
// finite minimum.
void clamp_nonfinite(Eigen::VectorXd& d) {
    double finite_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (std::isfinite(d[i])) finite_min = std::min(finite_min, d[i]);
    if (!std::isfinite(finite_min))
        throw DegenerateEvidence("bolfi: no finite discrepancy in evidence");
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (!std::isfinite(d[i])) d[i] = finite_min - 1.0;
}

GpHyperparams heuristic_hyperparams(const BoundedSpace& space,
                                    const Eigen::VectorXd& y) {
    GpHyperparams hp;
    double mean = y.mean();
    double var_y = (y.array() - mean).square().sum() /
                   std::max<double>(1.0, static_cast<double>(y.size() - 1));
    hp.sigma_f2 = (var_y > 0.0) ? var_y : 1.0;
    hp.lengthscales = space.range() / 3.0;
    hp.sigma_n2 = std::max(0.1 * hp.sigma_f2, 1e-10);
    return hp;
}

} // namespace

BolfiResult bolfi_run(const Model& model, const BolfiConfig& cfg, RngStream rng,
                      unsigned workers) {
    if (!model.space)
        throw ConfigError("bolfi: model must define a bounded search space");
    const BoundedSpace& space = *model.space;
    const Eigen::Index p = model.dim();
    if (cfg.n_init < 1) throw ConfigError("bolfi: n_init must be >= 1");
    if (cfg.n_evidence < cfg.n_init)
        throw ConfigError("bolfi: n_evidence must be >= n_init");
    if (cfg.update_interval < 1)
        throw ConfigError("bolfi: update_interval must be >= 1");
    if (!(cfg.epsilon_eta > 0.0))
        throw ConfigError("bolfi: epsilon_eta must be positive");

    Eigen::VectorXd acq_noise;
    if (cfg.acq_noise_var.size() == 0) {
        acq_noise = Eigen::VectorXd::Zero(p);
    } else if (cfg.acq_noise_var.size() == 1) {
        acq_noise = Eigen::VectorXd::Constant(p, cfg.acq_noise_var[0]);
    } else if (cfg.acq_noise_var.size() == p) {
        acq_noise = cfg.acq_noise_var;
    } else {
        throw ConfigError("bolfi: acq_noise_var must be scalar or one per dimension");
    }

    auto eval_target = [&](const Eigen::VectorXd& theta, RngStream& r) {
        double d = model.discrepancy(theta, r);
        if (cfg.log_discrepancy) {
            if (d < 0.0)
                throw ConfigError("bolfi: log transform needs nonnegative discrepancies");
            d = std::log(d); // log(0) = -inf is clamped later
        }
        return d;
    };

    Eigen::MatrixXd X(cfg.n_evidence, p);
    Eigen::VectorXd d(static_cast<Eigen::Index>(cfg.n_evidence));

    // Initial design: prior draws conditioned to the search box. This is the
    // only parallel section; each slot has its own child stream.
    RngStream init_rng = rng.child(0);
    parallel_for(cfg.n_init, workers, [&](std::size_t i) {
        RngStream slot = init_rng.child(i);
        for (std::uint64_t a = 0; a < 100000; ++a) {
            RngStream attempt = slot.child(a);
            Eigen::VectorXd theta = model.prior.sample(attempt);
            if (!space.contains(theta)) continue;
            X.row(static_cast<Eigen::Index>(i)) = theta;
            d[static_cast<Eigen::Index>(i)] = eval_target(theta, attempt);
            return;
        }
        throw AttemptBudgetExceeded(
            "bolfi: prior places no usable mass inside the search space");
    });
    {
        Eigen::VectorXd head = d.head(static_cast<Eigen::Index>(cfg.n_init));
        clamp_nonfinite(head);
        d.head(static_cast<Eigen::Index>(cfg.n_init)) = head;
    }

    auto fit_hyperparams = [&](Eigen::Index t,
                               const std::optional<GpHyperparams>& warm) {
        Eigen::MatrixXd Xt = X.topRows(t);
        Eigen::VectorXd dt = d.head(t);
        if (t < 3) return heuristic_hyperparams(space, dt);
        HyperparamFitOptions o;
        o.warm_start = warm;
        return optimize_hyperparams(Xt, dt, o);
    };

    GpHyperparams hp = fit_hyperparams(static_cast<Eigen::Index>(cfg.n_init), {});
    Gp gp(X.topRows(static_cast<Eigen::Index>(cfg.n_init)),
          d.head(static_cast<Eigen::Index>(cfg.n_init)), hp);

    MultiStartOptions acq_opts;
    acq_opts.n_random_starts = 10;
    acq_opts.grid_points = 0; // local searches only; the h-search grids below
    acq_opts.local.max_evals = 120;
    acq_opts.local.x_tol = 1e-7;

    auto best_evidence_point = [&](Eigen::Index t) {
        // Evidence point with the lowest GP posterior mean.
        Eigen::Index best = 0;
        double best_mean = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < t; ++i) {
            double m = gp.predict(X.row(i).transpose()).mean;
            if (m < best_mean) {
                best_mean = m;
                best = i;
            }
        }
        return X.row(best).transpose().eval();
    };

    for (std::size_t t = cfg.n_init + 1; t <= cfg.n_evidence; ++t) {
        RngStream step_rng = rng.child(t);
        const Eigen::Index sz = static_cast<Eigen::Index>(t - 1);

        auto acq = [&](const Eigen::VectorXd& x) {
            return acquisition_lcbsc(gp, x, t, cfg.epsilon_eta);
        };
        std::vector<Eigen::VectorXd> extra{space.clamp(best_evidence_point(sz))};
        OptimResult acq_min = minimize_multistart(acq, space, step_rng.child(0), extra,
                                                  acq_opts);

        RngStream prop_rng = step_rng.child(1);
        Eigen::VectorXd theta = propose_next(acq_min.x, acq_noise, space, prop_rng);

        RngStream sim_rng = step_rng.child(2);
        double dt = eval_target(theta, sim_rng);
        X.row(sz) = theta;
        d[sz] = dt;
        {
            Eigen::VectorXd head = d.head(sz + 1);
            clamp_nonfinite(head);
            d.head(sz + 1) = head;
        }

        if (t % cfg.update_interval == 0) {
            hp = fit_hyperparams(sz + 1, hp);
        }
        gp = Gp(X.topRows(sz + 1), d.head(sz + 1), hp);
    }

    // Minimum of the fitted mean surface defines the synthetic-likelihood
    // threshold h.
    MultiStartOptions h_opts;
    h_opts.n_random_starts = 10;
    h_opts.grid_points = (p <= 2) ? 10000 : 0;
    if (p > 2) h_opts.n_random_starts = 20;
    h_opts.local.max_evals = 200;
    auto mean_fn = [&](const Eigen::VectorXd& x) { return gp.predict(x).mean; };
    std::vector<Eigen::VectorXd> h_extra{
        space.clamp(best_evidence_point(static_cast<Eigen::Index>(cfg.n_evidence)))};
    OptimResult h_min = minimize_multistart(mean_fn, space,
                                            rng.child(cfg.n_evidence + 1), h_extra,
                                            h_opts);
    const double h = h_min.value;

    auto log_post = [&](const Eigen::VectorXd& x) {
        return surrogate_loglik(gp, h, x) + model.prior.logpdf(x);
    };

    MhConfig mh;
    // Sized so that the post-burn-in segment covers n_sample draws.
    mh.n_steps = (cfg.n_sample * 4 + 2) / 3;
    mh.burn_in_fraction = 0.25;
    mh.init = space.clamp(best_evidence_point(static_cast<Eigen::Index>(cfg.n_evidence)));
    Chain chain = mh_sample(log_post, space, mh, rng.child(cfg.n_evidence + 2));
    if (static_cast<std::size_t>(chain.draws.rows()) > cfg.n_sample) {
        chain.draws.conservativeResize(static_cast<Eigen::Index>(cfg.n_sample),
                                       chain.draws.cols());
        chain.log_target.conservativeResize(static_cast<Eigen::Index>(cfg.n_sample));
    }

    BolfiResult out;
    out.gp = std::move(gp);
    out.evidence_x = std::move(X);
    out.evidence_d = std::move(d);
    out.h = h;
    out.chain = std::move(chain);
    out.simulator_calls = cfg.n_evidence;
    return out;
}

} // namespace lfikit
