#include "lfikit/gp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "lfikit/errors.hpp"
#include "lfikit/optim.hpp"

namespace lfikit {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
} // namespace

double kernel_se(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 const GpHyperparams& hp) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        double d = (a[j] - b[j]) / hp.lengthscales[j];
        s += d * d;
    }
    return hp.sigma_f2 * std::exp(-s);
}

Gp::Gp(Eigen::MatrixXd X, Eigen::VectorXd y, GpHyperparams hp)
    : X_(std::move(X)), y_(std::move(y)), hp_(std::move(hp)) {
    const Eigen::Index t = X_.rows();
    if (t == 0 || y_.size() != t)
        throw ConfigError("gp: input/target shape mismatch or empty evidence");
    if (hp_.lengthscales.size() != X_.cols())
        throw ConfigError("gp: lengthscale count must match input dimension");
    for (Eigen::Index j = 0; j < hp_.lengthscales.size(); ++j)
        if (!(hp_.lengthscales[j] > 0.0))
            throw ConfigError("gp: lengthscales must be positive");
    if (!(hp_.sigma_f2 > 0.0)) throw ConfigError("gp: sigma_f2 must be positive");
    if (hp_.sigma_n2 < 0.0) throw ConfigError("gp: sigma_n2 must be nonnegative");
    for (Eigen::Index i = 0; i < t; ++i)
        if (!std::isfinite(y_[i])) throw ConfigError("gp: targets must be finite");

    Eigen::MatrixXd K(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double k = kernel_se(X_.row(i).transpose(), X_.row(j).transpose(), hp_);
            K(i, j) = k;
            K(j, i) = k;
        }
        K(i, i) += hp_.sigma_n2;
    }

    // Jitter ladder: start at 1e-8 sigma_f2 and double until 1e-2 sigma_f2.
    double jitter = 0.0;
    for (;;) {
        Eigen::MatrixXd Kj = K;
        if (jitter > 0.0)
            Kj += jitter * Eigen::MatrixXd::Identity(t, t);
        Eigen::LLT<Eigen::MatrixXd> llt(Kj);
        bool ok = (llt.info() == Eigen::Success);
        if (ok) {
            L_ = llt.matrixL();
            // Eigen can return "success" on a semidefinite matrix; demand a
            // usable factor before accepting it.
            double dmin = L_.diagonal().minCoeff();
            ok = std::isfinite(dmin) && dmin > 1e-150;
        }
        if (ok) break;
        if (jitter == 0.0) {
            jitter = 1e-8 * hp_.sigma_f2;
        } else {
            jitter *= 2.0;
            if (jitter > 1e-2 * hp_.sigma_f2)
                throw FactorizationFailure(
                    "gp: kernel matrix not positive definite within jitter budget");
        }
    }
    jitter_ = jitter;
    alpha_ = L_.transpose().template triangularView<Eigen::Upper>().solve(
        L_.template triangularView<Eigen::Lower>().solve(y_));
    double logdet = 2.0 * L_.diagonal().array().log().sum();
    lml_ = -0.5 * y_.dot(alpha_) - 0.5 * logdet -
           0.5 * static_cast<double>(t) * kLog2Pi;
}

GpPrediction Gp::predict(const Eigen::VectorXd& x) const {
    const Eigen::Index t = X_.rows();
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i)
        k[i] = kernel_se(X_.row(i).transpose(), x, hp_);
    GpPrediction out;
    out.mean = k.dot(alpha_);
    Eigen::VectorXd v = L_.template triangularView<Eigen::Lower>().solve(k);
    double prior_var = hp_.sigma_f2;
    double var = prior_var - v.squaredNorm();
    out.var = std::min(std::max(var, 0.0), prior_var);
    return out;
}

GpHyperparams optimize_hyperparams(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   const HyperparamFitOptions& opts) {
    const Eigen::Index t = X.rows();
    const Eigen::Index p = X.cols();
    if (t < 3)
        throw ConfigError("gp: hyperparameter fit needs at least 3 evidence points");
    double mean = y.mean();
    double var_y = (y.array() - mean).square().sum() / static_cast<double>(t - 1);
    if (!(var_y > 0.0))
        throw DegenerateEvidence("gp: constant targets, marginal likelihood degenerate");

    Eigen::VectorXd range(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double r = X.col(j).maxCoeff() - X.col(j).minCoeff();
        range[j] = (r > 0.0) ? r : 1.0;
    }

    // Search space: log of (sigma_f2, lengthscales..., sigma_n2).
    Eigen::VectorXd lo(p + 2), hi(p + 2);
    lo[0] = std::log(1e-6 * var_y);
    hi[0] = std::log(1e3 * var_y);
    for (Eigen::Index j = 0; j < p; ++j) {
        lo[1 + j] = std::log(1e-3 * range[j]);
        hi[1 + j] = std::log(10.0 * range[j]);
    }
    lo[p + 1] = std::log(1e-6 * var_y);
    hi[p + 1] = std::log(var_y);
    BoundedSpace box(lo, hi);

    auto unpack = [p](const Eigen::VectorXd& u) {
        GpHyperparams hp;
        hp.sigma_f2 = std::exp(u[0]);
        hp.lengthscales.resize(p);
        for (Eigen::Index j = 0; j < p; ++j) hp.lengthscales[j] = std::exp(u[1 + j]);
        hp.sigma_n2 = std::exp(u[p + 1]);
        return hp;
    };

    auto neg_lml = [&](const Eigen::VectorXd& u) -> double {
        try {
            Gp gp(X, y, unpack(u));
            double v = gp.log_marginal_likelihood();
            return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
        } catch (const FactorizationFailure&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    // Fixed fractional start pattern across the log box (golden-ratio strides
    // keep the starts spread without any RNG).
    std::vector<Eigen::VectorXd> starts;
    if (opts.warm_start) {
        Eigen::VectorXd u(p + 2);
        u[0] = std::log(opts.warm_start->sigma_f2);
        for (Eigen::Index j = 0; j < p; ++j)
            u[1 + j] = std::log(opts.warm_start->lengthscales[j]);
        u[p + 1] = std::log(std::max(opts.warm_start->sigma_n2, 1e-300));
        starts.push_back(box.clamp(u));
    }
    int fixed = std::max(opts.n_starts, 5);
    for (int s = 0; s < fixed; ++s) {
        Eigen::VectorXd u(p + 2);
        for (Eigen::Index j = 0; j < p + 2; ++j) {
            double frac = std::fmod(0.5 + 0.6180339887498949 * (s + 1) * (j + 1), 1.0);
            u[j] = lo[j] + frac * (hi[j] - lo[j]);
        }
        starts.push_back(u);
    }

    NelderMeadOptions nm;
    nm.max_evals = opts.max_evals;
    nm.init_step = 0.15;
    nm.x_tol = 1e-6;
    nm.f_tol = 1e-9;

    Eigen::VectorXd best;
    double best_f = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        OptimResult r = nelder_mead(neg_lml, s, box, nm);
        if (r.value < best_f) {
            best_f = r.value;
            best = r.x;
        }
    }
    if (!std::isfinite(best_f))
        throw FactorizationFailure("gp: no hyperparameter start produced a finite fit");
    return unpack(best);
}

} // namespace lfikit
