#pragma once

#include <optional>

#include <Eigen/Core>

namespace lfikit {

// Squared-exponential kernel hyperparameters. Noise variance sigma_n2 may be
// zero only in controlled settings (interpolation tests); fitted values stay
// strictly positive.
struct GpHyperparams {
    double sigma_f2 = 1.0;          // signal variance
    Eigen::VectorXd lengthscales;   // one per input dimension, > 0
    double sigma_n2 = 0.0;          // observation noise variance
};

// k(a, b) = sigma_f2 * exp(-sum_j (a_j - b_j)^2 / l_j^2)
double kernel_se(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 const GpHyperparams& hp);

struct GpPrediction {
    double mean = 0.0;
    double var = 0.0; // latent variance, clamped into [0, k(x, x)]
};

// Gaussian process regressor over scalar targets, fitted by Cholesky with an
// escalating jitter ladder (1e-8 .. 1e-2 of sigma_f2, doubling); beyond that
// fitting throws FactorizationFailure.
class Gp {
public:
    Gp() = default;
    Gp(Eigen::MatrixXd X, Eigen::VectorXd y, GpHyperparams hp);

    GpPrediction predict(const Eigen::VectorXd& x) const;

    double log_marginal_likelihood() const { return lml_; }
    const GpHyperparams& hyperparams() const { return hp_; }
    const Eigen::MatrixXd& inputs() const { return X_; }
    const Eigen::VectorXd& targets() const { return y_; }
    double jitter_used() const { return jitter_; }
    Eigen::Index size() const { return X_.rows(); }

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    GpHyperparams hp_;
    Eigen::MatrixXd L_;     // lower Cholesky factor of K + sigma_n2 I (+ jitter)
    Eigen::VectorXd alpha_; // (K + sigma_n2 I)^-1 y
    double lml_ = 0.0;
    double jitter_ = 0.0;
};

struct HyperparamFitOptions {
    int n_starts = 5;      // >= 5 deterministic starts (plus optional warm start)
    int max_evals = 80;    // local search budget per start
    std::optional<GpHyperparams> warm_start;
};

// Maximum marginal likelihood fit by multi-start bounded derivative-free
// search in log space. Bounds: lengthscales in [1e-3, 10] x per-dimension
// input range, sigma_f2 in [1e-6, 1e3] x var(y), sigma_n2 in
// [1e-6, 1] x var(y). Throws DegenerateEvidence when var(y) is zero.
// Deterministic: the start pattern is fixed, no randomness involved.
GpHyperparams optimize_hyperparams(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   const HyperparamFitOptions& opts = {});

} // namespace lfikit
