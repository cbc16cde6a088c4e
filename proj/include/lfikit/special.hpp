#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lfikit {

double norm_pdf(double x);
double norm_logpdf(double x);

// Standard normal CDF, accurate over the full double range.
double norm_cdf(double x);

// log(Phi(x)); switches to an asymptotic expansion in the deep lower tail so
// it stays finite for arguments well below -38.
double norm_logcdf(double x);

// Inverse standard normal CDF (Wichura's PPND16), |error| < 1e-15 relative.
double norm_quantile(double p);

// Regularized lower incomplete gamma P(a, x). Series for x < a+1, continued
// fraction otherwise.
double gamma_p(double a, double x);

double gamma_logpdf(double x, double shape, double scale);
double gamma_cdf(double x, double shape, double scale);

// Adaptive Simpson quadrature to a relative tolerance (with a small absolute
// floor). Depth is capped; smooth integrands converge long before the cap.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

// Quantile of pre-sorted values by linear interpolation at rank 1 + q (n - 1)
// (1-indexed).
double quantile_sorted(const std::vector<double>& sorted, double q);

// Quantile of unsorted data (copies + sorts).
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

} // namespace lfikit
