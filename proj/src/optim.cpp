#include "lfikit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lfikit {

OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& start,
                        const BoundedSpace& box, const NelderMeadOptions& opts) {
    const Eigen::Index p = box.dim();
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(box.clamp(x));
    };

    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    Eigen::VectorXd x0 = box.clamp(start);
    xs.push_back(x0);
    fs.push_back(eval(x0));
    Eigen::VectorXd range = box.range();
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::VectorXd xj = x0;
        double step = opts.init_step * range[j];
        xj[j] += (xj[j] + step <= box.upper[j]) ? step : -step;
        xs.push_back(box.clamp(xj));
        fs.push_back(eval(xs.back()));
    }

    auto order = [&]() {
        std::vector<std::size_t> idx(xs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> xs2(xs.size());
        std::vector<double> fs2(fs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            xs2[i] = xs[idx[i]];
            fs2[i] = fs[idx[i]];
        }
        xs.swap(xs2);
        fs.swap(fs2);
    };

    const std::size_t last = static_cast<std::size_t>(p);
    while (evals < opts.max_evals) {
        order();
        double spread = 0.0;
        for (std::size_t i = 1; i < xs.size(); ++i)
            spread = std::max(spread, (xs[i] - xs[0]).cwiseQuotient(range).cwiseAbs().maxCoeff());
        if (spread < opts.x_tol && std::fabs(fs[last] - fs[0]) < opts.f_tol) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
        for (std::size_t i = 0; i < last; ++i) centroid += xs[i];
        centroid /= static_cast<double>(last);

        Eigen::VectorXd xr = centroid + (centroid - xs[last]);
        double fr = eval(xr);
        if (fr < fs[0]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[last]);
            double fe = eval(xe);
            if (fe < fr) {
                xs[last] = box.clamp(xe);
                fs[last] = fe;
            } else {
                xs[last] = box.clamp(xr);
                fs[last] = fr;
            }
        } else if (fr < fs[last - 1]) {
            xs[last] = box.clamp(xr);
            fs[last] = fr;
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (xs[last] - centroid);
            double fc = eval(xc);
            if (fc < fs[last]) {
                xs[last] = box.clamp(xc);
                fs[last] = fc;
            } else {
                for (std::size_t i = 1; i <= last; ++i) {
                    xs[i] = box.clamp(xs[0] + 0.5 * (xs[i] - xs[0]));
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }
    order();
    return {xs[0], fs[0], evals};
}

OptimResult minimize_multistart(const ObjectiveFn& f, const BoundedSpace& box,
                                RngStream rng,
                                const std::vector<Eigen::VectorXd>& extra_starts,
                                const MultiStartOptions& opts) {
    const Eigen::Index p = box.dim();
    std::vector<Eigen::VectorXd> starts = extra_starts;

    if (p <= 2 && opts.grid_points > 1) {
        // Coarse scan; the best cell seeds a local search.
        Eigen::VectorXd best;
        double best_f = std::numeric_limits<double>::infinity();
        if (p == 1) {
            int m = opts.grid_points;
            for (int i = 0; i < m; ++i) {
                Eigen::VectorXd x(1);
                x[0] = box.lower[0] +
                       (box.upper[0] - box.lower[0]) * (static_cast<double>(i) + 0.5) /
                           static_cast<double>(m);
                double v = f(x);
                if (v < best_f) {
                    best_f = v;
                    best = x;
                }
            }
        } else {
            int m = static_cast<int>(std::sqrt(static_cast<double>(opts.grid_points)));
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    Eigen::VectorXd x(2);
                    x[0] = box.lower[0] + (box.upper[0] - box.lower[0]) *
                                              (static_cast<double>(i) + 0.5) /
                                              static_cast<double>(m);
                    x[1] = box.lower[1] + (box.upper[1] - box.lower[1]) *
                                              (static_cast<double>(j) + 0.5) /
                                              static_cast<double>(m);
                    double v = f(x);
                    if (v < best_f) {
                        best_f = v;
                        best = x;
                    }
                }
            }
        }
        starts.push_back(best);
    }

    for (int s = 0; s < opts.n_random_starts; ++s) {
        Eigen::VectorXd x(p);
        for (Eigen::Index j = 0; j < p; ++j) x[j] = rng.uniform(box.lower[j], box.upper[j]);
        starts.push_back(x);
    }

    OptimResult best;
    best.value = std::numeric_limits<double>::infinity();
    int total_evals = 0;
    for (const auto& s : starts) {
        OptimResult r = nelder_mead(f, s, box, opts.local);
        total_evals += r.evals;
        if (r.value < best.value) best = r;
    }
    best.evals = total_evals;
    return best;
}

double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace lfikit
