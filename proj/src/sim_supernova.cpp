#include "lfikit/sim_supernova.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lfikit/errors.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

namespace {
constexpr double kSpeedOfLight = 299792.458; // km/s
constexpr double kIntegralRelTol = 1e-8;
} // namespace

double sn_efunc(const SupernovaParams& p, double z) {
    double zp = 1.0 + z;
    double e2 = p.omega_m * zp * zp * zp +
                (1.0 - p.omega_m) * std::pow(zp, 3.0 * (1.0 + p.w0));
    if (!(e2 > 0.0))
        throw UnphysicalParams("expansion rate undefined: E(z)^2 <= 0 at z = " +
                               std::to_string(z));
    return std::sqrt(e2);
}

namespace {

double modulus_from_integral(const SupernovaParams& p, double z, double integral) {
    double hubble = 100.0 * p.h0; // km/s/Mpc
    double dl = (kSpeedOfLight / hubble) * (1.0 + z) * integral; // Mpc
    if (!(dl > 0.0))
        throw UnphysicalParams("luminosity distance nonpositive at z = " +
                               std::to_string(z));
    return 5.0 * std::log10(dl) + 25.0;
}

// Moduli at many redshifts for one parameter point: integrate 1/E once,
// cumulatively over the sorted redshifts, instead of restarting the
// quadrature from zero for every supernova.
std::vector<double> moduli_at(const SupernovaParams& p,
                              const std::vector<double>& z) {
    auto inv_e = [&p](double zz) { return 1.0 / sn_efunc(p, zz); };
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&z](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    std::vector<double> mu(z.size());
    double prev_z = 0.0, cum = 0.0;
    for (std::size_t idx : order) {
        cum += adaptive_simpson(inv_e, prev_z, z[idx], kIntegralRelTol);
        prev_z = z[idx];
        mu[idx] = modulus_from_integral(p, z[idx], cum);
    }
    return mu;
}

} // namespace

double sn_mu_model(const SupernovaParams& p, double z) {
    if (!(z > 0.0)) throw ConfigError("distance modulus needs z > 0");
    auto inv_e = [&p](double zz) { return 1.0 / sn_efunc(p, zz); };
    double integral = adaptive_simpson(inv_e, 0.0, z, kIntegralRelTol);
    return modulus_from_integral(p, z, integral);
}

double skew_normal_draw(const SkewNormalNoise& noise, RngStream& rng) {
    double delta = noise.shape / std::sqrt(1.0 + noise.shape * noise.shape);
    double u0 = rng.normal01();
    double u1 = rng.normal01();
    return noise.loc +
           noise.scale * (delta * std::abs(u0) +
                          std::sqrt(1.0 - delta * delta) * u1);
}

SupernovaDataset supernova_simulate(const SupernovaParams& p,
                                    const SupernovaDesign& design,
                                    const SkewNormalNoise& noise, RngStream rng) {
    if (design.n_sn < 2 * design.n_bins)
        throw ConfigError("supernova design needs at least two objects per bin");
    if (!(design.z_lo > 0.0 && design.z_hi > design.z_lo))
        throw ConfigError("supernova design needs 0 < z_lo < z_hi");
    if (design.n_bins < 1) throw ConfigError("supernova design needs >= 1 bin");

    const double width = (design.z_hi - design.z_lo) / design.n_bins;
    const std::size_t n_bins = static_cast<std::size_t>(design.n_bins);

    for (int attempt = 0; attempt < 2; ++attempt) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(attempt));
        std::vector<double> z(static_cast<std::size_t>(design.n_sn));
        for (double& zz : z) zz = stream.uniform(design.z_lo, design.z_hi);
        std::vector<double> mu = moduli_at(p, z);
        for (double& m : mu) m += skew_normal_draw(noise, stream);

        std::vector<std::size_t> bin_of(z.size());
        std::vector<double> sum(n_bins, 0.0);
        std::vector<std::size_t> count(n_bins, 0);
        for (std::size_t k = 0; k < z.size(); ++k) {
            auto b = static_cast<std::size_t>((z[k] - design.z_lo) / width);
            b = std::min(b, n_bins - 1);
            bin_of[k] = b;
            sum[b] += mu[k];
            ++count[b];
        }
        std::vector<double> ss(n_bins, 0.0);
        for (std::size_t k = 0; k < z.size(); ++k) {
            std::size_t b = bin_of[k];
            if (count[b] < 2) continue;
            double d = mu[k] - sum[b] / static_cast<double>(count[b]);
            ss[b] += d * d;
        }

        SupernovaDataset ds;
        ds.z_centers.resize(n_bins);
        ds.mu.resize(n_bins);
        ds.sigma.resize(n_bins);
        bool ok = true;
        for (std::size_t b = 0; b < n_bins; ++b) {
            ds.z_centers[b] = design.z_lo + (static_cast<double>(b) + 0.5) * width;
            if (count[b] < 2) {
                ok = false;
                break;
            }
            double n = static_cast<double>(count[b]);
            double mean = sum[b] / n;
            double var = ss[b] / (n - 1.0);
            if (!(var > 0.0)) {
                ok = false;
                break;
            }
            ds.mu[b] = mean;
            ds.sigma[b] = var;
        }
        if (ok) return ds;
    }
    throw AttemptBudgetExceeded(
        "supernova binning failed twice: a redshift bin had fewer than two "
        "objects or zero spread");
}

} // namespace lfikit
