#pragma once

#include <vector>

#include "lfikit/rng.hpp"

namespace lfikit {

// Flat dark-energy cosmology: E(z) = sqrt(Om (1+z)^3 + (1-Om) (1+z)^{3(1+w0)}).
// h0 is treated as known. omega_m is physically meaningful only inside (0, 1);
// the simulator still evaluates outside that range as long as E(z)^2 stays
// positive over the requested redshifts, and throws UnphysicalParams otherwise.
struct SupernovaParams {
    double omega_m = 0.3;
    double w0 = -1.0;
    double h0 = 0.7;
    bool physical() const { return omega_m > 0.0 && omega_m < 1.0; }
};

struct SupernovaDesign {
    int n_sn = 400;
    double z_lo = 0.5, z_hi = 1.0;
    int n_bins = 20;
};

// Observational noise added to each distance modulus, in magnitudes.
struct SkewNormalNoise {
    double loc = -0.1;
    double scale = 0.3;
    double shape = 5.0;
};

// Binned catalogue: equal-width redshift bins with their centers, the mean
// noisy modulus per bin, and the per-bin dispersion weight sigma used by the
// weighted squared distance. sigma stores the bin sample variance of the
// moduli: that convention reproduces the documented tolerance scale of the
// cosmology study (final adaptive tolerances in the twenties), which a
// standard-deviation convention misses by an order of magnitude.
struct SupernovaDataset {
    std::vector<double> z_centers;
    std::vector<double> mu;
    std::vector<double> sigma;
};

// Dimensionless expansion rate E(z). Throws UnphysicalParams when the
// radicand is nonpositive.
double sn_efunc(const SupernovaParams& p, double z);

// Distance modulus mu(z) = 5 log10( (c/H0) (1+z) \int_0^z dz'/E(z') ) + 25
// with c = 299792.458 km/s, H0 = 100 h0 km/s/Mpc, distance in Mpc. The
// integral uses adaptive Simpson quadrature to relative tolerance 1e-8.
double sn_mu_model(const SupernovaParams& p, double z);

// One draw of Z = loc + scale (delta |U0| + sqrt(1-delta^2) U1),
// delta = shape / sqrt(1 + shape^2); U0, U1 iid standard normal.
double skew_normal_draw(const SkewNormalNoise& noise, RngStream& rng);

// Draws n_sn uniform redshifts on [z_lo, z_hi], computes each modulus, adds
// independent skew-normal noise, and bins into n_bins equal-width bins
// (means + sample variances). A bin with fewer than two members or zero
// spread triggers one full retry before AttemptBudgetExceeded.
SupernovaDataset supernova_simulate(const SupernovaParams& p,
                                    const SupernovaDesign& design,
                                    const SkewNormalNoise& noise, RngStream rng);

} // namespace lfikit
