#include "lfikit/sim_ebola.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "lfikit/errors.hpp"
#include "lfikit/special.hpp"

namespace lfikit {

namespace {

struct Indiv {
    double inf_start;   // infectious from (absolute days)
    double inf_end;     // infectious until
    double sympt;       // symptom onset
    double resolve;     // enters terminal state at
    bool recovers;
};

struct StopRule {
    std::int64_t threshold = -1; // cumulative count to exceed; -1: run to caps
    int extra_days = 0;          // finalized days needed past the exceedance
};

EbolaRun simulate_impl(const EbolaConfig& cfg, double r0, RngStream rng,
                       const StopRule& stop) {
    if (!(r0 > 0.0)) throw ConfigError("ebola: r0 must be positive");
    const double p_inf = cfg.dt * r0 / cfg.mean_infectious;
    if (p_inf > 1.0)
        throw ConfigError("ebola: dt * r0 / mean_infectious exceeds 1");
    const int horizon_days = cfg.max_weeks * 7;
    const std::size_t max_steps = static_cast<std::size_t>(
        std::ceil(static_cast<double>(horizon_days) / cfg.dt)) + 1;

    std::vector<Indiv> people;
    people.reserve(1024);
    std::vector<std::vector<std::uint32_t>> activation(max_steps + 2);
    std::vector<std::int64_t> onsets_by_day(static_cast<std::size_t>(horizon_days) + 1, 0);

    auto create = [&](double infection_time) {
        Indiv ind;
        double t_lat = rng.gamma(cfg.latent_shape, cfg.latent_scale);
        double incub = rng.uniform(cfg.incubation_lo, cfg.incubation_hi);
        double t_inf = rng.gamma(cfg.infectious_shape, cfg.infectious_scale);
        ind.recovers = rng.uniform01() < cfg.p_recover;
        double delay = ind.recovers ? rng.gamma(cfg.recover_shape, cfg.recover_scale)
                                    : rng.gamma(cfg.death_shape, cfg.death_scale);
        ind.inf_start = infection_time + t_lat;
        ind.inf_end = ind.inf_start + t_inf;
        ind.sympt = infection_time + incub * t_lat;
        ind.resolve = ind.inf_end + delay;
        double onset_day = std::floor(ind.sympt);
        if (onset_day <= horizon_days)
            onsets_by_day[static_cast<std::size_t>(onset_day)] += 1;
        std::size_t act_step = static_cast<std::size_t>(std::ceil(ind.inf_start / cfg.dt));
        if (act_step < activation.size())
            activation[act_step].push_back(static_cast<std::uint32_t>(people.size()));
        people.push_back(ind);
    };

    create(0.0);

    std::vector<std::uint32_t> active;
    std::size_t pending = 1; // created, not yet past the infectious window
    double stop_time = 0.0;
    bool died_out = false;
    bool capped = false;

    // Day-finalization cursor for the early-stop rule: at step time t every
    // day < floor(t) has its cumulative count settled (future symptom onsets
    // all land at later times).
    std::int64_t running_cum = 0;
    int cursor = 0;
    std::int64_t exceed_day = -1;
    auto finalize_through = [&](int day_limit) {
        while (cursor <= std::min(day_limit, horizon_days)) {
            running_cum += onsets_by_day[static_cast<std::size_t>(cursor)];
            if (exceed_day < 0 && stop.threshold >= 0 && running_cum > stop.threshold)
                exceed_day = cursor;
            ++cursor;
        }
    };

    for (std::size_t s = 0;; ++s) {
        double t = static_cast<double>(s) * cfg.dt;
        stop_time = t;
        if (t > horizon_days) break;

        finalize_through(static_cast<int>(std::floor(t)) - 1);
        if (stop.threshold >= 0 && exceed_day >= 0 &&
            cursor > static_cast<int>(exceed_day) + stop.extra_days)
            break;

        for (std::uint32_t idx : activation[s]) active.push_back(idx);
        activation[s].clear();

        std::size_t next_size = people.size();
        std::size_t kept = 0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const Indiv& ind = people[active[a]];
            if (t >= ind.inf_end) {
                --pending;
                continue;
            }
            active[kept++] = active[a];
            if (rng.uniform01() < p_inf && next_size < cfg.max_infected) ++next_size;
        }
        active.resize(kept);

        std::size_t new_infections = next_size - people.size();
        for (std::size_t k = 0; k < new_infections; ++k) {
            create(t + cfg.dt);
            ++pending;
        }
        if (people.size() >= cfg.max_infected) {
            capped = true;
            break;
        }
        if (active.empty() && pending == 0) {
            died_out = true;
            break;
        }
    }

    EbolaRun run;
    run.n_infected = people.size();
    run.died_out = died_out;

    // With no actives left every recorded onset is final; otherwise only days
    // strictly before the stop time are.
    int last_final_day = died_out ? horizon_days
                                  : static_cast<int>(std::floor(stop_time)) - 1;
    last_final_day = std::min(last_final_day, horizon_days);
    finalize_through(last_final_day);

    std::int64_t cum = 0;
    int first_day = -1;
    std::vector<std::int64_t> counts;
    for (int d = 0; d <= last_final_day; ++d) {
        cum += onsets_by_day[static_cast<std::size_t>(d)];
        if (first_day < 0) {
            if (cum >= 1) {
                first_day = d;
                counts.push_back(cum);
            }
        } else {
            counts.push_back(cum);
        }
    }
    run.series.counts = std::move(counts);
    run.series.first_day = (first_day < 0) ? 0 : first_day;

    double end_time = stop_time;
    for (const Indiv& ind : people) {
        if (ind.resolve <= end_time) {
            if (ind.recovers) ++run.n_recovered;
            else ++run.n_perished;
        }
    }
    (void)capped;
    return run;
}

} // namespace

EbolaRun ebola_simulate_full(const EbolaConfig& cfg, double r0, RngStream rng) {
    return simulate_impl(cfg, r0, rng, {});
}

CaseSeries ebola_simulate(const EbolaConfig& cfg, double r0, RngStream rng) {
    return simulate_impl(cfg, r0, rng, {}).series;
}

std::vector<std::int64_t> align_to_observed(const EbolaConfig& cfg, double r0,
                                            std::int64_t first_obs_count, int n_days,
                                            RngStream rng, int max_retries,
                                            std::uint64_t* calls_out) {
    if (n_days < 1) throw ConfigError("ebola: alignment window must cover >= 1 day");
    if (first_obs_count < 0)
        throw ConfigError("ebola: first_obs_count must be nonnegative");
    StopRule stop{first_obs_count, n_days};
    for (int k = 0; k < max_retries; ++k) {
        EbolaRun run = simulate_impl(cfg, r0, rng.child(static_cast<std::uint64_t>(k)),
                                     stop);
        if (calls_out) ++*calls_out;
        const auto& c = run.series.counts;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] > first_obs_count) {
                if (j + static_cast<std::size_t>(n_days) <= c.size()) {
                    return std::vector<std::int64_t>(
                        c.begin() + static_cast<std::ptrdiff_t>(j),
                        c.begin() + static_cast<std::ptrdiff_t>(j) + n_days);
                }
                break; // window runs past the horizon; fresh epidemic
            }
        }
    }
    throw AlignmentFailed("ebola: no epidemic exceeded count " +
                              std::to_string(first_obs_count) + " within " +
                              std::to_string(max_retries) + " attempts",
                          max_retries);
}

double ebola_summary(const std::vector<double>& window) {
    if (window.size() < 2)
        throw ConfigError("ebola: summary needs at least two days of counts");
    std::vector<double> slopes;
    slopes.reserve(window.size() - 1);
    for (std::size_t i = 0; i + 1 < window.size(); ++i) {
        double a = std::max(window[i], 1.0);
        double b = std::max(window[i + 1], 1.0);
        slopes.push_back(std::log(b) - std::log(a));
    }
    return median(std::move(slopes));
}

std::vector<double> serial_interval_weights(int max_days) {
    if (max_days < 1) throw ConfigError("serial interval: max_days must be >= 1");
    const double cv = 0.66;
    const double shape = 1.0 / (cv * cv);
    const double scale = 15.0 * cv * cv;
    std::vector<double> w(static_cast<std::size_t>(max_days));
    double prev = 0.0;
    for (int s = 1; s <= max_days; ++s) {
        double cur = gamma_cdf(static_cast<double>(s), shape, scale);
        w[static_cast<std::size_t>(s - 1)] = cur - prev;
        prev = cur;
    }
    return w;
}

double team_wer_loglik(const std::vector<std::int64_t>& incidence, double r0,
                       int t_exp, const std::vector<double>& omega) {
    if (t_exp < 1) throw ConfigError("serial interval likelihood: t_exp must be >= 1");
    if (incidence.size() < static_cast<std::size_t>(t_exp) + 1)
        throw ConfigError("serial interval likelihood: series shorter than t_exp + 1");
    if (!(r0 >= 0.0))
        throw ConfigError("serial interval likelihood: r0 must be nonnegative");
    double ll = 0.0;
    for (int t = 1; t <= t_exp; ++t) {
        double lam = 0.0;
        int smax = std::min<int>(t, static_cast<int>(omega.size()));
        for (int s = 1; s <= smax; ++s)
            lam += omega[static_cast<std::size_t>(s - 1)] *
                   static_cast<double>(incidence[static_cast<std::size_t>(t - s)]);
        lam *= r0;
        lam = std::max(lam, 1e-12);
        double k = static_cast<double>(incidence[static_cast<std::size_t>(t)]);
        ll += k * std::log(lam) - lam - std::lgamma(k + 1.0);
    }
    return ll;
}

} // namespace lfikit
