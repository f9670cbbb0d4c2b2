#include "catapult/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "catapult/errors.hpp"
#include "catapult/phase.hpp"

namespace catapult {

namespace {

// replicate r runs in whichever worker picks it up; outputs land in slot r
template <typename Fn>
void parallel_replicates(long replicates, unsigned workers, Fn&& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<long>(replicates, 1)));
    if (workers <= 1) {
        for (long r = 0; r < replicates; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (long r = w; r < replicates; r += workers) fn(r);
        });
    }
    for (auto& t : pool) t.join();
}

long policy_horizon(const McConfig& cfg, double M) {
    if (cfg.horizon_override > 0) return cfg.horizon_override;
    return default_horizon(M, cfg.mu0, log_drift(cfg.ds, cfg.lambda0), cfg.horizon_multiplier);
}

struct StepTables {
    double eta;
    std::vector<double> s2, s4, cdf;

    explicit StepTables(const Dataset& ds) : eta(ds.eta()) {
        s2.reserve(ds.size());
        s4.reserve(ds.size());
        cdf.reserve(ds.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            s2.push_back(ds.s2(i));
            s4.push_back(ds.s4(i));
            acc += ds.point(i).p;
            cdf.push_back(acc);
        }
        cdf.back() = 1.0;
    }

    std::size_t sample(RngStream& rng) const {
        const double u = rng.next_unit();
        std::size_t i = 0;
        while (cdf[i] <= u) ++i;  // smallest i with cdf[i] > u
        return i;
    }

    void advance(double& mu, double& lam, std::size_t i, double n) const {
        const double mu2 = mu * mu;
        const double mu_new = (1.0 - eta * lam * s2[i] + eta * eta * s4[i] * mu2 / n) * mu;
        lam += (mu2 * eta / n) * (eta * lam * s4[i] - 4.0 * s2[i]);
        mu = mu_new;
    }
};

double ols_slope_stderr(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                        double& intercept) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    slope = sxy / sxx;
    intercept = my - slope * mx;
    if (x.size() < 3) return 0.0;
    double rss = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double resid = y[k] - (intercept + slope * x[k]);
        rss += resid * resid;
    }
    return std::sqrt(rss / (n - 2.0) / sxx);
}

}  // namespace

McEstimate wilson_estimate(long successes, long trials, long truncated) {
    McEstimate est;
    est.successes = successes;
    est.trials = trials;
    est.truncated = truncated;
    if (trials <= 0) return est;
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    est.p_hat = p;
    est.ci_lo = std::min(std::max(0.0, centre - half), p);
    est.ci_hi = std::max(std::min(1.0, centre + half), p);
    return est;
}

McEstimate estimate_hitting(const McConfig& cfg, double M, StopRule rule, double eps) {
    const long horizon = policy_horizon(cfg, M);
    const StepTables tab(cfg.ds);
    std::vector<std::uint8_t> outcome(cfg.replicates, 0);  // 0 truncated, 1 hit, 2 kernel-stop
    parallel_replicates(cfg.replicates, cfg.workers, [&](long r) {
        RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu = cfg.mu0, lam = cfg.lambda0;
        if (std::fabs(mu) >= M) {
            outcome[r] = 1;
            return;
        }
        for (long t = 0; t < horizon; ++t) {
            tab.advance(mu, lam, tab.sample(rng), cfg.n);
            if (!std::isfinite(mu)) break;
            if (std::fabs(mu) >= M) {
                outcome[r] = 1;
                return;
            }
            if (rule == StopRule::KernelEpsilonStops && lam < cfg.lambda0 - eps) {
                outcome[r] = 2;
                return;
            }
        }
    });
    long hits = 0, truncated = 0;
    for (auto o : outcome) {
        if (o == 1) ++hits;
        if (o == 0) ++truncated;
    }
    return wilson_estimate(hits, cfg.replicates, truncated);
}

std::vector<LadderPoint> hitting_ladder(const McConfig& cfg, const std::vector<double>& ladder,
                                        StopRule rule, double eps) {
    std::vector<LadderPoint> out;
    out.reserve(ladder.size());
    for (double M : ladder) out.push_back({M, estimate_hitting(cfg, M, rule, eps)});
    return out;
}

ExponentFit fit_exponent(const std::vector<LadderPoint>& ladder, double mu0) {
    ExponentFit fit;
    std::vector<double> x, y;
    for (const auto& pt : ladder) {
        if (pt.estimate.successes == 0) {
            fit.excluded_thresholds.push_back(pt.threshold);
            continue;
        }
        x.push_back(std::log(pt.threshold / std::fabs(mu0)));
        y.push_back(std::log(pt.estimate.p_hat));
    }
    if (x.size() < 3) throw InsufficientPointsError();
    fit.points_used = static_cast<int>(x.size());
    fit.stderr_slope = ols_slope_stderr(x, y, fit.slope, fit.intercept);
    return fit;
}

HittingTimeStats hitting_time_stats(const McConfig& cfg, double M, double delta) {
    const double g = log_drift(cfg.ds, cfg.lambda0);
    if (!(g > 0.0)) throw NotInflationaryError("hitting_time_stats needs G(lambda0) > 0");
    const double x = std::log(M / std::fabs(cfg.mu0));
    const long horizon = policy_horizon(cfg, M);
    const StepTables tab(cfg.ds);

    std::vector<double> normalized(cfg.replicates, -1.0);  // -1 marks truncation
    parallel_replicates(cfg.replicates, cfg.workers, [&](long r) {
        RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu = cfg.mu0, lam = cfg.lambda0;
        for (long t = 1; t <= horizon; ++t) {
            tab.advance(mu, lam, tab.sample(rng), cfg.n);
            if (!std::isfinite(mu)) return;
            if (std::fabs(mu) >= M) {
                normalized[r] = static_cast<double>(t) / x;
                return;
            }
        }
    });

    HittingTimeStats stats;
    stats.log_drift = g;
    stats.band_lo = (1.0 - delta) / g;
    stats.band_hi = (1.0 + delta) / g;
    stats.trials = cfg.replicates;
    std::vector<double> finished;
    finished.reserve(normalized.size());
    for (double v : normalized) {
        if (v < 0.0) {
            ++stats.truncated;
        } else {
            finished.push_back(v);
            if (v < stats.band_lo)
                ++stats.early;
            else if (v > stats.band_hi)
                ++stats.late;
            else
                ++stats.in_band;
        }
    }
    stats.fraction_in_band = static_cast<double>(stats.in_band) / static_cast<double>(cfg.replicates);
    if (!finished.empty()) {
        std::sort(finished.begin(), finished.end());
        const std::array<double, 5> qs{0.05, 0.25, 0.5, 0.75, 0.95};
        for (std::size_t k = 0; k < qs.size(); ++k) {
            const auto idx = static_cast<std::size_t>(qs[k] * (static_cast<double>(finished.size()) - 1.0));
            stats.normalized_quantiles[k] = finished[idx];
        }
    }
    return stats;
}

PostSpikeProfile post_spike_profile(const McConfig& cfg, double M_large, double lambda_target,
                                    int k_window, const std::vector<double>& m_minus_divisors) {
    const double g = log_drift(cfg.ds, cfg.lambda0);
    if (!(g > 0.0)) throw NotInflationaryError("post_spike_profile needs G(lambda0) > 0");
    const auto collapse = collapse_threshold(cfg.ds, cfg.lambda0);

    PostSpikeProfile prof;
    prof.M = M_large;
    prof.lambda_target = lambda_target;
    prof.lambda_coll = collapse.lambda_coll;
    prof.lambda_plus = std::max(lambda_target, collapse.lambda_coll);
    prof.trials = cfg.replicates;
    prof.m_minus_divisors = m_minus_divisors;

    const long spike_horizon = policy_horizon(cfg, M_large);
    const long post_budget = spike_horizon;  // collapse-restart cycles fit in one more spike scale
    const StepTables tab(cfg.ds);

    struct Row {
        bool spiked = false, dropped = false;
        long window = -1;     // tauK - t_peak
        long after_pred = -1;  // tauK - tauPred
        std::uint32_t dips = 0;  // bitmask over divisors
    };
    std::vector<Row> rows(cfg.replicates);

    parallel_replicates(cfg.replicates, cfg.workers, [&](long r) {
        RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu = cfg.mu0, lam = cfg.lambda0;
        Row& row = rows[r];
        long tau_pred = std::fabs(mu) >= M_large ? 0 : -1;
        long t_peak = 0;
        double peak = std::fabs(mu);
        for (long t = 1; t <= spike_horizon + post_budget; ++t) {
            tab.advance(mu, lam, tab.sample(rng), cfg.n);
            if (!std::isfinite(mu)) return;
            const double amu = std::fabs(mu);
            if (amu >= peak) {
                peak = amu;
                t_peak = t;
            }
            if (tau_pred < 0) {
                if (amu >= M_large) tau_pred = t;
                if (t >= spike_horizon) return;  // never spiked
            } else {
                for (std::size_t d = 0; d < m_minus_divisors.size(); ++d)
                    if (amu <= M_large / m_minus_divisors[d]) row.dips |= 1u << d;
            }
            if (tau_pred >= 0) {
                row.spiked = true;
                if (lam < lambda_target) {
                    row.dropped = true;
                    row.window = t - t_peak;
                    row.after_pred = t - tau_pred;
                    return;
                }
            }
        }
    });

    std::vector<long> window_counts(static_cast<std::size_t>(k_window) + 1, 0);
    std::vector<long> after_counts(static_cast<std::size_t>(k_window) + 1, 0);
    std::vector<long> dip_counts(m_minus_divisors.size(), 0);
    long within = 0;
    for (const auto& row : rows) {
        if (!row.spiked) continue;
        ++prof.spiking;
        if (row.dropped) ++prof.dropped;
        if (row.dropped && row.window <= k_window) {
            ++within;
            for (int k = static_cast<int>(std::max<long>(row.window, 0)); k <= k_window; ++k)
                ++window_counts[static_cast<std::size_t>(k)];
        }
        if (row.dropped && row.after_pred <= k_window)
            for (int k = static_cast<int>(std::max<long>(row.after_pred, 0)); k <= k_window; ++k)
                ++after_counts[static_cast<std::size_t>(k)];
        for (std::size_t d = 0; d < m_minus_divisors.size(); ++d)
            if (row.dips & (1u << d)) ++dip_counts[d];
    }
    const double denom = std::max<long>(prof.spiking, 1);
    prof.frac_within_window = static_cast<double>(within) / denom;
    prof.window_cdf.resize(window_counts.size());
    prof.post_pred_cdf.resize(after_counts.size());
    for (std::size_t k = 0; k < window_counts.size(); ++k) {
        prof.window_cdf[k] = static_cast<double>(window_counts[k]) / denom;
        prof.post_pred_cdf[k] = static_cast<double>(after_counts[k]) / denom;
    }
    prof.dip_fractions.resize(dip_counts.size());
    std::vector<double> x, y;
    for (std::size_t d = 0; d < dip_counts.size(); ++d) {
        prof.dip_fractions[d] = static_cast<double>(dip_counts[d]) / denom;
        if (dip_counts[d] > 0) {
            x.push_back(std::log(1.0 / m_minus_divisors[d]));
            y.push_back(std::log(prof.dip_fractions[d]));
        }
    }
    if (x.size() >= 2) {
        double intercept = 0.0;
        ols_slope_stderr(x, y, prof.fitted_dip_exponent, intercept);
    }
    return prof;
}

McEstimate slow_escape_probe(const McConfig& cfg, double M, double eps) {
    const long horizon = policy_horizon(cfg, M);
    const StepTables tab(cfg.ds);
    const double lam_stop = cfg.lambda0 - eps;
    std::vector<std::uint8_t> outcome(cfg.replicates, 0);  // 1 kernel first (tie included), 2 pred first
    parallel_replicates(cfg.replicates, cfg.workers, [&](long r) {
        RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu = cfg.mu0, lam = cfg.lambda0;
        for (long t = 0; t < horizon; ++t) {
            tab.advance(mu, lam, tab.sample(rng), cfg.n);
            if (!std::isfinite(mu)) return;
            if (lam < lam_stop) {  // checked first: a tie counts for the kernel
                outcome[r] = 1;
                return;
            }
            if (std::fabs(mu) >= M) {
                outcome[r] = 2;
                return;
            }
        }
    });
    long events = 0, truncated = 0;
    for (auto o : outcome) {
        if (o == 1) ++events;
        if (o == 0) ++truncated;
    }
    return wilson_estimate(events, cfg.replicates, truncated);
}

ReluChannelResult relu_channel_experiment(const ReluChannelConfig& cfg,
                                          const std::vector<double>& ladder) {
    ReluChannelResult result;
    auto [ds_plus, ds_minus] = cfg.ds.split_signs();
    const double g_plus = log_drift(ds_plus, cfg.lambda0_plus);
    const double g_minus = log_drift(ds_minus, cfg.lambda0_minus);
    const double n_width = static_cast<double>(cfg.width);

    const double m_top = *std::max_element(ladder.begin(), ladder.end());
    const long horizon =
        cfg.horizon_override > 0
            ? cfg.horizon_override
            : std::max(default_horizon(m_top, cfg.mu0_plus, g_plus, cfg.horizon_multiplier),
                       default_horizon(m_top, cfg.mu0_minus, g_minus, cfg.horizon_multiplier));

    // reduced-pair ensemble: per-replicate running max of |mu+|, |mu-|
    std::vector<double> max_plus(cfg.replicates_reduced, 0.0), max_minus(cfg.replicates_reduced, 0.0);
    const StepTables tab(cfg.ds);
    parallel_replicates(cfg.replicates_reduced, cfg.workers, [&](long r) {
        RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu_p = cfg.mu0_plus, lam_p = cfg.lambda0_plus;
        double mu_m = cfg.mu0_minus, lam_m = cfg.lambda0_minus;
        double mp = std::fabs(mu_p), mm = std::fabs(mu_m);
        for (long t = 0; t < horizon && (mp < m_top || mm < m_top); ++t) {
            const std::size_t i = tab.sample(rng);
            const double s = cfg.ds.point(i).s;
            if (s > 0.0)
                tab.advance(mu_p, lam_p, i, n_width);
            else if (s < 0.0)
                tab.advance(mu_m, lam_m, i, n_width);
            if (!std::isfinite(mu_p) || !std::isfinite(mu_m)) break;
            mp = std::max(mp, std::fabs(mu_p));
            mm = std::max(mm, std::fabs(mu_m));
        }
        max_plus[r] = mp;
        max_minus[r] = mm;
    });

    // independent code path: linear dynamics on the sign-split datasets,
    // driven by the same streams; zero-valued split points step the identity
    std::vector<double> split_plus(cfg.replicates_reduced, 0.0), split_minus(cfg.replicates_reduced, 0.0);
    const StepTables tab_plus(ds_plus), tab_minus(ds_minus);
    parallel_replicates(cfg.replicates_reduced, cfg.workers, [&](long r) {
        RngStream rng_p(cfg.master_seed, static_cast<std::uint64_t>(r));
        double mu = cfg.mu0_plus, lam = cfg.lambda0_plus;
        double mx = std::fabs(mu);
        for (long t = 0; t < horizon && mx < m_top; ++t) {
            tab_plus.advance(mu, lam, tab_plus.sample(rng_p), n_width);
            if (!std::isfinite(mu)) break;
            mx = std::max(mx, std::fabs(mu));
        }
        split_plus[r] = mx;
        RngStream rng_m(cfg.master_seed, static_cast<std::uint64_t>(r));
        mu = cfg.mu0_minus;
        lam = cfg.lambda0_minus;
        mx = std::fabs(mu);
        for (long t = 0; t < horizon && mx < m_top; ++t) {
            tab_minus.advance(mu, lam, tab_minus.sample(rng_m), n_width);
            if (!std::isfinite(mu)) break;
            mx = std::max(mx, std::fabs(mu));
        }
        split_minus[r] = mx;
    });

    result.split_crosscheck_ok = true;
    for (double M : ladder) {
        long hp = 0, hm = 0, sp = 0, sm = 0;
        for (long r = 0; r < cfg.replicates_reduced; ++r) {
            hp += max_plus[r] >= M;
            hm += max_minus[r] >= M;
            sp += split_plus[r] >= M;
            sm += split_minus[r] >= M;
        }
        if (hp != sp || hm != sm) result.split_crosscheck_ok = false;
        result.plus_channel.push_back({M, wilson_estimate(hp, cfg.replicates_reduced)});
        result.minus_channel.push_back({M, wilson_estimate(hm, cfg.replicates_reduced)});
    }
    try {
        result.fit_plus = fit_exponent(result.plus_channel, cfg.mu0_plus);
    } catch (const InsufficientPointsError&) {
    }
    try {
        result.fit_minus = fit_exponent(result.minus_channel, cfg.mu0_minus);
    } catch (const InsufficientPointsError&) {
    }

    // full-parameter ensemble: flip statistics plus reduced-vs-full deviation
    std::vector<long> flips(cfg.replicates_full, 0);
    std::vector<double> devs(cfg.replicates_full, 0.0);
    parallel_replicates(cfg.replicates_full, cfg.workers, [&](long r) {
        NetworkParams params = init_relu_wbiased(cfg.width, cfg.mu0_plus, cfg.mu0_minus,
                                                 cfg.lambda0_plus, cfg.lambda0_minus);
        ReluSimConfig sim;
        sim.seed = cfg.master_seed;
        sim.stream_id = static_cast<std::uint64_t>(r);
        sim.horizon = cfg.full_horizon;
        const auto full = simulate_relu(cfg.ds, std::move(params), sim);
        ReluState st{0, cfg.mu0_plus, cfg.mu0_minus, cfg.lambda0_plus, cfg.lambda0_minus};
        ReluSimConfig sim_reduced = sim;
        const auto reduced = simulate_reduced_pair(cfg.ds, n_width, st, sim_reduced);
        long fl = 0;
        for (const auto& rep : full.reports) fl += rep.flipped;
        flips[r] = fl;
        double dev = 0.0;
        const std::size_t steps = std::min(full.states.size(), reduced.states.size());
        for (std::size_t t = 0; t < steps; ++t) {
            const auto& a = full.states[t];
            const auto& b = reduced.states[t];
            const auto rel = [](double u, double v) {
                return std::fabs(u - v) / std::max({std::fabs(u), std::fabs(v), 1e-12});
            };
            dev = std::max({dev, rel(a.mu_plus, b.mu_plus), rel(a.mu_minus, b.mu_minus),
                            rel(a.lam_plus, b.lam_plus), rel(a.lam_minus, b.lam_minus)});
        }
        devs[r] = dev;
    });
    result.full_runs = cfg.replicates_full;
    for (long r = 0; r < cfg.replicates_full; ++r) {
        result.full_flips += flips[r];
        result.max_channel_deviation = std::max(result.max_channel_deviation, devs[r]);
    }
    return result;
}

}  // namespace catapult
