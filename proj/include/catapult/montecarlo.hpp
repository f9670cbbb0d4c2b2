#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "catapult/dataset.hpp"
#include "catapult/dynamics_relu.hpp"

namespace catapult {

// Ensemble experiments over the reduced dynamics. Replicate r always draws
// from the RNG stream (master_seed, r), results are aggregated in replicate
// order, so estimates are bit-identical no matter how many workers run them.

struct McConfig {
    Dataset ds;
    double n = 1e8;
    double mu0 = 1.0;
    double lambda0 = 1.0;
    long replicates = 1000;
    std::uint64_t master_seed = 0;
    double horizon_multiplier = 50.0;
    long horizon_override = 0;  // > 0: fixed horizon instead of the policy
    unsigned workers = 0;       // 0 = hardware concurrency
};

struct McEstimate {
    double p_hat = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // 95% Wilson
    long successes = 0, trials = 0;
    long truncated = 0;  // replicates cut by the horizon with no verdict
};

McEstimate wilson_estimate(long successes, long trials, long truncated = 0);

struct LadderPoint {
    double threshold;
    McEstimate estimate;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int points_used = 0;
    std::vector<double> excluded_thresholds;  // rungs with zero successes
};

enum class StopRule { HorizonOnly, KernelEpsilonStops };

// P(tau^Pred_M < horizon), optionally also stopping (as failure) when the
// kernel leaves [lambda0 - eps, lambda0] first.
McEstimate estimate_hitting(const McConfig& cfg, double M, StopRule rule = StopRule::HorizonOnly,
                            double eps = 0.0);

std::vector<LadderPoint> hitting_ladder(const McConfig& cfg, const std::vector<double>& ladder,
                                        StopRule rule = StopRule::HorizonOnly, double eps = 0.0);

// OLS of log p_hat against log(threshold/|mu0|); zero-success rungs are
// excluded and reported. Throws InsufficientPointsError below 3 usable rungs.
ExponentFit fit_exponent(const std::vector<LadderPoint>& ladder, double mu0);

struct HittingTimeStats {
    double log_drift;         // G(lambda0), must be > 0
    double band_lo, band_hi;  // band on tau / log(M/|mu0|)
    double fraction_in_band;  // among all replicates, truncated count as out
    long in_band = 0, early = 0, late = 0, truncated = 0, trials = 0;
    std::array<double, 5> normalized_quantiles{};  // 5/25/50/75/95%
};

HittingTimeStats hitting_time_stats(const McConfig& cfg, double M, double delta);

struct PostSpikeProfile {
    double M = 0.0;
    double lambda_target = 0.0;
    double lambda_coll = 0.0;
    double lambda_plus = 0.0;  // max(lambda_target, lambda_coll): guaranteed-fast target
    long trials = 0;
    long spiking = 0;  // tau^Pred_M before horizon
    long dropped = 0;  // kernel reached lambda_target before the post-spike budget
    double frac_within_window = 0.0;     // P(tau^K - t_peak <= k_window | spiking)
    std::vector<double> window_cdf;      // P(tau^K - t_peak <= k | spiking), k = 0..k_window
    std::vector<double> post_pred_cdf;   // P(tau^K - tau^Pred <= k | spiking)
    std::vector<double> m_minus_divisors;
    std::vector<double> dip_fractions;   // P(dip to M/div before tau^K | spiking), nested
    double fitted_dip_exponent = 0.0;    // slope of log dip-freq vs log(1/div)
};

// Conditional post-spike geometry: time from the spike peak (arg max |mu|,
// ties resolved to the latest) to the kernel crossing lambda_target, and the
// frequency of descending to M/div before that crossing. Conditioning is by
// rejection: replicates that never spike are reported but excluded.
PostSpikeProfile post_spike_profile(const McConfig& cfg, double M_large, double lambda_target,
                                    int k_window, const std::vector<double>& m_minus_divisors);

// P(tau^K_{lambda0 - eps} <= tau^Pred_M): a tie at the same step counts as a
// kernel event.
McEstimate slow_escape_probe(const McConfig& cfg, double M, double eps);

struct ReluChannelConfig {
    Dataset ds;
    std::size_t width = 1024;        // full-parameter ensemble width
    double mu0_plus = 1.0, mu0_minus = 1.0;
    double lambda0_plus = 1.0, lambda0_minus = 1.0;
    long replicates_reduced = 10000;
    long replicates_full = 50;
    long full_horizon = 200;
    long horizon_override = 0;  // > 0: fixed reduced-ensemble horizon
    std::uint64_t master_seed = 0;
    double horizon_multiplier = 50.0;
    unsigned workers = 0;
};

struct ReluChannelResult {
    std::vector<LadderPoint> plus_channel, minus_channel;  // reduced-pair estimates
    bool split_crosscheck_ok = false;  // same counts from dynamics_linear on the split datasets
    std::optional<ExponentFit> fit_plus, fit_minus;
    long full_runs = 0;
    long full_flips = 0;             // total sign flips seen in the full ensemble
    double max_channel_deviation = 0.0;  // reduced vs full observables, relative
};

ReluChannelResult relu_channel_experiment(const ReluChannelConfig& cfg,
                                          const std::vector<double>& ladder);

}  // namespace catapult
