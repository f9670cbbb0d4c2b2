#include "catapult/dynamics_relu.hpp"

#include <cmath>
#include <string>

#include "catapult/errors.hpp"

namespace catapult {

namespace {

void advance_channel(double& mu, double& lam, double eta, double s2, double s4, double n,
                     ReluPairRule rule) {
    const double mu2 = mu * mu;
    const double drift = rule == ReluPairRule::kMatchesOracle ? eta * lam * s2 : 2.0 * eta * lam * s2;
    const double mu_new = (1.0 - drift + eta * eta * s4 * mu2 / n) * mu;
    lam += (mu2 * eta / n) * (eta * lam * s4 - 4.0 * s2);
    mu = mu_new;
}

// scale_hint guards the comparison when got/want sit at a cancellation near
// zero far below the working magnitudes
void check_identity(double got, double want, double scale_hint, const char* what) {
    const double scale = std::max({std::fabs(got), std::fabs(want), std::fabs(scale_hint), 1e-12});
    if (std::fabs(got - want) > 1e-9 * scale)
        throw Error(std::string("relu consistency: ") + what + " deviates: got " +
                    std::to_string(got) + " want " + std::to_string(want));
}

}  // namespace

ReluState step_reduced_pair(const ReluState& state, std::size_t i, const Dataset& ds, double n,
                            ReluPairRule rule) {
    ReluState next = state;
    next.t = state.t + 1;
    const double s = ds.point(i).s;
    if (s > 0.0) {
        advance_channel(next.mu_plus, next.lam_plus, ds.eta(), ds.s2(i), ds.s4(i), n, rule);
    } else if (s < 0.0) {
        advance_channel(next.mu_minus, next.lam_minus, ds.eta(), ds.s2(i), ds.s4(i), n, rule);
    }
    return next;
}

ReluStepReport step_relu_full(NetworkParams& params, std::size_t i, const Dataset& ds,
                              const ReluObservables& mu_cache, bool check_consistency) {
    ReluStepReport report;
    const double s = ds.point(i).s;
    if (s == 0.0) return report;  // F(Theta, 0) = 0, gradient vanishes

    const bool positive = s > 0.0;
    const double mu_drive = positive ? mu_cache.mu_plus : mu_cache.mu_minus;
    const double n = static_cast<double>(params.n());
    const double c = ds.eta() / std::sqrt(n) * mu_drive * ds.s2(i);

    double flip_sq = 0.0;    // sum of (w'^2 + a'^2) over flipped neurons
    double flip_prod = 0.0;  // sum over flips of a' * sigma(w') in the receiving channel
    for (std::size_t r = 0; r < params.n(); ++r) {
        const double w = params.w[r], a = params.a[r];
        if (positive) {
            if (w > 0.0) {
                const double w_new = w - c * a;
                const double a_new = a - c * w;
                params.w[r] = w_new;
                params.a[r] = a_new;
                if (w_new <= 0.0) {
                    ++report.flipped;
                    flip_sq += w_new * w_new + a_new * a_new;
                    flip_prod += a_new * (-w_new);
                }
            }
        } else {
            // mirror of the s > 0 rule under w -> -w: active neurons have w < 0
            if (w < 0.0) {
                const double w_new = w + c * a;
                const double a_new = a + c * w;
                params.w[r] = w_new;
                params.a[r] = a_new;
                if (w_new >= 0.0) {
                    ++report.flipped;
                    flip_sq += w_new * w_new + a_new * a_new;
                    flip_prod += a_new * w_new;
                }
            }
        }
    }
    if (report.flipped > 0) {
        report.delta_ker = flip_sq / n;
        report.delta_pred = mu_drive != 0.0 ? flip_prod / std::sqrt(n) / mu_drive : 0.0;
    }

    if (check_consistency) {
        const auto now = observables_relu(params);
        const double eta = ds.eta();
        const double s2 = ds.s2(i), s4 = ds.s4(i);
        const double lam_drive = positive ? mu_cache.lam_plus : mu_cache.lam_minus;
        const double mu_other = positive ? mu_cache.mu_minus : mu_cache.mu_plus;
        const double lam_other = positive ? mu_cache.lam_minus : mu_cache.lam_plus;
        const double drift_mu =
            (1.0 - eta * lam_drive * s2 + eta * eta * s4 * mu_drive * mu_drive / n + report.delta_pred) *
            mu_drive;
        const double drift_lam = lam_drive +
                                 (mu_drive * mu_drive * eta / n) * (eta * lam_drive * s4 - 4.0 * s2) -
                                 report.delta_ker;
        // the observables are n^{-1/2} (resp. n^{-1}) sums of O(lam)-sized
        // products, so their rounding floor is set by the gross parameter
        // scale, not by a possibly cancelled mu
        const double lam_total = mu_cache.lam_plus + mu_cache.lam_minus;
        const double mu_scale = std::sqrt(n) * lam_total;
        check_identity(positive ? now.mu_plus : now.mu_minus, drift_mu, mu_scale,
                       "active-channel mu");
        check_identity(positive ? now.lam_plus : now.lam_minus, drift_lam, lam_total,
                       "active-channel lambda");
        check_identity(positive ? now.mu_minus : now.mu_plus,
                       mu_other + report.delta_pred * mu_drive, mu_scale, "passive-channel mu");
        check_identity(positive ? now.lam_minus : now.lam_plus, lam_other + report.delta_ker,
                       lam_total, "passive-channel lambda");
    }
    return report;
}

namespace {

ReluState to_state(long t, const ReluObservables& obs) {
    return {t, obs.mu_plus, obs.mu_minus, obs.lam_plus, obs.lam_minus};
}

}  // namespace

ReluTrajectory simulate_relu(const Dataset& ds, NetworkParams params, const ReluSimConfig& cfg) {
    RngStream rng(cfg.seed, cfg.stream_id);
    IndexSampler sample(ds);
    ReluTrajectory traj;

    ReluObservables obs = observables_relu(params);
    ReluState st = to_state(0, obs);
    const auto check_taus = [&](const ReluState& s) {
        if (!cfg.pred_threshold) return;
        if (!traj.tau_pred_plus && std::fabs(s.mu_plus) >= *cfg.pred_threshold)
            traj.tau_pred_plus = s.t;
        if (!traj.tau_pred_minus && std::fabs(s.mu_minus) >= *cfg.pred_threshold)
            traj.tau_pred_minus = s.t;
    };
    if (cfg.record_states) traj.states.push_back(st);
    check_taus(st);

    for (long t = 0; t < cfg.horizon; ++t) {
        const std::size_t i = sample(rng);
        const auto report = step_relu_full(params, i, ds, obs, cfg.check_consistency);
        obs = observables_relu(params);
        st = to_state(t + 1, obs);
        if (!std::isfinite(st.mu_plus) || !std::isfinite(st.mu_minus) ||
            !std::isfinite(st.lam_plus) || !std::isfinite(st.lam_minus)) {
            traj.status = RunStatus::Diverged;
            break;
        }
        if (cfg.record_states) {
            traj.states.push_back(st);
            traj.indices.push_back(i);
            traj.reports.push_back(report);
        }
        if (report.flipped > 0 && !traj.first_flip_time) traj.first_flip_time = t + 1;
        traj.total_delta_ker += report.delta_ker;
        check_taus(st);
        if (cfg.stop_at_pred && (traj.tau_pred_plus || traj.tau_pred_minus)) {
            traj.status = RunStatus::HitPredThreshold;
            break;
        }
    }
    traj.final_state = st;
    return traj;
}

ReluTrajectory simulate_reduced_pair(const Dataset& ds, double n, const ReluState& state0,
                                     const ReluSimConfig& cfg, ReluPairRule rule) {
    RngStream rng(cfg.seed, cfg.stream_id);
    IndexSampler sample(ds);
    ReluTrajectory traj;
    ReluState st = state0;
    st.t = 0;
    const auto check_taus = [&](const ReluState& s) {
        if (!cfg.pred_threshold) return;
        if (!traj.tau_pred_plus && std::fabs(s.mu_plus) >= *cfg.pred_threshold)
            traj.tau_pred_plus = s.t;
        if (!traj.tau_pred_minus && std::fabs(s.mu_minus) >= *cfg.pred_threshold)
            traj.tau_pred_minus = s.t;
    };
    if (cfg.record_states) traj.states.push_back(st);
    check_taus(st);
    for (long t = 0; t < cfg.horizon; ++t) {
        const std::size_t i = sample(rng);
        st = step_reduced_pair(st, i, ds, n, rule);
        if (!std::isfinite(st.mu_plus) || !std::isfinite(st.mu_minus) ||
            std::fabs(st.mu_plus) > kDivergenceGuard || std::fabs(st.mu_minus) > kDivergenceGuard) {
            traj.status = RunStatus::Diverged;
            break;
        }
        if (cfg.record_states) {
            traj.states.push_back(st);
            traj.indices.push_back(i);
        }
        check_taus(st);
        if (cfg.stop_at_pred && (traj.tau_pred_plus || traj.tau_pred_minus)) {
            traj.status = RunStatus::HitPredThreshold;
            break;
        }
    }
    traj.final_state = st;
    return traj;
}

}  // namespace catapult
