#include "catapult/dynamics_linear.hpp"

#include <cmath>

#include "catapult/errors.hpp"

namespace catapult {

LinearState step_linear(const LinearState& state, std::size_t i, const Dataset& ds, double n) {
    const double eta = ds.eta();
    const double s2 = ds.s2(i);
    const double s4 = ds.s4(i);
    const double mu2 = state.mu * state.mu;
    return {state.t + 1, (1.0 - eta * state.lam * s2 + eta * eta * s4 * mu2 / n) * state.mu,
            state.lam + (mu2 * eta / n) * (eta * state.lam * s4 - 4.0 * s2)};
}

Trajectory simulate(const Dataset& ds, const SimConfig& cfg) {
    if (cfg.horizon < 1) throw Error("simulate: horizon must be >= 1");
    RngStream rng(cfg.seed, cfg.stream_id);
    IndexSampler sample(ds);

    Trajectory traj;
    LinearState st{0, cfg.mu0, cfg.lambda0};
    const auto record = [&](const LinearState& s) {
        if (cfg.record == RecordMode::Full ||
            (cfg.record == RecordMode::Strided && s.t % std::max<long>(cfg.stride, 1) == 0))
            traj.states.push_back(s);
    };
    const auto check_thresholds = [&](const LinearState& s) {
        if (cfg.pred_threshold && !traj.tau_pred && std::fabs(s.mu) >= *cfg.pred_threshold)
            traj.tau_pred = s.t;
        if (cfg.kernel_threshold && !traj.tau_kernel && s.lam < *cfg.kernel_threshold)
            traj.tau_kernel = s.t;
    };

    const auto stop_now = [&]() {
        if (cfg.stop_at_pred && traj.tau_pred) {
            traj.status = RunStatus::HitPredThreshold;
            return true;
        }
        if (cfg.stop_at_kernel && traj.tau_kernel) {
            traj.status = RunStatus::HitKernelThreshold;
            return true;
        }
        return false;
    };

    record(st);
    check_thresholds(st);  // t = 0 counts for both stopping times
    bool stopped = stop_now();
    while (st.t < cfg.horizon && !stopped) {
        const std::size_t i = sample(rng);
        st = step_linear(st, i, ds, cfg.n);
        if (cfg.record == RecordMode::Full) traj.indices.push_back(i);
        if (!std::isfinite(st.mu) || !std::isfinite(st.lam) ||
            std::fabs(st.mu) > kDivergenceGuard) {
            traj.status = RunStatus::Diverged;
            record(st);
            traj.final_state = st;
            return traj;
        }
        record(st);
        check_thresholds(st);
        stopped = stop_now();
    }
    if (!stopped) {
        traj.status = RunStatus::Completed;
        traj.truncated = (cfg.stop_at_pred && cfg.pred_threshold.has_value()) ||
                         (cfg.stop_at_kernel && cfg.kernel_threshold.has_value());
    }
    if (cfg.record == RecordMode::StoppingOnly || cfg.record == RecordMode::Strided) {
        if (traj.states.empty() || traj.states.back().t != st.t) traj.states.push_back(st);
    }
    traj.final_state = st;
    return traj;
}

long default_horizon(double M, double mu0, double log_drift_at_lambda0, double multiplier) {
    if (log_drift_at_lambda0 == 0.0) return 1000000;
    const double g = std::max(std::fabs(log_drift_at_lambda0), 0.01);
    const double steps = std::ceil(std::log(M / std::fabs(mu0)) / g);
    return static_cast<long>(multiplier * std::max(1.0, steps));
}

}  // namespace catapult
