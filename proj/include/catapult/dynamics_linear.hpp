#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catapult/dataset.hpp"

namespace catapult {

// Exact reduced (mu, lambda) dynamics of the linear-activation model:
//   mu'  = (1 - eta lam s_i^2 + eta^2 s_i^4 mu^2 / n) mu
//   lam' = lam + (mu^2 eta / n)(eta lam s_i^4 - 4 s_i^2)
// both evaluated from the pre-step state. Under lam0 < 4/(eta s*^2) the
// kernel is nonincreasing.

struct LinearState {
    long t = 0;
    double mu = 0.0;
    double lam = 0.0;
};

enum class RunStatus { Completed, HitPredThreshold, HitKernelThreshold, Diverged };

enum class RecordMode { Full, StoppingOnly, Strided };

struct SimConfig {
    double n = 1.0;  // width; enters the reduced dynamics only as a scale
    double mu0 = 0.0;
    double lambda0 = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;  // replicate index within an ensemble
    long horizon = 1;
    std::optional<double> pred_threshold;    // M: tau_pred = first |mu| >= M
    std::optional<double> kernel_threshold;  // tau_kernel = first lam < threshold
    bool stop_at_pred = true;
    bool stop_at_kernel = true;
    RecordMode record = RecordMode::Full;
    long stride = 1;
};

struct Trajectory {
    std::vector<LinearState> states;
    std::vector<std::size_t> indices;  // i(t) for step t-1 -> t, Full mode only
    std::optional<long> tau_pred;
    std::optional<long> tau_kernel;
    RunStatus status = RunStatus::Completed;
    bool truncated = false;  // horizon reached with no stop condition met
    LinearState final_state;
};

// |mu| beyond this counts as divergence even while still finite
inline constexpr double kDivergenceGuard = 1e150;

LinearState step_linear(const LinearState& state, std::size_t i, const Dataset& ds, double n);

Trajectory simulate(const Dataset& ds, const SimConfig& cfg);

// Default horizon for open-ended hitting runs: multiplier * ceil(log(M/|mu0|)
// / max(|G|, 0.01)); 10^6 steps when G == 0. Truncations at this horizon are
// counted by the callers, never dropped.
long default_horizon(double M, double mu0, double log_drift_at_lambda0, double multiplier = 50.0);

}  // namespace catapult
