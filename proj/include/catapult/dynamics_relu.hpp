#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catapult/dataset.hpp"
#include "catapult/dynamics_linear.hpp"
#include "catapult/network_oracle.hpp"

namespace catapult {

// ReLU-activation dynamics. Pre-flip, the (mu+, lam+) and (mu-, lam-)
// channels follow two independent copies of the linear reduced recursion on
// the sign-split datasets; sign flips couple them through the transfer terms
// delta_pred / delta_ker. The full-parameter stepper is the ground truth,
// the reduced pair is the fast model valid before the first flip.

struct ReluState {
    long t = 0;
    double mu_plus = 0.0, mu_minus = 0.0;
    double lam_plus = 0.0, lam_minus = 0.0;
};

struct ReluStepReport {
    double delta_pred = 0.0;  // prediction transfer, zero when no neuron flips
    double delta_ker = 0.0;   // kernel mass moved between channels, always >= 0
    int flipped = 0;          // neurons whose w changed sign this step
};

// Reduced per-channel prediction factor. kMatchesOracle uses the linear-model
// factor (1 - eta lam s^2 + eta^2 mu^2 s^4 / n), which the full-parameter
// stepper reproduces exactly; kDoubledDriftTerm doubles the linear term and
// exists only so tests can show it does NOT match the oracle.
enum class ReluPairRule { kMatchesOracle, kDoubledDriftTerm };

ReluState step_reduced_pair(const ReluState& state, std::size_t i, const Dataset& ds, double n,
                            ReluPairRule rule = ReluPairRule::kMatchesOracle);

// One full-parameter SGD step. `i` indexes ds; params advances in place.
// When check_consistency is set, the reduced identities (drift + transfer
// terms) are verified against the recomputed observables to relative 1e-9
// and a violation throws. mu_cache must hold the pre-step observables.
ReluStepReport step_relu_full(NetworkParams& params, std::size_t i, const Dataset& ds,
                              const ReluObservables& mu_cache, bool check_consistency = false);

struct ReluSimConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    long horizon = 1;
    std::optional<double> pred_threshold;  // applied to |mu+| and |mu-| separately
    bool stop_at_pred = false;
    bool record_states = true;
    bool check_consistency = false;
};

struct ReluTrajectory {
    std::vector<ReluState> states;
    std::vector<std::size_t> indices;
    std::vector<ReluStepReport> reports;
    std::optional<long> first_flip_time;
    double total_delta_ker = 0.0;
    std::optional<long> tau_pred_plus, tau_pred_minus;
    RunStatus status = RunStatus::Completed;
    ReluState final_state;
};

// Full-parameter simulation; params0 is consumed.
ReluTrajectory simulate_relu(const Dataset& ds, NetworkParams params0, const ReluSimConfig& cfg);

// Reduced-pair simulation from prescribed channel coordinates at width n.
ReluTrajectory simulate_reduced_pair(const Dataset& ds, double n, const ReluState& state0,
                                     const ReluSimConfig& cfg,
                                     ReluPairRule rule = ReluPairRule::kMatchesOracle);

}  // namespace catapult
