#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "catapult/dataset.hpp"

namespace catapult {

// Closed-form phase diagnostics at a given curvature. Everything in this
// header is a pure function of (dataset, lambda); G and vartheta depend on
// (lambda, eta) only through the product lambda*eta.

enum class Phase { Monotone, Inflationary, Deflationary, Boundary, OutOfRange };

std::string phase_name(Phase p);

struct PhaseReport {
    double lambda = 0.0;
    Phase phase = Phase::Monotone;
    double log_drift = 0.0;  // G, nats/step; -inf at a singular curvature
    double vartheta = 0.0;   // in [0, inf]; +inf when all bases <= 1 and G < 0
    double lambda_crit_mb = 0.0;
    double lambda_max_mb = 0.0;
    double lambda_crit_fb = 0.0;
    bool singular = false;  // eta*lambda*s_i^2 == 1 for some i
};

struct CriticalValues {
    double lambda_crit_mb;  // 2/(eta s*^2)
    double lambda_max_mb;   // 4/(eta s*^2)
    double lambda_crit_fb;  // 2/(eta sbar^2)
};

// Left endpoint of the inflationary range containing lambda0, plus every
// sign-change zero of G found in (lambda_crit_mb, lambda0). `literal_inf`
// is the smallest of those zeros (the literal infimum reading); it equals
// lambda_star unless G changes sign more than once below lambda0.
struct InflationaryEndpoint {
    double lambda_star;
    double literal_inf;
    std::vector<double> zeros;
};

struct CollapseThreshold {
    double lambda_coll;
    bool index_exists;       // false: feasible (zeta, i) set empty, lambda_coll = lambda_star
    double argmax_zeta = 0;  // maximiser, valid when index_exists
    std::size_t argmax_index = 0;
};

struct DescentMargin {
    double q_minus;    // min G over [lambda_plus, lambda0], > 0
    double delta_gap;  // eta * min_{i, zeta} |zeta - 1/(eta s_i^2)|, > 0
};

struct LargeSpikeTail {
    double delta;
    std::vector<std::size_t> index_set;  // I_{3 delta}
    double p_3delta;
    double alpha;  // -log(p_{3delta}) / (2 log(1+delta)); +inf at p=0, 0 at p=1
};

// G(lambda) = sum_i p_i log|1 - eta lambda s_i^2|; -inf if any factor is 0
double log_drift(const Dataset& ds, double lambda);

// sup{theta >= 0 : sum_i p_i b_i^theta <= 1}, with 0^theta = 0 for theta > 0.
// G >= 0 -> 0; G < 0 with all b_i <= 1 -> +inf; otherwise the unique positive
// root of the convex moment function, bisected to `tol` on theta. The bracket
// doubles from 1; past 1e6 the +inf sentinel is returned.
double cramer_exponent(const Dataset& ds, double lambda, double tol = 1e-12);

// Roots for the shifted bases: vartheta_minus solves sum p_i (b_i^+)^th = 1,
// vartheta_plus solves it for b_i^-; vartheta_minus <= vartheta <= vartheta_plus.
// Throws ShiftTooLargeError if max b_i^+ >= 4, NoRootError if the shifted-up
// drift is nonnegative.
std::pair<double, double> shifted_exponents(const Dataset& ds, double lambda0, double eps,
                                            double kappa, double tol = 1e-12);

CriticalValues critical_values(const Dataset& ds);

PhaseReport classify_phase(const Dataset& ds, double lambda);

// Requires G(lambda0) > 0. Sign-scan at `grid_step` resolution, bisection of
// each bracket to 1e-12; returns lambda_crit_mb as the endpoint when G > 0 on
// all of (lambda_crit_mb, lambda0).
InflationaryEndpoint inflationary_endpoint(const Dataset& ds, double lambda0,
                                           double grid_step = 0.0);

// sup over zeta in [lambda_star, lambda0] and i with eta zeta s_i^2 > 1 of
//   zeta - (4 - eta zeta s_i^2)(eta zeta s_i^2 - 1)/(eta s_i^2) (1 - e^{-G(zeta)/2}),
// grid scan (default 2048 cells) + golden-section refinement to 1e-10.
CollapseThreshold collapse_threshold(const Dataset& ds, double lambda0, double grid_step = 0.0);

DescentMargin descent_margin(const Dataset& ds, double lambda_plus, double lambda0,
                             double grid_step = 0.0);

LargeSpikeTail large_spike_exponent(const Dataset& ds, double lambda0, double delta);

// PhaseReport on an inclusive uniform grid; evaluated in parallel, results
// identical to sequential evaluation.
std::vector<PhaseReport> sweep(const Dataset& ds, double lambda_lo, double lambda_hi,
                               std::size_t n_points);

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

}  // namespace catapult
