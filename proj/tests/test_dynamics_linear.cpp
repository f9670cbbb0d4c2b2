#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catapult/dataset.hpp"
#include "catapult/dynamics_linear.hpp"
#include "catapult/fixtures.hpp"
#include "catapult/phase.hpp"
#include "catapult/rng.hpp"

using namespace catapult;
namespace fx = catapult::fixtures;

TEST_CASE("step_linear basics") {
    const auto ds = Dataset::validate({{1.0, 1.0}}, 0.5);
    SUBCASE("mu = 0 is a fixed point") {
        const auto next = step_linear({0, 0.0, 2.0}, 0, ds, 4.0);
        CHECK(next.mu == 0.0);
        CHECK(next.lam == 2.0);
        CHECK(next.t == 1);
    }
    SUBCASE("single-neuron sanity values") {
        // (mu, lam) = (1, 2), s = 1, eta = 0.5, n = 1:
        // mu' = (1 - 1 + 0.25) = 0.25, lam' = 2 + 0.5 (0.5 * 2 - 4) = 0.5
        const auto next = step_linear({0, 1.0, 2.0}, 0, ds, 1.0);
        CHECK(next.mu == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(next.lam == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("spike collapse trajectory reproduces the published values") {
    const auto ds = fx::single_point_collapse();
    SimConfig cfg;
    cfg.n = 1e8;
    cfg.mu0 = 0.682;
    cfg.lambda0 = 0.039;
    cfg.horizon = 12;
    cfg.stop_at_pred = false;
    cfg.stop_at_kernel = false;
    const auto traj = simulate(ds, cfg);
    REQUIRE(traj.states.size() == 13);
    CHECK(traj.states[6].mu == doctest::Approx(159.3937956978828).epsilon(1e-10));
    CHECK(traj.states[6].lam == doctest::Approx(0.03668037266528432).epsilon(1e-10));
    CHECK(traj.states[7].mu == doctest::Approx(-20.306619077164505).epsilon(1e-10));
    CHECK(traj.states[7].lam == doctest::Approx(0.02824640061342865).epsilon(1e-10));
    CHECK(traj.states[10].mu == doctest::Approx(75.10865250231936).epsilon(1e-10));
    CHECK(traj.states[10].lam == doctest::Approx(0.021243522355857695).epsilon(1e-10));
}

TEST_CASE("wide-network limit: one step is the bare linear factor") {
    const auto ds = fx::inflationary_fb_convergent();
    const double lambda0 = 4.0 / 3.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto next = step_linear({0, 1.0, lambda0}, i, ds, 1e16);
        const double bare = (1.0 - ds.eta() * lambda0 * ds.s2(i)) * 1.0;
        CHECK(std::fabs(next.mu - bare) / std::fabs(bare) <= 1e-10);
    }
}

TEST_CASE("simulate: monotone phase shrinks the prediction and never spikes") {
    const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
    SimConfig cfg;
    cfg.n = 1e8;
    cfg.mu0 = 1.0;
    cfg.lambda0 = 1.5;  // eta lam s*^2 = 1.5 < 2
    cfg.horizon = 200;
    cfg.pred_threshold = 2.0;
    const auto traj = simulate(ds, cfg);
    CHECK(!traj.tau_pred.has_value());
    CHECK(traj.truncated);
    for (std::size_t k = 1; k < traj.states.size(); ++k)
        CHECK(std::fabs(traj.states[k].mu) < std::fabs(traj.states[k - 1].mu));
}

TEST_CASE("simulate: inflationary runs stop at the prediction threshold with lam <= lam0") {
    const auto ds = fx::inflationary_fb_convergent();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SimConfig cfg;
        cfg.n = 1e8;
        cfg.mu0 = 1.0;
        cfg.lambda0 = 4.0 / 3.0;
        cfg.horizon = default_horizon(1e3, 1.0, log_drift(ds, cfg.lambda0));
        cfg.pred_threshold = 1e3;
        cfg.seed = seed;
        const auto traj = simulate(ds, cfg);
        REQUIRE(traj.tau_pred.has_value());
        CHECK(traj.status == RunStatus::HitPredThreshold);
        CHECK(traj.final_state.lam <= cfg.lambda0 + 1e-15);
    }
}

TEST_CASE("simulate: tau_pred is recomputable from the recorded states") {
    const auto ds = fx::inflationary_fb_convergent();
    SimConfig cfg;
    cfg.n = 1e6;
    cfg.mu0 = 1.0;
    cfg.lambda0 = 4.0 / 3.0;
    cfg.horizon = 5000;
    cfg.pred_threshold = 100.0;
    cfg.seed = 3;
    const auto traj = simulate(ds, cfg);
    REQUIRE(traj.tau_pred.has_value());
    long scan = -1;
    for (const auto& st : traj.states)
        if (std::fabs(st.mu) >= 100.0) {
            scan = st.t;
            break;
        }
    CHECK(scan == *traj.tau_pred);
}

TEST_CASE("simulate: divergence is a status, not a failure") {
    const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
    SimConfig cfg;
    cfg.n = 10.0;
    cfg.mu0 = 1.0;
    cfg.lambda0 = 5.0;  // above lambda_max: |1 - 5| = 4 growth per step
    cfg.horizon = 100000;
    cfg.stop_at_pred = false;
    cfg.record = RecordMode::StoppingOnly;
    const auto traj = simulate(ds, cfg);
    CHECK(traj.status == RunStatus::Diverged);
}

TEST_CASE("simulate: identical config gives bit-identical trajectories") {
    const auto ds = fx::inflationary_fb_convergent();
    SimConfig cfg;
    cfg.n = 1e8;
    cfg.mu0 = 0.5;
    cfg.lambda0 = 1.2;
    cfg.horizon = 300;
    cfg.seed = 99;
    cfg.stop_at_pred = false;
    cfg.stop_at_kernel = false;
    const auto a = simulate(ds, cfg);
    const auto b = simulate(ds, cfg);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        CHECK(a.states[k].mu == b.states[k].mu);  // exact equality intended
        CHECK(a.states[k].lam == b.states[k].lam);
    }
    REQUIRE(a.indices.size() == b.indices.size());
    for (std::size_t k = 0; k < a.indices.size(); ++k) CHECK(a.indices[k] == b.indices[k]);
}

TEST_CASE("kernel monotonicity and the per-step decrement sandwich") {
    RngStream rng(2024, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const double s1 = 0.3 + 2.0 * rng.next_unit();
        const double s2 = 0.3 + 2.0 * rng.next_unit();
        const double p = 0.1 + 0.8 * rng.next_unit();
        const double eta = 0.05 + rng.next_unit();
        const auto ds = Dataset::validate({{s1, p}, {s2, 1.0 - p}}, eta);
        const double lambda_max = critical_values(ds).lambda_max_mb;
        const double lambda0 = lambda_max * (0.1 + 0.85 * rng.next_unit());
        const double n = std::pow(10.0, 2.0 + 6.0 * rng.next_unit());
        // keep (mu0, lambda0) realizable by an actual width-n network
        const double mu_cap = std::min(2.0, 0.45 * std::sqrt(n) * lambda0);
        const double mu0 = (2.0 * rng.next_unit() - 1.0) * mu_cap;
        const auto [a_minus, a_plus] = ds.kernel_rate_bounds(lambda0);

        SimConfig cfg;
        cfg.n = n;
        cfg.mu0 = mu0;
        cfg.lambda0 = lambda0;
        cfg.horizon = 30;
        cfg.seed = static_cast<std::uint64_t>(trial);
        cfg.stop_at_pred = false;
        cfg.stop_at_kernel = false;
        const auto traj = simulate(ds, cfg);
        for (std::size_t k = 1; k < traj.states.size(); ++k) {
            const auto& prev = traj.states[k - 1];
            const auto& cur = traj.states[k];
            if (!(prev.lam <= lambda0) || !std::isfinite(cur.mu)) break;
            const double drop = prev.lam - cur.lam;
            const double scale = eta * prev.mu * prev.mu / n;
            const double slack = 1e-10 * std::max({1.0, std::fabs(prev.lam), a_plus * scale});
            CHECK(drop >= -slack);  // monotone under lambda0 < lambda_max
            CHECK(drop >= a_minus * scale - slack);
            CHECK(drop <= a_plus * scale + slack);
        }
    }
}

TEST_CASE("default horizon policy") {
    CHECK(default_horizon(1e3, 1e-3, 0.0757) == 50 * 183);
    CHECK(default_horizon(10.0, 1.0, 0.0) == 1000000);
    CHECK(default_horizon(2.0, 1.0, -0.6931471805599453) == 50);
    // drift magnitudes below 0.01 are clamped
    CHECK(default_horizon(std::exp(1.0), 1.0, 1e-9) == 50 * 100);
}
