#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catapult/dataset.hpp"
#include "catapult/errors.hpp"
#include "catapult/fixtures.hpp"
#include "catapult/phase.hpp"
#include "catapult/rng.hpp"

using namespace catapult;
namespace fx = catapult::fixtures;

namespace {

// independent root oracle: coarse scan of the moment function + bisection,
// written against the definition rather than the library path
double naive_exponent(const Dataset& ds, double lambda) {
    const auto b = ds.log_bases(lambda);
    const auto f = [&](double theta) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) acc += ds.point(i).p * std::pow(b[i], theta);
        return acc;
    };
    double lo = 0.0, hi = 0.0;
    for (double theta = 0.125; theta <= 64.0; theta += 0.125) {
        if (f(theta) > 1.0) {
            hi = theta;
            lo = theta - 0.125;
            break;
        }
    }
    if (hi == 0.0) return std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) <= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("log drift reproduces the worked examples") {
    const auto ds123 = fx::inflationary_fb_convergent();
    const double g = log_drift(ds123, 4.0 / 3.0);
    CHECK(g == doctest::Approx(0.6 * std::log(0.6) + 0.4 * std::log(2.6)).epsilon(1e-13));
    CHECK(std::fabs(g - 7.6e-2) <= 5e-4);

    const auto ds124 = fx::deflationary_fb_catapult();
    CHECK(std::fabs(log_drift(ds124, 1.0) - (-0.18)) <= 5e-3);

    CHECK(log_drift(ds123, 0.0) == 0.0);

    const auto singular = Dataset::validate({{1.0, 1.0}}, 1.0);
    CHECK(std::isinf(log_drift(singular, 1.0)));
    CHECK(log_drift(singular, 1.0) < 0.0);
}

TEST_CASE("critical values") {
    const auto c123 = critical_values(fx::inflationary_fb_convergent());
    CHECK(c123.lambda_crit_fb == doctest::Approx(100.0 / 63.0).epsilon(1e-14));

    const auto c124 = critical_values(fx::deflationary_fb_catapult());
    CHECK(std::fabs(c124.lambda_crit_fb - 0.89) <= 5e-3);

    const auto single = critical_values(Dataset::validate({{1.0, 1.0}}, 1.0));
    CHECK(single.lambda_crit_mb == doctest::Approx(2.0));
    CHECK(single.lambda_max_mb == doctest::Approx(4.0));
    CHECK(single.lambda_crit_fb == doctest::Approx(2.0));

    // mb <= fb, strict unless all |s_i| coincide
    const auto c = critical_values(fx::two_point_even());
    CHECK(c.lambda_crit_mb < c.lambda_crit_fb);
}

TEST_CASE("cramer exponent") {
    SUBCASE("analytically forced root") {
        const auto ds = fx::unit_exponent();
        CHECK(cramer_exponent(ds, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("published three-point values, against the independent oracle too") {
        const auto ds = fx::nonmonotone_exponent();
        const double expected[] = {0.380, 0.102, 0.315};
        const double lambdas[] = {2.60, 3.14, 3.95};
        for (int k = 0; k < 3; ++k) {
            const double theta = cramer_exponent(ds, lambdas[k]);
            CHECK(std::fabs(theta - expected[k]) <= 5e-3);
            CHECK(theta == doctest::Approx(naive_exponent(ds, lambdas[k])).epsilon(1e-9));
        }
    }
    SUBCASE("zero when the drift is nonnegative") {
        CHECK(cramer_exponent(fx::inflationary_fb_convergent(), 4.0 / 3.0) == 0.0);
    }
    SUBCASE("+inf in the monotone regime") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        CHECK(std::isinf(cramer_exponent(ds, 0.5)));
    }
    SUBCASE("root residual and convexity checks") {
        const auto ds = fx::nonmonotone_exponent();
        const auto b = ds.log_bases(3.14);
        const double tol = 1e-12;
        const double theta = cramer_exponent(ds, 3.14, tol);
        double f = 0.0, fprime = 0.0, f_half = 0.0, f_double = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const double p = ds.point(i).p;
            f += p * std::pow(b[i], theta);
            fprime += p * std::pow(b[i], theta) * std::log(b[i]);
            f_half += p * std::pow(b[i], theta / 2.0);
            f_double += p * std::pow(b[i], 2.0 * theta);
        }
        CHECK(std::fabs(f - 1.0) <= 10.0 * tol * std::fabs(fprime));
        CHECK(f_half <= 1.0 + 1e-12);
        CHECK(f_double >= 1.0 - 1e-12);
    }
    SUBCASE("singular datapoint drops from the root equation") {
        // eta lam s^2 = 1 at the first point; G = -inf, remaining base > 1
        const auto ds = Dataset::validate({{1.0, 0.5}, {2.0, 0.5}}, 1.0);
        const double theta = cramer_exponent(ds, 1.0);  // bases: 0 and 3
        CHECK(theta == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-9));
    }
}

TEST_CASE("shifted exponents") {
    const auto ds = fx::unit_exponent();
    SUBCASE("no shift collapses to the plain exponent") {
        const auto [lo, hi] = shifted_exponents(ds, 1.0, 0.0, 0.0);
        CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("ordering brackets the unshifted root") {
        const auto [lo, hi] = shifted_exponents(ds, 1.0, 0.01, 0.0);
        CHECK(lo < 1.0);
        CHECK(hi > 1.0);
    }
    SUBCASE("eps tuned to zero shifted drift sends vartheta_minus to zero") {
        // solve sum p log b_i^+ = 0 over eps by bisection, then confirm
        double lo = 0.0, hi = 1.0;
        const auto drift_up = [&](double eps) {
            const auto [up, down] = ds.shifted_bases(1.0, eps, 0.0);
            (void)down;
            double acc = 0.0;
            for (std::size_t i = 0; i < ds.size(); ++i)
                acc += ds.point(i).p * std::log(up[i]);
            return acc;
        };
        REQUIRE(drift_up(0.0) < 0.0);
        REQUIRE(drift_up(1.0) > 0.0);
        for (int k = 0; k < 100; ++k) {
            const double mid = 0.5 * (lo + hi);
            (drift_up(mid) < 0.0 ? lo : hi) = mid;
        }
        const auto [vm, vp] = shifted_exponents(ds, 1.0, lo, 0.0);
        CHECK(vm <= 1e-5);
        CHECK(vp > 1.0);
        CHECK_THROWS_AS(shifted_exponents(ds, 1.0, hi, 0.0), NoRootError);
    }
    SUBCASE("shift cap") {
        CHECK_THROWS_AS(shifted_exponents(ds, 1.0, 10.0, 0.0), ShiftTooLargeError);
    }
}

TEST_CASE("phase classification") {
    SUBCASE("worked examples") {
        const auto inflation = classify_phase(fx::inflationary_fb_convergent(), 4.0 / 3.0);
        CHECK(inflation.phase == Phase::Inflationary);
        CHECK(4.0 / 3.0 < inflation.lambda_crit_fb);

        const auto deflation = classify_phase(fx::deflationary_fb_catapult(), 1.0);
        CHECK(deflation.phase == Phase::Deflationary);
        CHECK(deflation.lambda_crit_fb > 0.5);
        CHECK(deflation.lambda_crit_fb < 1.0);
    }
    SUBCASE("monotone below the window, out of range above") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        CHECK(classify_phase(ds, 1.0).phase == Phase::Monotone);  // eta lam s*^2 = 1 < 2
        CHECK(classify_phase(ds, 0.0).phase == Phase::Monotone);
        CHECK(classify_phase(ds, 0.0).log_drift == 0.0);
        CHECK(classify_phase(ds, 5.0).phase == Phase::OutOfRange);
        CHECK(classify_phase(ds, 2.0).phase == Phase::Boundary);  // exactly lambda_crit
        CHECK(classify_phase(ds, 4.0).phase == Phase::Boundary);  // exactly lambda_max
    }
    SUBCASE("singular curvature inside the window is deflationary and flagged") {
        // window is (2/3, 4/3); the s = 1 point is singular at lambda = 1
        const auto ds = Dataset::validate({{1.0, 0.5}, {std::sqrt(3.0), 0.5}}, 1.0);
        const auto rep = classify_phase(ds, 1.0);
        CHECK(rep.lambda_crit_mb == doctest::Approx(2.0 / 3.0));
        CHECK(rep.singular);
        CHECK(rep.phase == Phase::Deflationary);
    }
    SUBCASE("scale covariance: (eta, lambda) -> (eta/c, c lambda)") {
        RngStream rng(77, 0);
        for (int trial = 0; trial < 50; ++trial) {
            const double c = 0.1 + 10.0 * rng.next_unit();
            const auto base = Dataset::validate({{1.0, 0.6}, {3.0, 0.4}}, 0.3);
            const auto scaled = Dataset::validate({{1.0, 0.6}, {3.0, 0.4}}, 0.3 / c);
            const double lam = 0.2 + 1.2 * rng.next_unit();
            const auto a = classify_phase(base, lam);
            const auto b = classify_phase(scaled, lam * c);
            CHECK(a.phase == b.phase);
            if (std::isfinite(a.log_drift))
                CHECK(a.log_drift == doctest::Approx(b.log_drift).epsilon(1e-10));
            if (std::isfinite(a.vartheta))
                CHECK(a.vartheta == doctest::Approx(b.vartheta).epsilon(1e-8));
            else
                CHECK(std::isinf(b.vartheta));
        }
    }
}

TEST_CASE("inflationary endpoint") {
    SUBCASE("single point closed form") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        const auto ep = inflationary_endpoint(ds, 3.5);
        CHECK(ep.lambda_star == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(ep.zeros.empty());  // G > 0 on the whole window below 3.5
    }
    SUBCASE("two-point example with a zero-crossing") {
        const auto ds = fx::inflationary_fb_convergent();
        const auto ep = inflationary_endpoint(ds, 4.0 / 3.0);
        CHECK(ep.lambda_star == doctest::Approx(1.0046696013533265).epsilon(1e-9));
        CHECK(std::fabs(log_drift(ds, ep.lambda_star)) <= 1e-10);
        const double step = (4.0 / 3.0 - critical_values(ds).lambda_crit_mb) / 2048.0;
        CHECK(log_drift(ds, ep.lambda_star + step / 10.0) > 0.0);
    }
    SUBCASE("multiple sign changes are all reported") {
        const auto ds = fx::two_point_skewed();
        const double top = critical_values(ds).lambda_max_mb * 0.999;
        const auto ep = inflationary_endpoint(ds, top, 1e-4);
        REQUIRE(ep.zeros.size() == 3);
        CHECK(ep.zeros[0] == doctest::Approx(0.794).epsilon(2e-3));
        CHECK(ep.zeros[1] == doctest::Approx(0.9506).epsilon(2e-3));
        CHECK(ep.zeros[2] == doctest::Approx(1.0278).epsilon(2e-3));
        CHECK(ep.lambda_star == doctest::Approx(ep.zeros[2]).epsilon(1e-12));
        CHECK(ep.literal_inf == doctest::Approx(ep.zeros[0]).epsilon(1e-12));
    }
    SUBCASE("rejects deflationary input") {
        CHECK_THROWS_AS(inflationary_endpoint(fx::deflationary_fb_catapult(), 1.0),
                        NotInflationaryError);
    }
}

TEST_CASE("collapse threshold") {
    // for both fixtures the sup is attained at the zeta = lambda0 boundary
    // (checked by dense scan), so the exact value is the objective there
    const auto boundary_value = [](const Dataset& ds, double lambda0, double s2) {
        const double es2 = ds.eta() * s2;
        const double g = log_drift(ds, lambda0);
        return lambda0 -
               (4.0 - lambda0 * es2) * (lambda0 * es2 - 1.0) / es2 * (1.0 - std::exp(-0.5 * g));
    };
    SUBCASE("two-point example against the closed-form boundary value") {
        const auto ds = fx::inflationary_fb_convergent();
        const auto coll = collapse_threshold(ds, 4.0 / 3.0);
        CHECK(coll.index_exists);
        CHECK(coll.lambda_coll ==
              doctest::Approx(boundary_value(ds, 4.0 / 3.0, 9.0)).epsilon(1e-12));
        CHECK(coll.lambda_coll == doctest::Approx(1.3190248314195063).epsilon(1e-12));
        CHECK(coll.lambda_coll < 4.0 / 3.0);
    }
    SUBCASE("single-point collapse configuration") {
        const auto ds = fx::single_point_collapse();
        const auto ep = inflationary_endpoint(ds, 0.039);
        CHECK(ep.lambda_star == doctest::Approx(0.02).epsilon(1e-10));
        const auto coll = collapse_threshold(ds, 0.039);
        CHECK(coll.lambda_coll ==
              doctest::Approx(boundary_value(ds, 0.039, 1e4)).epsilon(1e-12));
        CHECK(coll.lambda_coll == doctest::Approx(0.037802938636592641).epsilon(1e-12));
        CHECK(coll.lambda_coll > ep.lambda_star);
        CHECK(coll.lambda_coll < 0.039);
    }
}

TEST_CASE("descent margin") {
    SUBCASE("single point closed form") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        const auto margin = descent_margin(ds, 2.5, 3.0);
        CHECK(margin.q_minus == doctest::Approx(std::log(1.5)).epsilon(1e-10));
        CHECK(margin.delta_gap == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("point interval") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        const auto margin = descent_margin(ds, 3.0, 3.0);
        CHECK(margin.q_minus == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK(margin.delta_gap == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("two-point example against the dense-grid value") {
        const auto ds = fx::inflationary_fb_convergent();
        const auto margin = descent_margin(ds, 1.2, 4.0 / 3.0);
        CHECK(margin.q_minus == doctest::Approx(0.054818084769727715).epsilon(1e-9));
        CHECK(margin.delta_gap == doctest::Approx(0.24888888888888883).epsilon(1e-12));
    }
    SUBCASE("errors") {
        const auto ds = Dataset::validate({{1.0, 1.0}}, 1.0);
        CHECK_THROWS_AS(descent_margin(ds, 3.5, 3.0), DegenerateIntervalError);
        CHECK_THROWS_AS(descent_margin(ds, 1.0, 1.5), NotInflationaryError);  // G < 0 there
    }
}

TEST_CASE("large spike exponent") {
    const auto ds = fx::inflationary_fb_convergent();
    SUBCASE("worked example at delta = 0.5") {
        const auto tail = large_spike_exponent(ds, 4.0 / 3.0, 0.5);
        REQUIRE(tail.index_set.size() == 1);
        CHECK(ds.point(tail.index_set[0]).s == 3.0);
        CHECK(tail.p_3delta == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(tail.alpha ==
              doctest::Approx(-std::log(0.4) / (2.0 * std::log(1.5))).epsilon(1e-12));
    }
    SUBCASE("empty index set") {
        const auto tail = large_spike_exponent(ds, 4.0 / 3.0, 2.0);  // 1 + 3 delta = 7 > 2.6
        CHECK(tail.p_3delta == 0.0);
        CHECK(std::isinf(tail.alpha));
    }
    SUBCASE("full mass gives alpha = 0") {
        const auto single = Dataset::validate({{1.0, 1.0}}, 1.0);
        const auto tail = large_spike_exponent(single, 3.9, 0.5);  // base 2.9 > 2.5
        CHECK(tail.p_3delta == doctest::Approx(1.0));
        CHECK(tail.alpha == doctest::Approx(0.0));
    }
    SUBCASE("delta validation and monotonicity") {
        CHECK_THROWS_AS(large_spike_exponent(ds, 1.0, 0.0), NonpositiveDeltaError);
        // alpha(delta) nonincreasing in delta while p_{3 delta} is constant
        const auto a1 = large_spike_exponent(ds, 4.0 / 3.0, 0.3);
        const auto a2 = large_spike_exponent(ds, 4.0 / 3.0, 0.5);
        REQUIRE(a1.p_3delta == a2.p_3delta);
        CHECK(a1.alpha >= a2.alpha);
    }
}

TEST_CASE("sweep") {
    SUBCASE("matches pointwise classification and is deterministic") {
        const auto ds = fx::two_point_even();
        const auto reports = sweep(ds, 0.0, 2.3, 257);
        REQUIRE(reports.size() == 257);
        for (std::size_t k = 0; k < reports.size(); k += 16) {
            const auto direct = classify_phase(ds, reports[k].lambda);
            CHECK(reports[k].phase == direct.phase);
            CHECK(reports[k].log_drift == direct.log_drift);
            CHECK(reports[k].vartheta == direct.vartheta);
        }
    }
    SUBCASE("sign-change structure of the two published cases") {
        const auto count_changes = [](const Dataset& ds) {
            const auto crit = critical_values(ds);
            const auto reports = sweep(ds, crit.lambda_crit_mb + 1e-6,
                                       crit.lambda_max_mb - 1e-6, 20001);
            int changes = 0;
            for (std::size_t k = 1; k < reports.size(); ++k)
                changes += (reports[k - 1].log_drift < 0.0) != (reports[k].log_drift < 0.0);
            return changes;
        };
        CHECK(count_changes(fx::two_point_even()) == 1);
        CHECK(count_changes(fx::two_point_skewed()) == 3);
    }
    SUBCASE("spike probability scale peaks at ~0.24 where vartheta dips near 3.14") {
        const auto ds = fx::nonmonotone_exponent();
        const auto reports = sweep(ds, 3.0, 3.3, 301);
        double peak_scale = 0.0;
        for (const auto& rep : reports)
            if (std::isfinite(rep.vartheta))
                peak_scale = std::max(peak_scale, std::pow(1e12, -0.5 * rep.vartheta));
        CHECK(std::fabs(peak_scale - 0.24) <= 0.01);
    }
}
