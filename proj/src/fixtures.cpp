#include "catapult/fixtures.hpp"

#include <cmath>

#include "catapult/dynamics_linear.hpp"
#include "catapult/errors.hpp"
#include "catapult/phase.hpp"

namespace catapult {
namespace fixtures {

Dataset two_point_even() { return Dataset::validate({{1.0, 0.5}, {1.3, 0.5}}, 1.0); }

Dataset two_point_skewed() { return Dataset::validate({{std::sqrt(3.0), 0.83}, {1.0, 0.17}}, 1.0); }

Dataset inflationary_fb_convergent() { return Dataset::validate({{1.0, 0.6}, {3.0, 0.4}}, 0.3); }

Dataset deflationary_fb_catapult() { return Dataset::validate({{5.92, 0.4}, {3.74, 0.6}}, 0.1); }

Dataset nonmonotone_exponent() {
    return Dataset::validate({{1.0, 0.55}, {0.5, 0.34}, {0.9, 0.11}}, 1.0);
}

Dataset single_point_collapse() { return Dataset::validate({{100.0, 1.0}}, 0.01); }

Dataset unit_exponent() {
    return Dataset::validate({{std::sqrt(3.0), 1.0 / 3.0}, {std::sqrt(0.5), 2.0 / 3.0}}, 1.0);
}

namespace {

ComparisonRow row(std::string quantity, double reference, double computed, double tolerance) {
    const bool pass = std::fabs(computed - reference) <= tolerance;
    return {std::move(quantity), reference, computed, tolerance, pass};
}

// published decimals carry their own precision: accept max(rel, half-ulp)
ComparisonRow row_quoted(std::string quantity, double reference, double half_ulp, double computed,
                         double rel = 5e-3) {
    const double tol = std::max(rel * std::fabs(reference), half_ulp);
    return row(std::move(quantity), reference, computed, tol);
}

std::vector<double> drift_zeros_in_window(const Dataset& ds, double from_factor) {
    // largest inflationary lambda0 just under lambda_max so the scan covers
    // the whole catapult window
    const auto crit = critical_values(ds);
    const double top = crit.lambda_max_mb * from_factor;
    const auto endpoint = inflationary_endpoint(ds, top, (top - crit.lambda_crit_mb) / 200000.0);
    return endpoint.zeros;
}

}  // namespace

std::vector<std::string> reproduce_ids() {
    return {"ex121", "ex122", "ex123", "ex124", "ex125", "spike_collapse"};
}

std::vector<ComparisonRow> reproduce(const std::string& id) {
    std::vector<ComparisonRow> rows;
    if (id == "ex121") {
        // reference drift zeros: 1.591 for case (i); 0.794 / 0.950 / 1.028
        // for case (ii); quoted to three decimals, compared at 1e-3
        {
            const auto zeros = drift_zeros_in_window(two_point_even(), 0.999999);
            rows.push_back(row("case_i_zero_count", 1.0, static_cast<double>(zeros.size()), 0.0));
            if (!zeros.empty()) rows.push_back(row("case_i_zero", 1.591, zeros.back(), 1e-3));
        }
        {
            const auto zeros = drift_zeros_in_window(two_point_skewed(), 0.999999);
            rows.push_back(row("case_ii_zero_count", 3.0, static_cast<double>(zeros.size()), 0.0));
            const std::vector<double> expected{0.794, 0.950, 1.028};
            for (std::size_t k = 0; k < expected.size() && k < zeros.size(); ++k)
                rows.push_back(
                    row("case_ii_zero_" + std::to_string(k + 1), expected[k], zeros[k], 1e-3));
        }
    } else if (id == "ex122") {
        const auto ds = two_point_even();
        const auto crit = critical_values(ds);
        rows.push_back(row("lambda_crit_mb", 2.0 / 1.69, crit.lambda_crit_mb, 1e-12));
        rows.push_back(row("lambda_crit_fb", 2.0 / 1.345, crit.lambda_crit_fb, 1e-12));
        rows.push_back(
            row("mb_strictly_below_fb", 1.0, crit.lambda_crit_mb < crit.lambda_crit_fb ? 1.0 : 0.0, 0.0));
    } else if (id == "ex123") {
        const auto ds = inflationary_fb_convergent();
        const double lambda0 = 4.0 / 3.0;
        const double g = log_drift(ds, lambda0);
        rows.push_back(row("G_closed_form", 0.6 * std::log(0.6) + 0.4 * std::log(2.6), g, 1e-12));
        rows.push_back(row("G_displayed", 7.6e-2, g, 5e-4));
        rows.push_back(row("lambda_crit_fb", 100.0 / 63.0, critical_values(ds).lambda_crit_fb, 1e-12));
        const auto rep = classify_phase(ds, lambda0);
        rows.push_back(row("phase_inflationary", 1.0, rep.phase == Phase::Inflationary ? 1.0 : 0.0, 0.0));
        rows.push_back(
            row("fb_convergent", 1.0, lambda0 < rep.lambda_crit_fb ? 1.0 : 0.0, 0.0));
    } else if (id == "ex124") {
        const auto ds = deflationary_fb_catapult();
        const double lambda0 = 1.0;
        const auto rep = classify_phase(ds, lambda0);
        rows.push_back(row("lambda_crit_fb", 0.89, rep.lambda_crit_fb, 5e-3));
        rows.push_back(row("G", -0.18, rep.log_drift, 5e-3));
        rows.push_back(row("phase_deflationary", 1.0, rep.phase == Phase::Deflationary ? 1.0 : 0.0, 0.0));
        rows.push_back(row("fb_catapult", 1.0,
                           rep.lambda_crit_fb > 0.5 * lambda0 && rep.lambda_crit_fb < lambda0 ? 1.0 : 0.0,
                           0.0));
    } else if (id == "ex125") {
        const auto ds = nonmonotone_exponent();
        rows.push_back(row("vartheta_2.60", 0.380, cramer_exponent(ds, 2.60), 5e-3));
        rows.push_back(row("vartheta_3.14", 0.102, cramer_exponent(ds, 3.14), 5e-3));
        rows.push_back(row("vartheta_3.95", 0.315, cramer_exponent(ds, 3.95), 5e-3));
    } else if (id == "spike_collapse") {
        const auto ds = single_point_collapse();
        SimConfig cfg;
        cfg.n = 1e8;
        cfg.mu0 = 0.682;
        cfg.lambda0 = 0.039;
        cfg.horizon = 12;
        cfg.stop_at_pred = false;
        cfg.stop_at_kernel = false;
        const auto traj = simulate(ds, cfg);
        const auto& st = traj.states;
        rows.push_back(row_quoted("mu_6", 159.39, 0.005, st[6].mu));
        rows.push_back(row_quoted("lam_6", 3.66e-2, 0.5e-4, st[6].lam));
        rows.push_back(row_quoted("mu_7", -20.31, 0.005, st[7].mu));
        rows.push_back(row_quoted("lam_7", 2.82e-2, 0.5e-4, st[7].lam));
        rows.push_back(row_quoted("mu_10", 75.10, 0.005, st[10].mu));
        rows.push_back(row_quoted("lam_10", 2.1e-2, 0.5e-3, st[10].lam));
    } else {
        throw Error("unknown reproduction id '" + id + "'");
    }
    return rows;
}

}  // namespace fixtures
}  // namespace catapult
