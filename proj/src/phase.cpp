#include "catapult/phase.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "catapult/errors.hpp"

namespace catapult {

namespace {

constexpr double kBoundaryTol = 1e-12;    // tie rule for G = 0 / critical lambda
constexpr std::size_t kDefaultGrid = 2048;
constexpr double kThetaBracketCap = 1e6;  // beyond this the root counts as +inf

// sum_i p_i b_i^theta. pow(0, theta>0) = 0 and pow(0, 0) = 1 give the
// 0^theta convention for free.
double moment(const std::vector<double>& bases, const std::vector<DataPoint>& pts, double theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i) acc += pts[i].p * std::pow(bases[i], theta);
    return acc;
}

double drift_of_bases(const std::vector<double>& bases, const std::vector<DataPoint>& pts) {
    double acc = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i) acc += pts[i].p * std::log(bases[i]);
    return acc;
}

// Maximal root of theta -> sum p_i b_i^theta = 1 for a base family with
// negative drift. Returns +inf when all bases <= 1 or the bracket cap is hit.
double bisect_root(const std::vector<double>& bases, const std::vector<DataPoint>& pts,
                   double tol) {
    double bmax = 0.0;
    for (double b : bases) bmax = std::max(bmax, b);
    if (bmax <= 1.0) return kInfExponent;

    double hi = 1.0;
    while (moment(bases, pts, hi) <= 1.0) {
        hi *= 2.0;
        if (hi > kThetaBracketCap) return kInfExponent;
    }
    double lo = hi / 2.0 >= 1.0 ? hi / 2.0 : 0.0;
    if (moment(bases, pts, lo) > 1.0) lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket narrower than FP spacing at this scale
        if (moment(bases, pts, mid) <= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct GoldenResult {
    double x;
    double value;
};

// Golden-section maximisation of f on [a, b] to absolute x-tolerance.
template <typename F>
GoldenResult golden_max(F f, double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

double bisect_drift_zero(const Dataset& ds, double lo, double hi, bool lo_positive) {
    // invariant: sign(G(lo)) != sign(G(hi)); refine to 1e-12 on lambda
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g = log_drift(ds, mid);
        if ((g > 0.0) == lo_positive)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string phase_name(Phase p) {
    switch (p) {
        case Phase::Monotone: return "monotone";
        case Phase::Inflationary: return "inflationary";
        case Phase::Deflationary: return "deflationary";
        case Phase::Boundary: return "boundary";
        case Phase::OutOfRange: return "out_of_range";
    }
    return "?";
}

double log_drift(const Dataset& ds, double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double b = std::fabs(1.0 - ds.eta() * lambda * ds.s2(i));
        if (b == 0.0) return -kInfExponent;
        acc += ds.point(i).p * std::log(b);
    }
    return acc;
}

double cramer_exponent(const Dataset& ds, double lambda, double tol) {
    const double g = log_drift(ds, lambda);
    if (g >= 0.0) return 0.0;
    return bisect_root(ds.log_bases(lambda), ds.points(), tol);
}

std::pair<double, double> shifted_exponents(const Dataset& ds, double lambda0, double eps,
                                            double kappa, double tol) {
    auto [up, down] = ds.shifted_bases(lambda0, eps, kappa);
    const double bmax = *std::max_element(up.begin(), up.end());
    if (bmax >= 4.0) throw ShiftTooLargeError(bmax);
    if (drift_of_bases(up, ds.points()) >= 0.0) throw NoRootError();
    const double vartheta_minus = bisect_root(up, ds.points(), tol);
    const double vartheta_plus = bisect_root(down, ds.points(), tol);
    return {vartheta_minus, vartheta_plus};
}

CriticalValues critical_values(const Dataset& ds) {
    const double s_star2 = ds.s_star() * ds.s_star();
    return {2.0 / (ds.eta() * s_star2), 4.0 / (ds.eta() * s_star2), 2.0 / (ds.eta() * ds.s_bar_sq())};
}

PhaseReport classify_phase(const Dataset& ds, double lambda) {
    const auto crit = critical_values(ds);
    PhaseReport rep;
    rep.lambda = lambda;
    rep.lambda_crit_mb = crit.lambda_crit_mb;
    rep.lambda_max_mb = crit.lambda_max_mb;
    rep.lambda_crit_fb = crit.lambda_crit_fb;
    rep.log_drift = log_drift(ds, lambda);
    rep.vartheta = cramer_exponent(ds, lambda);
    rep.singular = std::isinf(rep.log_drift);

    const double ls2 = ds.eta() * lambda * ds.s_star() * ds.s_star();
    if (lambda == crit.lambda_crit_mb || lambda == crit.lambda_max_mb) {
        rep.phase = Phase::Boundary;
    } else if (lambda >= crit.lambda_max_mb) {
        rep.phase = Phase::OutOfRange;
    } else if (ls2 < 2.0) {
        rep.phase = Phase::Monotone;
    } else if (rep.singular || rep.log_drift < -kBoundaryTol) {
        rep.phase = Phase::Deflationary;
    } else if (rep.log_drift > kBoundaryTol) {
        rep.phase = Phase::Inflationary;
    } else {
        rep.phase = Phase::Boundary;
    }
    return rep;
}

InflationaryEndpoint inflationary_endpoint(const Dataset& ds, double lambda0, double grid_step) {
    const double g0 = log_drift(ds, lambda0);
    if (!(g0 > 0.0)) throw NotInflationaryError("G(lambda0) <= 0");
    const double lo_end = critical_values(ds).lambda_crit_mb;
    if (!(lambda0 > lo_end)) throw NotInflationaryError("lambda0 <= lambda_crit_mb");
    if (grid_step <= 0.0) grid_step = (lambda0 - lo_end) / static_cast<double>(kDefaultGrid);

    InflationaryEndpoint out{lo_end, lo_end, {}};
    double prev = lambda0;
    bool prev_positive = true;
    for (double z = lambda0 - grid_step; z > lo_end; z -= grid_step) {
        const bool pos = log_drift(ds, z) > 0.0;
        if (pos != prev_positive) out.zeros.push_back(bisect_drift_zero(ds, z, prev, !prev_positive));
        prev = z;
        prev_positive = pos;
    }
    // close the scan against the lower endpoint
    if (prev_positive != (log_drift(ds, lo_end + 1e-15) > 0.0)) {
        const bool lower_pos = log_drift(ds, lo_end + 1e-15) > 0.0;
        out.zeros.push_back(bisect_drift_zero(ds, lo_end, prev, lower_pos));
    }
    if (!out.zeros.empty()) {
        out.lambda_star = out.zeros.front();  // scan ran downward: front is the largest zero
        out.literal_inf = out.zeros.back();
        std::sort(out.zeros.begin(), out.zeros.end());
    }
    return out;
}

CollapseThreshold collapse_threshold(const Dataset& ds, double lambda0, double grid_step) {
    const auto endpoint = inflationary_endpoint(ds, lambda0, grid_step);
    const double lambda_star = endpoint.lambda_star;
    if (grid_step <= 0.0) grid_step = (lambda0 - lambda_star) / static_cast<double>(kDefaultGrid);

    const auto objective = [&](double zeta, std::size_t i) {
        const double es2 = ds.eta() * ds.s2(i);
        const double g = log_drift(ds, zeta);
        return zeta -
               (4.0 - zeta * es2) * (zeta * es2 - 1.0) / es2 * (1.0 - std::exp(-0.5 * std::max(g, 0.0)));
    };

    CollapseThreshold out{lambda_star, false, 0.0, 0};
    double best = -kInfExponent;
    const auto n_cells = static_cast<std::size_t>(std::ceil((lambda0 - lambda_star) / grid_step));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double es2 = ds.eta() * ds.s2(i);
        if (es2 == 0.0) continue;
        const double feasible_from = std::max(lambda_star, 1.0 / es2);
        if (feasible_from >= lambda0) continue;
        for (std::size_t k = 0; k <= n_cells; ++k) {
            const double z =
                std::min(lambda0, lambda_star + grid_step * static_cast<double>(k));
            if (z <= feasible_from) continue;
            const double v = objective(z, i);
            if (v > best) {
                best = v;
                out.index_exists = true;
                out.argmax_zeta = z;
                out.argmax_index = i;
            }
        }
    }
    if (!out.index_exists) return out;  // empty feasible set: sentinel lambda_coll = lambda_star

    const std::size_t i = out.argmax_index;
    const double feasible_from = std::max(lambda_star, 1.0 / (ds.eta() * ds.s2(i)));
    const double a = std::max(feasible_from, out.argmax_zeta - grid_step);
    const double b = std::min(lambda0, out.argmax_zeta + grid_step);
    const auto refined = golden_max([&](double z) { return objective(z, i); }, a, b, 1e-10);
    out.lambda_coll = std::max(best, refined.value);
    out.argmax_zeta = refined.value >= best ? refined.x : out.argmax_zeta;
    return out;
}

DescentMargin descent_margin(const Dataset& ds, double lambda_plus, double lambda0,
                             double grid_step) {
    if (lambda_plus > lambda0) throw DegenerateIntervalError();
    if (grid_step <= 0.0)
        grid_step = std::max((lambda0 - lambda_plus) / static_cast<double>(kDefaultGrid), 1e-15);

    // delta_gap is exact: distance from the interval to each singularity
    double gap = kInfExponent;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.s2(i) == 0.0) continue;
        const double c = 1.0 / (ds.eta() * ds.s2(i));
        gap = std::min(gap, std::max({lambda_plus - c, c - lambda0, 0.0}));
    }
    gap *= ds.eta();

    double q = log_drift(ds, lambda0);
    double arg = lambda0;
    for (double z = lambda_plus; z < lambda0; z += grid_step) {
        const double g = log_drift(ds, z);
        if (g < q) {
            q = g;
            arg = z;
        }
    }
    if (lambda0 > lambda_plus) {
        const auto refined =
            golden_max([&](double z) { return -log_drift(ds, z); },
                       std::max(lambda_plus, arg - grid_step), std::min(lambda0, arg + grid_step),
                       1e-12);
        q = std::min(q, -refined.value);
    }
    if (!(q > 0.0)) throw NotInflationaryError("G is not strictly positive on [lambda_plus, lambda0]");
    if (!(gap > 0.0)) throw NotInflationaryError("interval touches a singular curvature");
    return {q, gap};
}

LargeSpikeTail large_spike_exponent(const Dataset& ds, double lambda0, double delta) {
    if (!(delta > 0.0)) throw NonpositiveDeltaError();
    LargeSpikeTail out;
    out.delta = delta;
    out.p_3delta = 0.0;
    const auto bases = ds.log_bases(lambda0);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] > 1.0 + 3.0 * delta) {
            out.index_set.push_back(i);
            out.p_3delta += ds.point(i).p;
        }
    }
    if (out.p_3delta <= 0.0)
        out.alpha = kInfExponent;
    else
        out.alpha = -std::log(out.p_3delta) / (2.0 * std::log1p(delta));
    return out;
}

std::vector<PhaseReport> sweep(const Dataset& ds, double lambda_lo, double lambda_hi,
                               std::size_t n_points) {
    if (!(lambda_lo >= 0.0) || !(lambda_hi > lambda_lo) || n_points < 2)
        throw Error("sweep: need 0 <= lo < hi and n_points >= 2");
    std::vector<PhaseReport> out(n_points);
    const double step = (lambda_hi - lambda_lo) / static_cast<double>(n_points - 1);

    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(n_points));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t k = w; k < n_points; k += workers) {
                const double lam =
                    k + 1 == n_points ? lambda_hi : lambda_lo + step * static_cast<double>(k);
                out[k] = classify_phase(ds, lam);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace catapult
