#include "catapult/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "catapult/errors.hpp"

namespace catapult {

Dataset Dataset::validate(std::vector<DataPoint> raw, double eta) {
    if (raw.empty()) throw EmptyDatasetError();
    if (!(eta > 0.0) || !std::isfinite(eta)) throw NonpositiveEtaError(eta);

    double total = 0.0;
    for (const auto& pt : raw) {
        if (!std::isfinite(pt.s) || !std::isfinite(pt.p)) throw Error("dataset: non-finite entry");
        if (pt.p < 0.0) throw NonpositiveWeightError(pt.p);
        total += pt.p;
    }

    // merge duplicate s values, drop zero weights
    std::map<double, double> merged;
    for (const auto& pt : raw) {
        if (pt.p == 0.0) continue;
        merged[pt.s] += pt.p;
    }
    if (merged.empty()) throw EmptyDatasetError();

    if (std::fabs(total - 1.0) > 1e-12) {
        std::fprintf(stderr, "note: dataset weights sum to %.17g; renormalising\n", total);
    }

    std::vector<DataPoint> pts;
    pts.reserve(merged.size());
    bool any_nonzero = false;
    for (const auto& [s, p] : merged) {
        pts.push_back({s, p / total});
        if (s != 0.0) any_nonzero = true;
    }
    if (!any_nonzero) throw AllZeroDataError();
    return Dataset(std::move(pts), eta);
}

Dataset Dataset::from_aligned(std::vector<DataPoint> points, double eta) {
    if (points.empty()) throw EmptyDatasetError();
    if (!(eta > 0.0)) throw NonpositiveEtaError(eta);
    return Dataset(std::move(points), eta);
}

Dataset::Dataset(std::vector<DataPoint> points, double eta)
    : points_(std::move(points)), eta_(eta) {
    s2_.reserve(points_.size());
    s4_.reserve(points_.size());
    for (const auto& pt : points_) {
        const double sq = pt.s * pt.s;
        s2_.push_back(sq);
        s4_.push_back(sq * sq);
        s_star_ = std::max(s_star_, std::fabs(pt.s));
        s_bar_sq_ += pt.p * sq;
    }
}

std::pair<double, double> Dataset::kernel_rate_bounds(double lambda0) const {
    double a_minus = 4.0 * s2_[0] - eta_ * lambda0 * s4_[0];
    double a_plus = 4.0 * s2_[0];
    for (std::size_t i = 1; i < points_.size(); ++i) {
        a_minus = std::min(a_minus, 4.0 * s2_[i] - eta_ * lambda0 * s4_[i]);
        a_plus = std::max(a_plus, 4.0 * s2_[i]);
    }
    return {a_minus, a_plus};
}

std::vector<double> Dataset::log_bases(double lambda) const {
    std::vector<double> b(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) b[i] = std::fabs(1.0 - lambda * eta_ * s2_[i]);
    return b;
}

std::pair<std::vector<double>, std::vector<double>> Dataset::shifted_bases(double lambda0,
                                                                           double eps,
                                                                           double kappa) const {
    const double s_star2 = s_star_ * s_star_;
    const double shift = eta_ * s_star2 * eps + eta_ * s_star2 * s_star2 * kappa * kappa;
    std::vector<double> up(points_.size()), down(points_.size());
    const auto b = log_bases(lambda0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        up[i] = b[i] + shift;
        down[i] = std::max(b[i] - shift, 0.0);
    }
    return {std::move(up), std::move(down)};
}

std::pair<Dataset, Dataset> Dataset::split_signs() const {
    std::vector<DataPoint> plus, minus;
    plus.reserve(points_.size());
    minus.reserve(points_.size());
    for (const auto& pt : points_) {
        plus.push_back({std::max(pt.s, 0.0), pt.p});
        minus.push_back({std::max(-pt.s, 0.0), pt.p});
    }
    return {Dataset::from_aligned(std::move(plus), eta_),
            Dataset::from_aligned(std::move(minus), eta_)};
}

IndexSampler::IndexSampler(const Dataset& ds) {
    cdf_.reserve(ds.size());
    double acc = 0.0;
    for (const auto& pt : ds.points()) {
        acc += pt.p;
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;  // guard the top against rounding
}

std::size_t IndexSampler::pick(double u) const {
    // smallest i with cdf[i] > u
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf_[mid] > u)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace catapult
