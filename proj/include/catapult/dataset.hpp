#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "catapult/rng.hpp"

namespace catapult {

struct DataPoint {
    double s;  // data value
    double p;  // sampling probability
};

// Immutable training set {(s_i, p_i)} plus learning rate eta. Construction
// canonicalises: zero-weight points are dropped, duplicate s values merged
// (the dynamics only see the law of s_{i(t)}), and weights renormalised to
// sum 1. All derived per-point constants live here so downstream modules
// never recompute them.
class Dataset {
  public:
    // Validating factory. Throws EmptyDatasetError, NonpositiveWeightError,
    // NonpositiveEtaError, AllZeroDataError.
    static Dataset validate(std::vector<DataPoint> raw, double eta);

    // Position-preserving factory: no merging, no zero-drop, weights assumed
    // normalised. Used for sign-split datasets, where point i must stay
    // aligned with point i of the parent so index sequences carry over, and
    // where an all-zero channel is legal (its dynamics are the identity).
    static Dataset from_aligned(std::vector<DataPoint> points, double eta);

    double eta() const { return eta_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<DataPoint>& points() const { return points_; }
    const DataPoint& point(std::size_t i) const { return points_[i]; }
    double s2(std::size_t i) const { return s2_[i]; }
    double s4(std::size_t i) const { return s4_[i]; }

    double s_star() const { return s_star_; }      // max_i |s_i|
    double s_bar_sq() const { return s_bar_sq_; }  // sum_i p_i s_i^2

    // a_minus = min_i (4 s_i^2 - eta lambda0 s_i^4), a_plus = max_i 4 s_i^2.
    // a_minus > 0 iff lambda0 < 4/(eta s_star^2), provided all s_i != 0.
    std::pair<double, double> kernel_rate_bounds(double lambda0) const;

    // b_i(lambda) = |1 - lambda eta s_i^2|, aligned with points()
    std::vector<double> log_bases(double lambda) const;

    // b_i^+ = b_i + eta s*^2 eps + eta s*^4 kappa^2, b_i^- = max(b_i - ..., 0)
    std::pair<std::vector<double>, std::vector<double>> shifted_bases(double lambda0, double eps,
                                                                      double kappa) const;

    // dataset as seen through s -> max(+-s, 0); index-aligned with *this
    std::pair<Dataset, Dataset> split_signs() const;

  private:
    Dataset(std::vector<DataPoint> points, double eta);

    std::vector<DataPoint> points_;
    std::vector<double> s2_, s4_;
    double eta_ = 0.0;
    double s_star_ = 0.0;
    double s_bar_sq_ = 0.0;
};

// CDF-inversion sampler over the dataset's weights. Returns the smallest i
// with cdf[i] > u (strict inequality: u landing exactly on a boundary picks
// the next index).
class IndexSampler {
  public:
    explicit IndexSampler(const Dataset& ds);
    std::size_t operator()(RngStream& rng) const { return pick(rng.next_unit()); }
    std::size_t pick(double u) const;

  private:
    std::vector<double> cdf_;
};

}  // namespace catapult
