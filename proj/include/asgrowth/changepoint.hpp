#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "asgrowth/series.hpp"

namespace asgrowth::changepoint {

// Centered cumulative sums: C_i = sum_{j<=i}(y_j - mean).  The final entry
// is zero up to rounding; excursions flag shifts in level or spread.
Series cusum(const Series& s);

enum class PenaltyKind { aic, sic, manual };

// Penalty charged per extra changepoint.  params_per_cp counts what a split
// introduces: the break location plus the new variance parameter.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::sic;
    int params_per_cp = 2;
    std::optional<double> manual_value;

    double value(std::size_t n) const;
    std::string label() const;
};

struct CpOptions {
    std::size_t min_segment = 2;
    // segment variances are floored at this factor times the series
    // variance, so zero-variance stretches cannot produce -inf costs
    double variance_floor_factor = 1e-8;
};

// Twice the negative Gaussian log-likelihood of the inclusive segment
// [from, to] under a variance change with the mean held at the global
// series mean.
double segment_cost(const Series& s, std::size_t from, std::size_t to,
                    const CpOptions& opts = {});

enum class SearchMethod { binseg, segneigh };

// A changepoint index is the number of observations in all segments to its
// left, i.e. the 1-based last index of the left segment.
struct ChangePointResult {
    SearchMethod method = SearchMethod::binseg;
    PenaltySpec penalty;
    std::vector<std::size_t> changepoints;
    std::vector<double> segment_variances;
    double total_cost = 0.0;  // segment costs plus penalty per changepoint
    // segneigh only: minimum unpenalized cost for exactly m changepoints,
    // m = 0..Q; useful for diagnostics
    std::vector<double> costs_by_count;
};

// Binary segmentation: repeatedly splits wherever the best split satisfies
// cost(left) + cost(right) + penalty < cost(whole), exploring left halves
// first; ties go to the smallest index.
ChangePointResult binseg(const Series& s, const PenaltySpec& penalty,
                         std::size_t max_cps, const CpOptions& opts = {});

// Segment neighbourhood: exact dynamic program over every segmentation
// with up to Q changepoints; picks the count minimizing penalized cost,
// smallest count on ties.  O(Q n^2).
ChangePointResult segneigh(const Series& s, const PenaltySpec& penalty,
                           std::size_t Q, const CpOptions& opts = {});

// Intersection within +/- slack, reported at the segment-neighbourhood
// location.
std::vector<std::size_t> consensus_match(
    const std::vector<std::size_t>& segneigh_cps,
    const std::vector<std::size_t>& binseg_cps, std::size_t slack = 1);

// Changepoints both searches agree on (within one index) under the SIC
// penalty, at the segment-neighbourhood location.
std::vector<std::size_t> consensus_changepoints(const Series& s,
                                                std::size_t max_cps = 5,
                                                const CpOptions& opts = {});

struct GrowthRates {
    double before_pct = 0.0;  // OLS slope over the side mean, times 100
    double after_pct = 0.0;
    double before_slope = 0.0;
    double after_slope = 0.0;
};

// Relative growth on each side of a changepoint at cp (left side holds the
// first cp values).  Each side needs at least 3 points.
GrowthRates iaav_growth_rates(const Series& s, std::size_t cp);

}  // namespace asgrowth::changepoint
