#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "asgrowth/series.hpp"

namespace asgrowth::trend {

// Trend estimate for an annual count series.  `fitted` is the deterministic
// trend line (anchored at the first observation for the drift method);
// `one_step` holds one-step-ahead predictions, the model's fitted values in
// the usual time-series sense, which is what correlations use.
struct TrendEstimate {
    std::string method;          // "rw_drift" or "linear"
    double annual_growth = 0.0;  // drift, or OLS slope, per year
    double se = 0.0;             // standard error of annual_growth
    double intercept = 0.0;      // linear method only; anchor value otherwise
    Series fitted;
    Series one_step;
};

// Random walk with drift: growth is the mean first difference, its standard
// error the sample sd of the differences over sqrt(n-1).
TrendEstimate rw_drift_trend(const Series& s);

// Ordinary least squares of the values on time 0..n-1.
TrendEstimate linear_trend(const Series& s);

// 100 * country growth / region growth.
double relative_growth_pct(const TrendEstimate& country,
                           const TrendEstimate& region);

// Pearson correlation between two trends' one-step fitted values, aligned
// by year when both carry an origin.  (The deterministic trend lines would
// correlate at exactly +/-1 and carry no information.)
double trend_correlation(const TrendEstimate& a, const TrendEstimate& b);

double fisher_z(double r);

struct CorrelationComparison {
    double r1 = 0.0, r2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    double z1 = 0.0, z2 = 0.0;  // Fisher transforms
    double zd = 0.0;            // test statistic
    double p_value = 0.0;       // two-sided
    bool reject_equal = false;  // |zd| > 1.96
};

// Tests H0: rho1 == rho2 given independent samples of sizes n1, n2.
CorrelationComparison compare_correlations(double r1, std::size_t n1,
                                           double r2, std::size_t n2);

// Same test starting from already-transformed values.
CorrelationComparison compare_fisher_z(double z1, std::size_t n1, double z2,
                                       std::size_t n2);

}  // namespace asgrowth::trend
