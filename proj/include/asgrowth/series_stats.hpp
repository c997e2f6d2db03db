#pragma once

#include <vector>

#include "asgrowth/series.hpp"

namespace asgrowth::stats {

double mean(const std::vector<double>& v);

/// Central second moment; divides by n (biased) or n-1 (sample).
double variance(const std::vector<double>& v, bool sample = false);
double stddev(const std::vector<double>& v, bool sample = false);

/// Pearson correlation.  Throws LengthMismatch on unequal lengths and
/// ZeroVariance when either input is constant.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// d-fold first difference.  d = 0 returns a copy.  The origin year, when
/// present, shifts forward by d.  Throws DomainError when d >= length and
/// DegenerateInput when fewer than 2 values would remain.
Series difference(const Series& s, int d);

/// Inter-annual absolute variation: |first difference|.  Needs length >= 3.
Series iaav(const Series& s);

struct AcfResult {
    int max_lag = 0;
    std::vector<double> values;  // indexed by lag, values[0] == 1
    double conf_bound = 0.0;     // 1.96 / sqrt(n)
};

/// Autocorrelation with the biased estimator: global mean, denominator
/// n * variance.  Throws ZeroVariance for constant input and DomainError
/// unless 0 <= max_lag < length.
AcfResult acf(const Series& s, int max_lag);

/// Partial autocorrelation via Durbin-Levinson on acf(s).  values[0] is 1
/// by convention; lags 1..max_lag are the partial autocorrelations.
AcfResult pacf(const Series& s, int max_lag);

enum class TrendMode { none, constant, constant_trend };

enum class PValueKind {
    exact,              // p_value computed from the null distribution
    tabulated_bracket,  // p_value is a bracket midpoint from tabulated
                        // critical values; the 5% decision is exact
};

struct StatTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    PValueKind p_value_kind = PValueKind::exact;
    bool reject_null = false;
};

/// Dickey-Fuller unit root test (null: unit root).  lag_order 0 is the
/// simple regression of the first difference on the lagged level; higher
/// orders add lagged difference terms.  The 5% decision uses MacKinnon's
/// response-surface critical values, so p_value is a tabulated bracket.
/// Needs length >= 8; throws SingularRegression on degenerate designs.
StatTestResult dickey_fuller(const Series& s,
                             TrendMode mode = TrendMode::constant,
                             int lag_order = 0);

/// Jarque-Bera normality test: n/6 * (S^2 + (K-3)^2/4) against chi^2(2).
/// Needs length >= 8; throws ZeroVariance for constant input.
StatTestResult jarque_bera(const Series& s);

/// Shapiro-Wilk normality test, Royston's AS R94 algorithm.  Valid for
/// 3 <= n <= 5000; throws DegenerateInput outside that range and
/// ZeroVariance when all values are equal.
StatTestResult shapiro_wilk(const Series& s);

}  // namespace asgrowth::stats
