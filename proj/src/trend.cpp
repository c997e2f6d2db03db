#include "asgrowth/trend.hpp"

#include <algorithm>
#include <cmath>

#include "asgrowth/distributions.hpp"
#include "asgrowth/errors.hpp"
#include "asgrowth/series_stats.hpp"
#include "detail/linalg.hpp"

namespace asgrowth::trend {

TrendEstimate rw_drift_trend(const Series& s) {
    const std::size_t n = s.size();
    if (n < 3) throw DegenerateInput("rw_drift_trend needs at least 3 values");
    std::vector<double> diffs(n - 1);
    for (std::size_t i = 1; i < n; ++i) diffs[i - 1] = s[i] - s[i - 1];

    TrendEstimate t;
    t.method = "rw_drift";
    t.annual_growth = stats::mean(diffs);
    t.se = stats::stddev(diffs, true) / std::sqrt(double(n - 1));
    t.intercept = s[0];

    std::vector<double> line(n), step(n);
    for (std::size_t i = 0; i < n; ++i)
        line[i] = s[0] + double(i) * t.annual_growth;
    step[0] = s[0];
    for (std::size_t i = 1; i < n; ++i) step[i] = s[i - 1] + t.annual_growth;
    t.fitted = Series(std::move(line), s.origin_year);
    t.one_step = Series(std::move(step), s.origin_year);
    return t;
}

TrendEstimate linear_trend(const Series& s) {
    const std::size_t n = s.size();
    if (n < 3) throw DegenerateInput("linear_trend needs at least 3 values");

    detail::Matrix X(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        X.at(i, 0) = 1.0;
        X.at(i, 1) = double(i);
    }
    auto ols = detail::ols(X, s.values);
    if (!ols) throw SingularRegression("time regressor is degenerate");

    TrendEstimate t;
    t.method = "linear";
    t.intercept = ols->beta[0];
    t.annual_growth = ols->beta[1];
    t.se = ols->se[1];
    t.fitted = Series(ols->fitted, s.origin_year);
    // for a deterministic trend the one-step prediction is the line itself
    t.one_step = t.fitted;
    return t;
}

double relative_growth_pct(const TrendEstimate& country,
                           const TrendEstimate& region) {
    if (region.annual_growth == 0.0)
        throw DivisionByZero("relative growth against a flat region trend");
    return 100.0 * country.annual_growth / region.annual_growth;
}

double trend_correlation(const TrendEstimate& a, const TrendEstimate& b) {
    const Series& x = a.one_step;
    const Series& y = b.one_step;
    std::size_t xb = 0, yb = 0, len = 0;
    if (x.origin_year && y.origin_year) {
        const int lo = std::max(*x.origin_year, *y.origin_year);
        const int hi = std::min(*x.origin_year + int(x.size()),
                                *y.origin_year + int(y.size()));
        if (hi <= lo) throw LengthMismatch("trend years do not overlap");
        xb = std::size_t(lo - *x.origin_year);
        yb = std::size_t(lo - *y.origin_year);
        len = std::size_t(hi - lo);
    } else {
        if (x.size() != y.size())
            throw LengthMismatch(
                "undated trends must be the same length to correlate");
        len = x.size();
    }
    if (len < 2) throw LengthMismatch("trend overlap shorter than 2 years");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        mx += x[xb + i];
        my += y[yb + i];
    }
    mx /= double(len);
    my /= double(len);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double dx = x[xb + i] - mx;
        const double dy = y[yb + i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ZeroVariance("a trend is constant over the overlap window");
    return sxy / std::sqrt(sxx * syy);
}

double fisher_z(double r) {
    if (!(r > -1.0 && r < 1.0))
        throw DomainError("fisher_z requires r strictly inside (-1,1)");
    return std::atanh(r);
}

CorrelationComparison compare_fisher_z(double z1, std::size_t n1, double z2,
                                       std::size_t n2) {
    if (n1 < 4 || n2 < 4)
        throw DegenerateInput("correlation comparison needs n >= 4 per side");
    CorrelationComparison c;
    c.n1 = n1;
    c.n2 = n2;
    c.z1 = z1;
    c.z2 = z2;
    c.r1 = std::tanh(z1);
    c.r2 = std::tanh(z2);
    const double se =
        std::sqrt(1.0 / double(n1 - 3) + 1.0 / double(n2 - 3));
    c.zd = (z1 - z2) / se;
    c.p_value = 2.0 * (1.0 - stats::normal_cdf(std::fabs(c.zd)));
    c.reject_equal = std::fabs(c.zd) > 1.96;
    return c;
}

CorrelationComparison compare_correlations(double r1, std::size_t n1,
                                           double r2, std::size_t n2) {
    CorrelationComparison c =
        compare_fisher_z(fisher_z(r1), n1, fisher_z(r2), n2);
    c.r1 = r1;
    c.r2 = r2;
    return c;
}

}  // namespace asgrowth::trend
