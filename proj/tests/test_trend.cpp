#include <cmath>
#include <vector>

#include "doctest.h"

#include "asgrowth/errors.hpp"
#include "asgrowth/series.hpp"
#include "asgrowth/series_stats.hpp"
#include "asgrowth/trend.hpp"
#include "support/rng.hpp"

using namespace asgrowth;
using namespace asgrowth::trend;

TEST_CASE("drift trend of an exact line") {
    std::vector<double> v;
    for (int t = 0; t < 10; ++t) v.push_back(10.0 + 2.0 * t);
    const TrendEstimate e = rw_drift_trend(Series(v, 2000));
    CHECK(e.method == "rw_drift");
    CHECK(e.annual_growth == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.se == doctest::Approx(0.0).epsilon(1e-14));
    // the deterministic line is anchored at the first observation
    REQUIRE(e.fitted.size() == 10);
    CHECK(e.fitted[0] == doctest::Approx(10.0));
    CHECK(e.fitted[9] == doctest::Approx(28.0));
    // one-step predictions: first value itself, then y_{t-1} + drift
    REQUIRE(e.one_step.size() == 10);
    CHECK(e.one_step[0] == doctest::Approx(10.0));
    for (std::size_t i = 1; i < 10; ++i)
        CHECK(e.one_step[i] == doctest::Approx(v[i - 1] + 2.0));
    CHECK(*e.one_step.origin_year == 2000);
    CHECK_THROWS_AS(rw_drift_trend(Series({1.0, 2.0})), DegenerateInput);
}

TEST_CASE("drift se is the sd of differences over sqrt(n-1)") {
    const Series s({0.0, 1.0, 3.0, 6.0, 10.0});  // diffs 1,2,3,4
    const TrendEstimate e = rw_drift_trend(s);
    CHECK(e.annual_growth == doctest::Approx(2.5).epsilon(1e-14));
    const double sd = stats::stddev({1.0, 2.0, 3.0, 4.0}, true);
    CHECK(e.se == doctest::Approx(sd / std::sqrt(4.0)).epsilon(1e-14));
}

TEST_CASE("linear trend matches hand-computed OLS") {
    const std::vector<double> y{2.0, 4.0, 5.0, 8.0, 9.0, 13.0};
    const std::size_t n = y.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += double(i);
        sy += y[i];
        sxx += double(i) * double(i);
        sxy += double(i) * y[i];
    }
    const double slope =
        (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / double(n);

    const TrendEstimate e = linear_trend(Series(y, 1990));
    CHECK(e.method == "linear");
    CHECK(e.annual_growth == doctest::Approx(slope).epsilon(1e-12));
    CHECK(e.intercept == doctest::Approx(intercept).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
        CHECK(e.fitted[i] ==
              doctest::Approx(intercept + slope * double(i)).epsilon(1e-12));

    // se of the slope from the classical formula
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * double(i));
        rss += r * r;
    }
    const double mx = sx / double(n);
    double sxx_c = 0;
    for (std::size_t i = 0; i < n; ++i)
        sxx_c += (double(i) - mx) * (double(i) - mx);
    const double se = std::sqrt(rss / double(n - 2) / sxx_c);
    CHECK(e.se == doctest::Approx(se).epsilon(1e-12));
}

TEST_CASE("relative growth is a simple percentage of the region") {
    TrendEstimate country, region;
    country.annual_growth = 23.2;
    region.annual_growth = 464.0;
    CHECK(relative_growth_pct(country, region) ==
          doctest::Approx(5.0).epsilon(1e-12));
    region.annual_growth = 0.0;
    CHECK_THROWS_AS(relative_growth_pct(country, region), DivisionByZero);
}

TEST_CASE("trend correlation uses one-step values aligned by year") {
    testsupport::Rng rng(11);
    std::vector<double> a{50.0}, b{30.0};
    for (int t = 0; t < 19; ++t) {
        a.push_back(a.back() + 5.0 + rng.normal());
        b.push_back(b.back() + 3.0 + 0.8 * rng.normal());
    }
    const TrendEstimate ta = rw_drift_trend(Series(a, 1994));
    const TrendEstimate tb = rw_drift_trend(Series(b, 1994));
    const double r = trend_correlation(ta, tb);
    const double want =
        stats::pearson(ta.one_step.values, tb.one_step.values);
    CHECK(r == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::fabs(r) < 1.0);
}

TEST_CASE("trend correlation respects partial year overlap") {
    // identical generating process, offset origins: overlap 1997..2003
    std::vector<double> v{10, 12, 15, 19, 24, 30, 37, 45, 54, 64};
    const TrendEstimate ta = rw_drift_trend(Series(v, 1994));
    const TrendEstimate tb = rw_drift_trend(Series(v, 1997));
    const double r = trend_correlation(ta, tb);

    // build the overlap by hand: years 1997-2003 of each one_step series
    std::vector<double> xa(ta.one_step.values.begin() + 3,
                           ta.one_step.values.end());
    std::vector<double> xb(tb.one_step.values.begin(),
                           tb.one_step.values.end() - 3);
    CHECK(r == doctest::Approx(stats::pearson(xa, xb)).epsilon(1e-12));

    const TrendEstimate far = rw_drift_trend(Series(v, 2030));
    CHECK_THROWS_AS(trend_correlation(ta, far), LengthMismatch);
}

TEST_CASE("undated trends need equal lengths") {
    const TrendEstimate a =
        rw_drift_trend(Series({1.0, 2.0, 4.0, 8.0, 16.0}));
    const TrendEstimate b = rw_drift_trend(Series({1.0, 3.0, 6.0, 10.0}));
    CHECK_THROWS_AS(trend_correlation(a, b), LengthMismatch);
}

TEST_CASE("fisher transform") {
    CHECK(fisher_z(0.90) == doctest::Approx(std::atanh(0.90)).epsilon(1e-15));
    CHECK(fisher_z(0.0) == doctest::Approx(0.0));
    CHECK(fisher_z(-0.5) == doctest::Approx(-std::atanh(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(fisher_z(1.0), DomainError);
    CHECK_THROWS_AS(fisher_z(-1.0), DomainError);
    CHECK_THROWS_AS(fisher_z(1.5), DomainError);
}

TEST_CASE("fisher comparison of transformed correlations") {
    // zd = (z1 - z2) / sqrt(1/(n1-3) + 1/(n2-3))
    const CorrelationComparison c = compare_fisher_z(2.1, 17, 1.3, 17);
    CHECK(c.zd == doctest::Approx(2.1166).epsilon(1e-3));
    CHECK(c.p_value == doctest::Approx(0.0343).epsilon(2e-2));
    CHECK(c.reject_equal);
    CHECK(c.r1 == doctest::Approx(std::tanh(2.1)).epsilon(1e-14));
    CHECK(c.n1 == 17);

    const CorrelationComparison weak = compare_fisher_z(2.1, 17, 1.5, 17);
    CHECK(weak.zd == doctest::Approx(1.5875).epsilon(1e-3));
    CHECK_FALSE(weak.reject_equal);
    CHECK(weak.p_value > 0.05);

    CHECK_THROWS_AS(compare_fisher_z(1.0, 3, 0.5, 17), DegenerateInput);
}

TEST_CASE("comparing raw correlations equals comparing their transforms") {
    const double r1 = std::tanh(2.1), r2 = std::tanh(1.3);
    const CorrelationComparison via_r = compare_correlations(r1, 17, r2, 17);
    const CorrelationComparison via_z = compare_fisher_z(2.1, 17, 1.3, 17);
    CHECK(via_r.zd == doctest::Approx(via_z.zd).epsilon(1e-12));
    CHECK(via_r.p_value == doctest::Approx(via_z.p_value).epsilon(1e-12));
    CHECK(via_r.z1 == doctest::Approx(2.1).epsilon(1e-12));
}
