#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "asgrowth/arima.hpp"
#include "asgrowth/distributions.hpp"
#include "asgrowth/errors.hpp"
#include "asgrowth/series.hpp"
#include "asgrowth/series_stats.hpp"
#include "support/oracles.hpp"
#include "support/rng.hpp"
#include "support/simulate.hpp"

using namespace asgrowth;
using namespace asgrowth::arima;
using nlohmann::json;

namespace {

json load_fixture(const std::string& name) {
    std::ifstream in(std::string(ASGROWTH_TEST_DATA_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "missing fixture ", name);
    return json::parse(in);
}

}  // namespace

TEST_CASE("spec parsing") {
    ArimaSpec s = parse_spec("1,1,2");
    CHECK(s.p == 1);
    CHECK(s.d == 1);
    CHECK(s.q == 2);
    CHECK_FALSE(s.include_drift);
    CHECK(s.label() == "ARIMA(1,1,2)");

    s = parse_spec(" 0, 1, 0, drift ");
    CHECK(s.include_drift);
    CHECK(s.label() == "ARIMA(0,1,0)+drift");

    CHECK_THROWS_AS(parse_spec("1,1"), DomainError);
    CHECK_THROWS_AS(parse_spec("1,1,x"), DomainError);
    CHECK_THROWS_AS(parse_spec("1,1,1,trend"), DomainError);
    CHECK_THROWS_AS(parse_spec(""), DomainError);
    CHECK_THROWS_AS(parse_spec("1,1,1,drift,extra"), DomainError);
}

TEST_CASE("spec validation rejects hopeless fits") {
    Series s({1, 2, 3, 4, 5, 6});
    ArimaSpec tiny;  // (0,0,0) without drift has nothing to estimate
    CHECK_THROWS_AS(fit(s, tiny), DegenerateInput);
    ArimaSpec neg;
    neg.p = -1;
    neg.q = 1;
    CHECK_THROWS_AS(fit(s, neg), DegenerateInput);
    ArimaSpec big;
    big.p = 2;
    big.d = 1;
    big.q = 2;
    CHECK_THROWS_AS(fit(s, big), DegenerateInput);
}

TEST_CASE("exact ML fit matches the frozen statsmodels reference") {
    const json fx = load_fixture("arima_reference.json");
    const Series s(fx.at("sample").get<std::vector<double>>());
    ArimaSpec spec;
    spec.p = fx.at("order")[0].get<int>();
    spec.d = fx.at("order")[1].get<int>();
    spec.q = fx.at("order")[2].get<int>();

    const ArimaFit f = fit(s, spec);
    CHECK(std::fabs(f.params.ar[0] - fx.at("ar1").get<double>()) < 1e-3);
    CHECK(std::fabs(f.params.ma[0] - fx.at("ma1").get<double>()) < 1e-3);
    CHECK(std::fabs(f.sigma2 - fx.at("sigma2").get<double>()) < 1e-3);
    CHECK(std::fabs(f.loglik - fx.at("loglik").get<double>()) < 1e-4);
    CHECK(f.max_gradient < 1e-4);
    REQUIRE(f.coeff_se.size() == 2);
    CHECK(f.coeff_se[0] > 0.0);
    CHECK(f.coeff_se[1] > 0.0);
}

TEST_CASE("css-only fit lands near the ML optimum") {
    const json fx = load_fixture("arima_reference.json");
    const Series s(fx.at("sample").get<std::vector<double>>());
    ArimaSpec spec;
    spec.p = fx.at("order")[0].get<int>();
    spec.d = fx.at("order")[1].get<int>();
    spec.q = fx.at("order")[2].get<int>();
    FitOptions opts;
    opts.method = FitMethod::css_only;
    const ArimaFit f = fit(s, spec, opts);
    CHECK(std::fabs(f.params.ar[0] - fx.at("ar1").get<double>()) < 0.05);
    CHECK(std::fabs(f.params.ma[0] - fx.at("ma1").get<double>()) < 0.05);
    CHECK(std::isfinite(f.loglik));
    CHECK(std::isfinite(f.aicc));
}

TEST_CASE("drift-only model reduces to the mean of differences") {
    // a line plus noise, so the differences keep some variance
    testsupport::Rng rng(31);
    std::vector<double> v{10.0};
    for (int t = 0; t < 11; ++t)
        v.push_back(v.back() + 2.0 + 0.3 * rng.normal());
    const Series s(v, 2000);
    ArimaSpec spec;
    spec.d = 1;
    spec.include_drift = true;
    const ArimaFit f = fit(s, spec);
    REQUIRE(f.params.drift.has_value());

    const Series w = stats::difference(s, 1);
    CHECK(*f.params.drift ==
          doctest::Approx(stats::mean(w.values)).epsilon(1e-12));

    // residuals + fitted reconstruct the differenced series exactly
    REQUIRE(f.residuals.size() == 11);
    REQUIRE(*f.residuals.origin_year == 2001);
    for (std::size_t i = 0; i < f.residuals.size(); ++i)
        CHECK(f.fitted[i] + f.residuals[i] ==
              doctest::Approx(w[i]).epsilon(1e-12));
}

TEST_CASE("a perfectly linear series cannot be fit") {
    std::vector<double> v;
    for (int t = 0; t < 12; ++t) v.push_back(10.0 + 2.0 * t);
    ArimaSpec spec;
    spec.d = 1;
    spec.include_drift = true;
    CHECK_THROWS_AS(fit(Series(v, 2000), spec), DegenerateInput);
}

TEST_CASE("forecasting a pure drift model is the line y_n + h mu") {
    testsupport::Rng rng(4242);
    std::vector<double> v{100.0};
    for (int t = 0; t < 30; ++t)
        v.push_back(v.back() + 5.0 + rng.normal());
    const Series s(v, 1990);
    ArimaSpec spec;
    spec.d = 1;
    spec.include_drift = true;
    const ArimaFit f = fit(s, spec);
    const double mu = *f.params.drift;
    const ForecastResult fc = forecast(f, 4);
    for (int h = 1; h <= 4; ++h)
        CHECK(fc.points[std::size_t(h) - 1] ==
              doctest::Approx(s.back() + h * mu).epsilon(1e-10));
    // one step ahead the standard error is sigma itself
    CHECK(fc.se[0] == doctest::Approx(std::sqrt(f.sigma2)).epsilon(1e-12));
    // interval uses 1.96 exactly at the default level
    CHECK(fc.upper[0] - fc.points[0] ==
          doctest::Approx(1.96 * fc.se[0]).epsilon(1e-12));
    // non-default level goes through the exact quantile
    const ForecastResult fc90 = forecast(f, 2, 0.90);
    CHECK(fc90.upper[0] - fc90.points[0] ==
          doctest::Approx(stats::normal_quantile(0.95) * fc90.se[0])
              .epsilon(1e-12));
    CHECK_THROWS_AS(forecast(f, 0), DomainError);
    CHECK_THROWS_AS(forecast(f, -3), DomainError);
}

TEST_CASE("psi weights follow the AR recursion for ARMA(1,1)") {
    ArimaSpec spec;
    spec.p = 1;
    spec.q = 1;
    const double phi = 0.7, theta = 0.4;
    const auto psi = psi_weights(spec, {phi}, {theta}, 8);
    REQUIRE(psi.size() == 9);
    CHECK(psi[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi[1] == doctest::Approx(phi + theta).epsilon(1e-14));
    for (std::size_t j = 2; j < psi.size(); ++j)
        CHECK(psi[j] == doctest::Approx(phi * psi[j - 1]).epsilon(1e-13));
}

TEST_CASE("psi weights agree with the impulse-response oracle") {
    ArimaSpec spec;
    spec.p = 2;
    spec.d = 1;
    spec.q = 2;
    const std::vector<double> ar{0.5, -0.3}, ma{0.4, 0.25};
    const auto psi = psi_weights(spec, ar, ma, 24);
    const auto want = testsupport::psi_impulse(ar, ma, 1, 24);
    REQUIRE(psi.size() == want.size());
    for (std::size_t j = 0; j < psi.size(); ++j)
        CHECK(psi[j] == doctest::Approx(want[j]).epsilon(1e-10));
}

TEST_CASE("forecast standard errors accumulate psi weights") {
    const json fx = load_fixture("arima_reference.json");
    const Series s(fx.at("sample").get<std::vector<double>>());
    ArimaSpec spec;
    spec.p = 1;
    spec.q = 1;
    const ArimaFit f = fit(s, spec);
    const auto psi = psi_weights(f, 6);
    const ForecastResult fc = forecast(f, 6);
    double cum = 0.0;
    for (int h = 1; h <= 6; ++h) {
        cum += psi[std::size_t(h) - 1] * psi[std::size_t(h) - 1];
        CHECK(fc.se[std::size_t(h) - 1] ==
              doctest::Approx(std::sqrt(f.sigma2 * cum)).epsilon(1e-12));
    }
    // se never decreases with horizon
    for (int h = 1; h < 6; ++h)
        CHECK(fc.se[std::size_t(h)] >= fc.se[std::size_t(h) - 1]);
}

TEST_CASE("evaluate reproduces a fit without optimizing") {
    const json fx = load_fixture("arima_reference.json");
    const Series s(fx.at("sample").get<std::vector<double>>());
    ArimaSpec spec;
    spec.p = 1;
    spec.q = 1;
    const ArimaFit f = fit(s, spec);

    const ArimaFit e = evaluate(s, spec, f.params);
    CHECK(e.loglik == doctest::Approx(f.loglik).epsilon(1e-10));
    CHECK(e.sigma2 == doctest::Approx(f.sigma2).epsilon(1e-10));
    REQUIRE(e.residuals.size() == f.residuals.size());
    for (std::size_t i = 0; i < e.residuals.size(); ++i)
        CHECK(e.residuals[i] ==
              doctest::Approx(f.residuals[i]).epsilon(1e-9));

    // a fixed sigma2 is carried through untouched
    const ArimaFit e2 = evaluate(s, spec, f.params, 2.5);
    CHECK(e2.sigma2 == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(-exact_neg_loglik(s, spec, f.params) ==
          doctest::Approx(f.loglik).epsilon(1e-10));
}

TEST_CASE("coefficient recovery on one simulated ARIMA(1,1,1)") {
    testsupport::Rng rng(7);
    const Series s =
        testsupport::simulate_arima(rng, {0.7}, {0.4}, 1, 0.0, 400);
    ArimaSpec spec;
    spec.p = 1;
    spec.d = 1;
    spec.q = 1;
    const ArimaFit f = fit(s, spec);
    CHECK(std::fabs(f.params.ar[0] - 0.7) < 0.15);
    CHECK(std::fabs(f.params.ma[0] - 0.4) < 0.15);
    CHECK(f.max_gradient < 1e-4);
}

TEST_CASE("significance table flags strong coefficients") {
    const json fx = load_fixture("arima_reference.json");
    const Series s(fx.at("sample").get<std::vector<double>>());
    ArimaSpec spec;
    spec.p = 1;
    spec.q = 1;
    const ArimaFit f = fit(s, spec);
    const auto rows = coefficient_significance(f);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].name == "ar1");
    CHECK(rows[1].name == "ma1");
    for (const auto& r : rows) {
        CHECK(r.z == doctest::Approx(r.coefficient / r.se).epsilon(1e-12));
        CHECK(r.significant == (std::fabs(r.z) > 1.96));
    }
    // the reference fit has tight ar1/ma1: both clearly significant
    CHECK(rows[0].significant);
    CHECK(rows[1].significant);
}

TEST_CASE("holdout rmse") {
    CHECK(holdout_rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) ==
          doctest::Approx(0.0));
    CHECK(holdout_rmse({0.0, 0.0}, {3.0, 4.0}) ==
          doctest::Approx(std::sqrt(12.5)).epsilon(1e-14));
    CHECK_THROWS_AS(holdout_rmse({1.0}, {1.0, 2.0}), LengthMismatch);
    CHECK_THROWS_AS(holdout_rmse({}, {}), DegenerateInput);
}

TEST_CASE("constant series after differencing is degenerate") {
    ArimaSpec spec;
    spec.p = 1;
    spec.q = 0;
    CHECK_THROWS_AS(fit(Series({3, 3, 3, 3, 3, 3, 3, 3}), spec),
                    DegenerateInput);
}
