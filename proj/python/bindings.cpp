#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asgrowth/arima.hpp"
#include "asgrowth/changepoint.hpp"
#include "asgrowth/errors.hpp"
#include "asgrowth/ingest.hpp"
#include "asgrowth/series.hpp"
#include "asgrowth/series_stats.hpp"
#include "asgrowth/trend.hpp"

namespace py = pybind11;
using namespace asgrowth;

namespace {

// Opaque bag of parsed delegated records.
struct RecordSet {
    std::vector<ingest::DelegatedRecord> records;
};

RecordSet parse_delegated_file(const std::string& path, bool strict,
                               bool only_16bit) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    auto parsed = ingest::parse_delegated(os.str(), {strict});
    if (parsed.records.empty())
        throw NoRecords("delegated input holds no records");
    RecordSet rs;
    rs.records = only_16bit ? ingest::filter_16bit(parsed.records)
                            : std::move(parsed.records);
    return rs;
}

int default_end_year(const std::vector<ingest::DelegatedRecord>& records) {
    int last = 0;
    for (const auto& r : records)
        if (r.resource_type == ingest::ResourceType::asn && r.date &&
            r.counts_as_assigned())
            last = std::max(last, int(r.date->year()));
    if (last == 0) throw NoRecords("no dated ASN allocations in the input");
    return last;
}

arima::ArimaSpec spec_of(const std::tuple<int, int, int>& order,
                         bool drift) {
    arima::ArimaSpec spec;
    spec.p = std::get<0>(order);
    spec.d = std::get<1>(order);
    spec.q = std::get<2>(order);
    spec.include_drift = drift;
    return spec;
}

changepoint::PenaltySpec penalty_of(const std::string& name,
                                    std::optional<double> manual_value) {
    changepoint::PenaltySpec pen;
    if (name == "aic") {
        pen.kind = changepoint::PenaltyKind::aic;
    } else if (name == "sic") {
        pen.kind = changepoint::PenaltyKind::sic;
    } else if (name == "manual") {
        pen.kind = changepoint::PenaltyKind::manual;
        pen.manual_value = manual_value;
    } else {
        throw ConfigError("penalty must be aic, sic, or manual");
    }
    return pen;
}

stats::TrendMode trend_mode_of(const std::string& name) {
    if (name == "none") return stats::TrendMode::none;
    if (name == "constant") return stats::TrendMode::constant;
    if (name == "constant_trend") return stats::TrendMode::constant_trend;
    throw ConfigError("trend must be none, constant, or constant_trend");
}

const char* p_kind_name(stats::PValueKind k) {
    return k == stats::PValueKind::exact ? "exact" : "tabulated_bracket";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "AS number growth analysis core";

    py::register_exception<Error>(m, "AnalysisError");

    py::class_<Series>(m, "Series")
        .def(py::init<std::vector<double>, std::optional<int>>(),
             py::arg("values"), py::arg("origin_year") = py::none())
        .def_readwrite("values", &Series::values)
        .def_readwrite("origin_year", &Series::origin_year)
        .def("__len__", &Series::size)
        .def("__getitem__",
             [](const Series& s, std::size_t i) {
                 if (i >= s.size()) throw py::index_error();
                 return s[i];
             })
        .def("year_at",
             [](const Series& s, std::size_t i) {
                 if (!s.origin_year)
                     throw DomainError("series has no origin year");
                 if (i >= s.size()) throw py::index_error();
                 return s.year_at(i);
             })
        .def("__repr__", [](const Series& s) {
            std::ostringstream os;
            os << "Series(n=" << s.size();
            if (s.origin_year) os << ", origin_year=" << *s.origin_year;
            os << ")";
            return os.str();
        });
    py::implicitly_convertible<py::list, Series>();

    // ---- ingest ----
    py::class_<RecordSet>(m, "RecordSet")
        .def("__len__",
             [](const RecordSet& rs) { return rs.records.size(); });

    m.def("parse_delegated_file", &parse_delegated_file, py::arg("path"),
          py::arg("strict") = false, py::arg("only_16bit") = true,
          "Parse a delegated statistics file into a record set.");

    py::class_<ingest::AnnualCountSeries>(m, "AnnualCountSeries")
        .def_readonly("label", &ingest::AnnualCountSeries::label)
        .def_readonly("start_year", &ingest::AnnualCountSeries::start_year)
        .def_readonly("counts", &ingest::AnnualCountSeries::counts)
        .def("to_series", &ingest::AnnualCountSeries::to_series);

    m.def(
        "build_annual_series",
        [](const RecordSet& rs, const std::string& country, int end_year) {
            if (end_year == 0) end_year = default_end_year(rs.records);
            return ingest::build_annual_series(
                rs.records, country, ingest::ResourceType::asn, end_year);
        },
        py::arg("records"), py::arg("country") = "*",
        py::arg("end_year") = 0,
        "Cumulative annual AS count series for a country ('*' = whole "
        "registry).");

    // ---- series statistics ----
    m.def("difference", &stats::difference, py::arg("series"),
          py::arg("d") = 1);
    m.def("iaav", &stats::iaav, py::arg("series"),
          "Inter-annual absolute variation: |y[t] - y[t-1]| differences of "
          "the first differences.");
    m.def("cusum", &changepoint::cusum, py::arg("series"));

    py::class_<stats::AcfResult>(m, "AcfResult")
        .def_readonly("max_lag", &stats::AcfResult::max_lag)
        .def_readonly("values", &stats::AcfResult::values)
        .def_readonly("conf_bound", &stats::AcfResult::conf_bound);

    m.def("acf", &stats::acf, py::arg("series"), py::arg("max_lag"));
    m.def("pacf", &stats::pacf, py::arg("series"), py::arg("max_lag"));

    py::class_<stats::StatTestResult>(m, "StatTestResult")
        .def_readonly("statistic", &stats::StatTestResult::statistic)
        .def_readonly("p_value", &stats::StatTestResult::p_value)
        .def_property_readonly("p_value_kind",
                               [](const stats::StatTestResult& r) {
                                   return p_kind_name(r.p_value_kind);
                               })
        .def_readonly("reject_null", &stats::StatTestResult::reject_null);

    m.def(
        "dickey_fuller",
        [](const Series& s, const std::string& trend, int lag_order) {
            return stats::dickey_fuller(s, trend_mode_of(trend), lag_order);
        },
        py::arg("series"), py::arg("trend") = "constant",
        py::arg("lag_order") = 0);
    m.def("jarque_bera", &stats::jarque_bera, py::arg("series"));
    m.def("shapiro_wilk", &stats::shapiro_wilk, py::arg("series"));

    // ---- ARIMA ----
    py::class_<arima::ArimaFit>(m, "ArimaFit")
        .def_property_readonly(
            "model", [](const arima::ArimaFit& f) { return f.spec.label(); })
        .def_property_readonly(
            "order",
            [](const arima::ArimaFit& f) {
                return std::make_tuple(f.spec.p, f.spec.d, f.spec.q);
            })
        .def_property_readonly(
            "drift",
            [](const arima::ArimaFit& f) { return f.params.drift; })
        .def_property_readonly(
            "ar", [](const arima::ArimaFit& f) { return f.params.ar; })
        .def_property_readonly(
            "ma", [](const arima::ArimaFit& f) { return f.params.ma; })
        .def_readonly("sigma2", &arima::ArimaFit::sigma2)
        .def_readonly("loglik", &arima::ArimaFit::loglik)
        .def_readonly("aicc", &arima::ArimaFit::aicc)
        .def_readonly("coeff_names", &arima::ArimaFit::coeff_names)
        .def_readonly("coefficients", &arima::ArimaFit::coefficients)
        .def_readonly("coeff_se", &arima::ArimaFit::coeff_se)
        .def_readonly("fitted", &arima::ArimaFit::fitted)
        .def_readonly("residuals", &arima::ArimaFit::residuals)
        .def_readonly("iterations", &arima::ArimaFit::iterations)
        .def_readonly("max_gradient", &arima::ArimaFit::max_gradient);

    m.def(
        "fit",
        [](const Series& s, const std::tuple<int, int, int>& order,
           bool drift, const std::string& method) {
            arima::FitOptions opts;
            opts.method = method == "css" ? arima::FitMethod::css_only
                                          : arima::FitMethod::css_ml;
            return arima::fit(s, spec_of(order, drift), opts);
        },
        py::arg("series"), py::arg("order"), py::arg("drift") = false,
        py::arg("method") = "css_ml",
        "Fit ARIMA(p,d,q) with optional drift; method 'css_ml' or 'css'.");

    m.def(
        "psi_weights",
        [](const arima::ArimaFit& f, int horizon) {
            return arima::psi_weights(f, horizon);
        },
        py::arg("fit"), py::arg("horizon"));

    py::class_<arima::ForecastResult>(m, "ForecastResult")
        .def_readonly("horizon", &arima::ForecastResult::horizon)
        .def_readonly("level", &arima::ForecastResult::level)
        .def_readonly("points", &arima::ForecastResult::points)
        .def_readonly("se", &arima::ForecastResult::se)
        .def_readonly("lower", &arima::ForecastResult::lower)
        .def_readonly("upper", &arima::ForecastResult::upper);

    m.def("forecast", &arima::forecast, py::arg("fit"), py::arg("horizon"),
          py::arg("level") = 0.95);

    m.def("holdout_rmse", &arima::holdout_rmse, py::arg("observed"),
          py::arg("predicted"));

    // ---- trends ----
    py::class_<trend::TrendEstimate>(m, "TrendEstimate")
        .def_readonly("method", &trend::TrendEstimate::method)
        .def_readonly("annual_growth", &trend::TrendEstimate::annual_growth)
        .def_readonly("se", &trend::TrendEstimate::se)
        .def_readonly("intercept", &trend::TrendEstimate::intercept)
        .def_readonly("fitted", &trend::TrendEstimate::fitted)
        .def_readonly("one_step", &trend::TrendEstimate::one_step);

    m.def("rw_drift_trend", &trend::rw_drift_trend, py::arg("series"));
    m.def("linear_trend", &trend::linear_trend, py::arg("series"));
    m.def("relative_growth_pct", &trend::relative_growth_pct,
          py::arg("country"), py::arg("region"));
    m.def("trend_correlation", &trend::trend_correlation, py::arg("a"),
          py::arg("b"));
    m.def("fisher_z", &trend::fisher_z, py::arg("r"));

    py::class_<trend::CorrelationComparison>(m, "CorrelationComparison")
        .def_readonly("r1", &trend::CorrelationComparison::r1)
        .def_readonly("r2", &trend::CorrelationComparison::r2)
        .def_readonly("n1", &trend::CorrelationComparison::n1)
        .def_readonly("n2", &trend::CorrelationComparison::n2)
        .def_readonly("z1", &trend::CorrelationComparison::z1)
        .def_readonly("z2", &trend::CorrelationComparison::z2)
        .def_readonly("zd", &trend::CorrelationComparison::zd)
        .def_readonly("p_value", &trend::CorrelationComparison::p_value)
        .def_readonly("reject_equal",
                      &trend::CorrelationComparison::reject_equal);

    m.def("compare_correlations", &trend::compare_correlations,
          py::arg("r1"), py::arg("n1"), py::arg("r2"), py::arg("n2"));
    m.def("compare_fisher_z", &trend::compare_fisher_z, py::arg("z1"),
          py::arg("n1"), py::arg("z2"), py::arg("n2"));

    // ---- changepoints ----
    py::class_<changepoint::ChangePointResult>(m, "ChangePointResult")
        .def_property_readonly(
            "method",
            [](const changepoint::ChangePointResult& r) {
                return r.method == changepoint::SearchMethod::binseg
                           ? "binseg"
                           : "segneigh";
            })
        .def_property_readonly(
            "penalty",
            [](const changepoint::ChangePointResult& r) {
                return r.penalty.label();
            })
        .def_readonly("changepoints",
                      &changepoint::ChangePointResult::changepoints)
        .def_readonly("segment_variances",
                      &changepoint::ChangePointResult::segment_variances)
        .def_readonly("total_cost",
                      &changepoint::ChangePointResult::total_cost)
        .def_readonly("costs_by_count",
                      &changepoint::ChangePointResult::costs_by_count);

    m.def(
        "binseg",
        [](const Series& s, const std::string& penalty, std::size_t max_cps,
           std::size_t min_segment, std::optional<double> manual_value) {
            changepoint::CpOptions opts;
            opts.min_segment = min_segment;
            return changepoint::binseg(s, penalty_of(penalty, manual_value),
                                       max_cps, opts);
        },
        py::arg("series"), py::arg("penalty") = "sic",
        py::arg("max_cps") = 5, py::arg("min_segment") = 2,
        py::arg("manual_value") = py::none());

    m.def(
        "segneigh",
        [](const Series& s, const std::string& penalty, std::size_t Q,
           std::size_t min_segment, std::optional<double> manual_value) {
            changepoint::CpOptions opts;
            opts.min_segment = min_segment;
            return changepoint::segneigh(
                s, penalty_of(penalty, manual_value), Q, opts);
        },
        py::arg("series"), py::arg("penalty") = "sic", py::arg("Q") = 5,
        py::arg("min_segment") = 2, py::arg("manual_value") = py::none());

    m.def(
        "consensus_changepoints",
        [](const Series& s, std::size_t max_cps) {
            return changepoint::consensus_changepoints(s, max_cps);
        },
        py::arg("series"), py::arg("max_cps") = 5);

    py::class_<changepoint::GrowthRates>(m, "GrowthRates")
        .def_readonly("before_pct", &changepoint::GrowthRates::before_pct)
        .def_readonly("after_pct", &changepoint::GrowthRates::after_pct)
        .def_readonly("before_slope",
                      &changepoint::GrowthRates::before_slope)
        .def_readonly("after_slope", &changepoint::GrowthRates::after_slope);

    m.def("iaav_growth_rates", &changepoint::iaav_growth_rates,
          py::arg("series"), py::arg("cp"));
}
