#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asgrowth/arima.hpp"
#include "asgrowth/changepoint.hpp"
#include "asgrowth/errors.hpp"
#include "asgrowth/ingest.hpp"
#include "asgrowth/reachability.hpp"
#include "asgrowth/report.hpp"
#include "asgrowth/series.hpp"
#include "asgrowth/series_stats.hpp"
#include "asgrowth/trend.hpp"

namespace {

using asgrowth::Series;
using ordered_json = nlohmann::ordered_json;

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const char* bool_cell(bool b) { return b ? "true" : "false"; }

ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

// Reads a whole stream or file; "-" means standard input.
std::string slurp(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in)
            throw asgrowth::ConfigError("cannot open input file: " + path);
        os << in.rdbuf();
    }
    return os.str();
}

std::vector<asgrowth::ingest::DelegatedRecord> load_delegated(
    const std::string& path, bool strict, bool only_16bit) {
    const std::string text = slurp(path);
    auto parsed = asgrowth::ingest::parse_delegated(text, {strict});
    if (parsed.records.empty())
        throw asgrowth::NoRecords("delegated input holds no records");
    return only_16bit ? asgrowth::ingest::filter_16bit(parsed.records)
                      : std::move(parsed.records);
}

// A series file holds one observation per line, either "value" or
// "year,value"; blank lines and '#' comments are skipped.
Series read_series(const std::string& path) {
    const std::string text = slurp(path);
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    std::optional<int> origin;
    int expected_year = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = line;
        while (!t.empty() &&
               std::isspace(static_cast<unsigned char>(t.back())))
            t.pop_back();
        std::size_t b = 0;
        while (b < t.size() && std::isspace(static_cast<unsigned char>(t[b])))
            ++b;
        t = t.substr(b);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t comma = t.find(',');
        try {
            if (comma == std::string::npos) {
                if (origin && !values.empty())
                    throw std::invalid_argument("missing year");
                std::size_t pos = 0;
                values.push_back(std::stod(t, &pos));
                if (pos != t.size()) throw std::invalid_argument("");
            } else {
                std::size_t pos = 0;
                const std::string ys = t.substr(0, comma);
                const std::string vs = t.substr(comma + 1);
                const int year = std::stoi(ys, &pos);
                if (pos != ys.size()) throw std::invalid_argument("");
                pos = 0;
                const double v = std::stod(vs, &pos);
                if (pos != vs.size()) throw std::invalid_argument("");
                if (values.empty()) {
                    origin = year;
                } else if (!origin || year != expected_year) {
                    throw std::invalid_argument("years are not consecutive");
                }
                expected_year = year + 1;
                values.push_back(v);
            }
        } catch (const std::exception& e) {
            throw asgrowth::MalformedRecord(
                lineno, std::string("bad series line '") + t + "'" +
                            (e.what()[0] ? std::string(": ") + e.what()
                                         : std::string()));
        }
    }
    if (values.empty())
        throw asgrowth::NoRecords("series input holds no values");
    return Series(std::move(values), origin);
}

struct SeriesSource {
    std::string series_path;  // plain series file
    std::string input_path;   // delegated file
    std::string country = "*";
    bool strict = false;
    bool only_16bit = true;
    int end_year = 0;

    void add_options(CLI::App* cmd, bool series_only = false) {
        cmd->add_option("--series", series_path,
                        "series file: 'value' or 'year,value' per line, - "
                        "for stdin");
        if (!series_only) {
            cmd->add_option("--input", input_path,
                            "delegated statistics file, - for stdin");
            cmd->add_option("--country", country,
                            "country code, or * for the whole registry");
            cmd->add_flag("--strict", strict,
                          "fail on the first malformed record");
            cmd->add_flag("!--no-16bit-filter", only_16bit,
                          "keep 32-bit ASN records");
            cmd->add_option("--end-year", end_year,
                            "last year of the annual series (default: last "
                            "allocation year)");
        }
    }

    Series load() const {
        if (!series_path.empty()) return read_series(series_path);
        if (input_path.empty())
            throw asgrowth::ConfigError(
                "provide --series or --input with --country");
        const auto records = load_delegated(input_path, strict, only_16bit);
        int last = end_year;
        if (last == 0) {
            for (const auto& r : records)
                if (r.resource_type == asgrowth::ingest::ResourceType::asn &&
                    r.date && r.counts_as_assigned())
                    last = std::max(last, int(r.date->year()));
            if (last == 0)
                throw asgrowth::NoRecords(
                    "no dated ASN allocations in the input");
        }
        return asgrowth::ingest::build_annual_series(
                   records, country, asgrowth::ingest::ResourceType::asn,
                   last)
            .to_series();
    }
};

void emit(const std::string& text) { std::cout << text; }

// ---- subcommand handlers -------------------------------------------------

void run_ingest(const SeriesSource& src, const std::string& countries_arg,
                const std::string& format) {
    const auto records =
        load_delegated(src.input_path, src.strict, src.only_16bit);
    int last = src.end_year;
    if (last == 0) {
        for (const auto& r : records)
            if (r.resource_type == asgrowth::ingest::ResourceType::asn &&
                r.date && r.counts_as_assigned())
                last = std::max(last, int(r.date->year()));
        if (last == 0)
            throw asgrowth::NoRecords("no dated ASN allocations in the input");
    }
    std::vector<std::string> countries;
    std::stringstream ss(countries_arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) countries.push_back(item);

    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const std::string& c : countries) {
            const auto acs = asgrowth::ingest::build_annual_series(
                records, c, asgrowth::ingest::ResourceType::asn, last);
            ordered_json j{{"label", acs.label},
                           {"start_year", acs.start_year},
                           {"counts", acs.counts}};
            arr.push_back(std::move(j));
        }
        emit(arr.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "country,year,count\n";
    for (const std::string& c : countries) {
        const auto acs = asgrowth::ingest::build_annual_series(
            records, c, asgrowth::ingest::ResourceType::asn, last);
        for (std::size_t i = 0; i < acs.counts.size(); ++i)
            os << csv_field(acs.label) << "," << acs.start_year + int(i)
               << "," << acs.counts[i] << "\n";
    }
    emit(os.str());
}

void run_characterize(const SeriesSource& src, int max_lag,
                      const std::string& format) {
    namespace stats = asgrowth::stats;
    const Series s = src.load();
    const int ml = std::min<int>(max_lag, int(s.size()) - 2);
    if (ml < 1)
        throw asgrowth::DegenerateInput(
            "series too short for autocorrelation");
    const stats::AcfResult a = stats::acf(s, ml);
    const stats::AcfResult p = stats::pacf(s, ml);

    struct TestRow {
        const char* name;
        std::optional<stats::StatTestResult> result;
        std::string error;
    };
    std::vector<TestRow> tests;
    const auto run_test = [&](const char* name, auto&& fn) {
        TestRow row{name, std::nullopt, ""};
        try {
            row.result = fn();
        } catch (const asgrowth::Error& e) {
            row.error = e.what();
        }
        tests.push_back(std::move(row));
    };
    run_test("df_level", [&] {
        return stats::dickey_fuller(s, stats::TrendMode::constant_trend);
    });
    run_test("df_differenced", [&] {
        return stats::dickey_fuller(stats::difference(s, 1),
                                    stats::TrendMode::constant);
    });
    run_test("jarque_bera", [&] { return stats::jarque_bera(s); });
    run_test("shapiro_wilk", [&] { return stats::shapiro_wilk(s); });

    if (format == "json") {
        ordered_json j;
        j["n"] = s.size();
        if (s.origin_year) j["origin_year"] = *s.origin_year;
        j["acf"] = a.values;
        ordered_json pj = ordered_json::array();
        for (std::size_t i = 1; i < p.values.size(); ++i)
            pj.push_back(p.values[i]);
        j["pacf"] = std::move(pj);
        j["conf_bound"] = a.conf_bound;
        ordered_json tj;
        for (const TestRow& t : tests) {
            if (t.result) {
                tj[t.name] = {
                    {"statistic", json_number(t.result->statistic)},
                    {"p_value", json_number(t.result->p_value)},
                    {"p_value_kind",
                     t.result->p_value_kind == stats::PValueKind::exact
                         ? "exact"
                         : "tabulated_bracket"},
                    {"reject_null", t.result->reject_null}};
            } else {
                tj[t.name] = {{"error", t.error}};
            }
        }
        j["tests"] = std::move(tj);
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "## acf\n";
    os << "lag,acf,pacf,conf_bound\n";
    for (std::size_t lag = 0; lag < a.values.size(); ++lag) {
        os << lag << "," << fmt15(a.values[lag]) << ",";
        if (lag >= 1) os << fmt15(p.values[lag]);
        os << "," << fmt15(a.conf_bound) << "\n";
    }
    os << "\n## tests\n";
    os << "test,statistic,p_value,p_value_kind,reject_null,error\n";
    for (const TestRow& t : tests) {
        os << t.name << ",";
        if (t.result)
            os << fmt15(t.result->statistic) << ","
               << fmt15(t.result->p_value) << ","
               << (t.result->p_value_kind == stats::PValueKind::exact
                       ? "exact"
                       : "tabulated_bracket")
               << "," << bool_cell(t.result->reject_null) << ",";
        else
            os << ",,,," << csv_field(t.error);
        os << "\n";
    }
    emit(os.str());
}

void run_fit(const SeriesSource& src, const std::string& spec_text,
             const std::string& method, const std::string& format) {
    namespace arima = asgrowth::arima;
    const Series s = src.load();
    const arima::ArimaSpec spec = arima::parse_spec(spec_text);
    arima::FitOptions opts;
    opts.method = method == "css" ? arima::FitMethod::css_only
                                  : arima::FitMethod::css_ml;
    const arima::ArimaFit fit = arima::fit(s, spec, opts);
    const auto rows = arima::coefficient_significance(fit);

    if (format == "json") {
        ordered_json j;
        j["model"] = spec.label();
        j["method"] = method;
        ordered_json coefs = ordered_json::array();
        for (const auto& r : rows)
            coefs.push_back({{"term", r.name},
                             {"estimate", json_number(r.coefficient)},
                             {"se", json_number(r.se)},
                             {"z", json_number(r.z)},
                             {"significant", r.significant}});
        j["coefficients"] = std::move(coefs);
        j["sigma2"] = json_number(fit.sigma2);
        j["loglik"] = json_number(fit.loglik);
        j["aicc"] = json_number(fit.aicc);
        j["iterations"] = fit.iterations;
        j["max_gradient"] = json_number(fit.max_gradient);
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "## coefficients\n";
    os << "term,estimate,se,z,significant\n";
    for (const auto& r : rows)
        os << r.name << "," << fmt6(r.coefficient) << "," << fmt6(r.se)
           << "," << fmt6(r.z) << "," << bool_cell(r.significant) << "\n";
    os << "\n## summary\n";
    os << "model,method,sigma2,loglik,aicc,iterations\n";
    os << csv_field(spec.label()) << "," << method << "," << fmt6(fit.sigma2)
       << "," << fmt6(fit.loglik) << "," << fmt6(fit.aicc) << ","
       << fit.iterations << "\n";
    emit(os.str());
}

void run_forecast(const SeriesSource& src, const std::string& spec_text,
                  int horizon, double level, const std::string& format) {
    namespace arima = asgrowth::arima;
    const Series s = src.load();
    const arima::ArimaSpec spec = arima::parse_spec(spec_text);
    const arima::ArimaFit fit = arima::fit(s, spec);
    const arima::ForecastResult fc = arima::forecast(fit, horizon, level);

    const std::optional<int> first_year =
        s.origin_year ? std::optional<int>(*s.origin_year + int(s.size()))
                      : std::nullopt;
    if (format == "json") {
        ordered_json j;
        j["model"] = spec.label();
        j["level"] = level;
        ordered_json rows = ordered_json::array();
        for (int h = 1; h <= horizon; ++h) {
            ordered_json row;
            row["h"] = h;
            if (first_year) row["year"] = *first_year + h - 1;
            row["point"] = json_number(fc.points[std::size_t(h) - 1]);
            row["se"] = json_number(fc.se[std::size_t(h) - 1]);
            row["lower"] = json_number(fc.lower[std::size_t(h) - 1]);
            row["upper"] = json_number(fc.upper[std::size_t(h) - 1]);
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "h,year,point,se,lower,upper\n";
    for (int h = 1; h <= horizon; ++h) {
        os << h << ",";
        if (first_year) os << *first_year + h - 1;
        os << "," << fmt6(fc.points[std::size_t(h) - 1]) << ","
           << fmt6(fc.se[std::size_t(h) - 1]) << ","
           << fmt6(fc.lower[std::size_t(h) - 1]) << ","
           << fmt6(fc.upper[std::size_t(h) - 1]) << "\n";
    }
    emit(os.str());
}

void run_trend(const SeriesSource& src, const std::string& countries_arg,
               const std::string& format) {
    namespace trend = asgrowth::trend;

    struct Row {
        std::string label;
        std::string method;
        double growth, se;
        std::optional<double> relative;
    };
    std::vector<Row> rows;

    if (!src.series_path.empty()) {
        const Series s = read_series(src.series_path);
        const auto d = trend::rw_drift_trend(s);
        const auto l = trend::linear_trend(s);
        rows.push_back({"series", d.method, d.annual_growth, d.se, {}});
        rows.push_back({"series", l.method, l.annual_growth, l.se, {}});
    } else {
        const auto records =
            load_delegated(src.input_path, src.strict, src.only_16bit);
        int last = src.end_year;
        if (last == 0) {
            for (const auto& r : records)
                if (r.resource_type == asgrowth::ingest::ResourceType::asn &&
                    r.date && r.counts_as_assigned())
                    last = std::max(last, int(r.date->year()));
            if (last == 0)
                throw asgrowth::NoRecords(
                    "no dated ASN allocations in the input");
        }
        const auto series_of = [&](const std::string& c) {
            return asgrowth::ingest::build_annual_series(
                       records, c, asgrowth::ingest::ResourceType::asn, last)
                .to_series();
        };
        const Series region = series_of("*");
        const auto region_drift = trend::rw_drift_trend(region);
        const auto region_linear = trend::linear_trend(region);
        const std::string region_label = [&] {
            std::string r = records.front().registry;
            for (char& ch : r)
                ch = char(std::toupper(static_cast<unsigned char>(ch)));
            return r;
        }();
        rows.push_back({region_label, region_drift.method,
                        region_drift.annual_growth, region_drift.se, 100.0});
        rows.push_back({region_label, region_linear.method,
                        region_linear.annual_growth, region_linear.se,
                        100.0});
        std::stringstream ss(countries_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const Series s = series_of(item);
            const auto d = trend::rw_drift_trend(s);
            const auto l = trend::linear_trend(s);
            rows.push_back({item, d.method, d.annual_growth, d.se,
                            trend::relative_growth_pct(d, region_drift)});
            rows.push_back({item, l.method, l.annual_growth, l.se,
                            trend::relative_growth_pct(l, region_linear)});
        }
    }

    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const Row& r : rows) {
            ordered_json j{{"label", r.label},
                           {"method", r.method},
                           {"annual_growth", json_number(r.growth)},
                           {"se", json_number(r.se)}};
            if (r.relative) j["relative_pct"] = json_number(*r.relative);
            arr.push_back(std::move(j));
        }
        emit(arr.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "label,method,annual_growth,se,relative_pct\n";
    for (const Row& r : rows) {
        os << csv_field(r.label) << "," << r.method << "," << fmt15(r.growth)
           << "," << fmt15(r.se) << ",";
        if (r.relative) os << fmt15(*r.relative);
        os << "\n";
    }
    emit(os.str());
}

void run_compare(double r1, double r2, double z1, double z2, bool use_z,
                 int n1, int n2, const std::string& format) {
    namespace trend = asgrowth::trend;
    const trend::CorrelationComparison c =
        use_z ? trend::compare_fisher_z(z1, std::size_t(n1), z2,
                                        std::size_t(n2))
              : trend::compare_correlations(r1, std::size_t(n1), r2,
                                            std::size_t(n2));
    if (format == "json") {
        ordered_json j{{"r1", json_number(c.r1)},
                       {"r2", json_number(c.r2)},
                       {"n1", c.n1},
                       {"n2", c.n2},
                       {"z1", json_number(c.z1)},
                       {"z2", json_number(c.z2)},
                       {"zd", json_number(c.zd)},
                       {"p_value", json_number(c.p_value)},
                       {"reject_equal", c.reject_equal}};
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "r1,r2,n1,n2,z1,z2,zd,p_value,reject_equal\n";
    os << fmt15(c.r1) << "," << fmt15(c.r2) << "," << c.n1 << "," << c.n2
       << "," << fmt15(c.z1) << "," << fmt15(c.z2) << "," << fmt15(c.zd)
       << "," << fmt15(c.p_value) << "," << bool_cell(c.reject_equal) << "\n";
    emit(os.str());
}

void run_changepoint(const SeriesSource& src, bool raw_series,
                     const std::string& method, const std::string& penalty,
                     int max_cps, int min_seg, const std::string& format) {
    namespace cpd = asgrowth::changepoint;
    Series s = src.load();
    // delegated input analyses the IAAV of the annual series, matching the
    // paper's workflow; --raw skips that for pre-built series
    if (!raw_series) s = asgrowth::stats::iaav(s);

    cpd::PenaltySpec pen;
    if (penalty == "aic") {
        pen.kind = cpd::PenaltyKind::aic;
    } else if (penalty == "sic") {
        pen.kind = cpd::PenaltyKind::sic;
    } else if (penalty.rfind("manual=", 0) == 0) {
        pen.kind = cpd::PenaltyKind::manual;
        std::size_t pos = 0;
        const std::string v = penalty.substr(7);
        pen.manual_value = std::stod(v, &pos);
        if (pos != v.size())
            throw asgrowth::ConfigError("bad manual penalty: " + penalty);
    } else {
        throw asgrowth::ConfigError(
            "penalty must be aic, sic, or manual=<value>");
    }
    cpd::CpOptions opts;
    opts.min_segment = std::size_t(min_seg);

    const auto year_at = [&](std::size_t tau) -> std::optional<int> {
        if (!s.origin_year) return std::nullopt;
        return *s.origin_year + int(tau) - 1;
    };

    std::vector<cpd::ChangePointResult> results;
    std::vector<std::size_t> consensus;
    if (method == "binseg" || method == "consensus")
        results.push_back(cpd::binseg(s, pen, std::size_t(max_cps), opts));
    if (method == "segneigh" || method == "consensus")
        results.push_back(cpd::segneigh(s, pen, std::size_t(max_cps), opts));
    if (method == "consensus")
        consensus = cpd::consensus_match(results[1].changepoints,
                                         results[0].changepoints, 1);

    const auto method_name = [](cpd::SearchMethod m) {
        return m == cpd::SearchMethod::binseg ? "binseg" : "segneigh";
    };

    if (format == "json") {
        ordered_json j;
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ordered_json jr;
            jr["method"] = method_name(r.method);
            jr["penalty"] = r.penalty.label();
            jr["changepoints"] = r.changepoints;
            ordered_json years = ordered_json::array();
            for (std::size_t t : r.changepoints) {
                const auto y = year_at(t);
                if (y)
                    years.push_back(*y);
                else
                    years.push_back(nullptr);
            }
            jr["years"] = std::move(years);
            ordered_json vars = ordered_json::array();
            for (double v : r.segment_variances)
                vars.push_back(json_number(v));
            jr["segment_variances"] = std::move(vars);
            jr["total_cost"] = json_number(r.total_cost);
            arr.push_back(std::move(jr));
        }
        j["results"] = std::move(arr);
        if (method == "consensus") {
            j["consensus"] = consensus;
            ordered_json years = ordered_json::array();
            for (std::size_t t : consensus) {
                const auto y = year_at(t);
                if (y)
                    years.push_back(*y);
                else
                    years.push_back(nullptr);
            }
            j["consensus_years"] = std::move(years);
        }
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "## changepoints\n";
    os << "method,index,year\n";
    for (const auto& r : results)
        for (std::size_t t : r.changepoints) {
            os << method_name(r.method) << "," << t << ",";
            const auto y = year_at(t);
            if (y) os << *y;
            os << "\n";
        }
    if (method == "consensus")
        for (std::size_t t : consensus) {
            os << "consensus," << t << ",";
            const auto y = year_at(t);
            if (y) os << *y;
            os << "\n";
        }
    os << "\n## segment_variances\n";
    os << "method,segment,variance\n";
    for (const auto& r : results)
        for (std::size_t i = 0; i < r.segment_variances.size(); ++i)
            os << method_name(r.method) << "," << i << ","
               << fmt15(r.segment_variances[i]) << "\n";
    os << "\n## summary\n";
    os << "method,penalty,total_cost\n";
    for (const auto& r : results)
        os << method_name(r.method) << "," << r.penalty.label() << ","
           << fmt15(r.total_cost) << "\n";
    emit(os.str());
}

void run_reachability(const std::string& input, const std::string& snapshots,
                      const std::string& countries_arg, double threshold,
                      bool strict, bool only_16bit,
                      const std::string& format) {
    asgrowth::report::AnalysisConfig cfg;
    cfg.delegated_path = input;
    cfg.snapshot_dir = snapshots;
    cfg.drop_threshold_pct = threshold;
    cfg.strict_parse = strict;
    cfg.only_16bit = only_16bit;
    cfg.countries.clear();
    std::stringstream ss(countries_arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) cfg.countries.push_back(item);
    if (cfg.countries.empty())
        throw asgrowth::ConfigError("no countries requested");

    const auto records = load_delegated(input, strict, only_16bit);
    std::string region_label = records.front().registry;
    for (char& c : region_label)
        c = char(std::toupper(static_cast<unsigned char>(c)));

    const asgrowth::report::ReachabilityReport rr =
        asgrowth::report::reachability_report(cfg, records, region_label);

    if (format == "json") {
        ordered_json j;
        j["as_of"] = rr.as_of;
        ordered_json rows = ordered_json::array();
        for (const auto& row : rr.rows) {
            ordered_json jr{{"label", row.label},
                            {"assigned", row.assigned},
                            {"advertised", row.advertised},
                            {"ratio", json_number(row.ratio)}};
            if (row.period_increase_pct)
                jr["period_increase_pct"] =
                    json_number(*row.period_increase_pct);
            rows.push_back(std::move(jr));
        }
        j["rows"] = std::move(rows);
        ordered_json drops = ordered_json::array();
        for (const auto& d : rr.drops)
            drops.push_back({{"label", d.label},
                             {"date", d.date},
                             {"drop_pct", json_number(d.drop_pct)}});
        j["drops"] = std::move(drops);
        emit(j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "as_of,label,assigned,advertised,ratio,period_increase_pct\n";
    for (const auto& row : rr.rows) {
        os << rr.as_of << "," << csv_field(row.label) << "," << row.assigned
           << "," << row.advertised << "," << fmt15(row.ratio) << ",";
        if (row.period_increase_pct) os << fmt15(*row.period_increase_pct);
        os << "\n";
    }
    os << "\n## drops\n";
    os << "label,date,drop_pct\n";
    for (const auto& d : rr.drops)
        os << csv_field(d.label) << "," << d.date << ","
           << fmt15(d.drop_pct) << "\n";
    emit(os.str());
}

void run_report(const std::string& config_path, const std::string& input,
                const std::string& snapshots, const std::string& format,
                bool format_given) {
    asgrowth::report::AnalysisConfig cfg;
    if (!config_path.empty())
        cfg = asgrowth::report::parse_config_file(config_path);
    if (!input.empty()) cfg.delegated_path = input;
    if (!snapshots.empty()) cfg.snapshot_dir = snapshots;
    if (format_given)
        cfg.format = format == "json"
                         ? asgrowth::report::OutputFormat::json
                         : asgrowth::report::OutputFormat::csv;
    const auto bundle = asgrowth::report::run_pipeline(cfg);
    if (cfg.format == asgrowth::report::OutputFormat::json)
        emit(asgrowth::report::to_json(bundle));
    else
        emit(asgrowth::report::to_csv(bundle));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Internet AS number growth analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --format after the subcommand name
    std::string format = "csv";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ingest
    auto* ingest_cmd =
        app.add_subcommand("ingest", "build annual AS count series from a "
                                     "delegated statistics file");
    SeriesSource ingest_src;
    std::string ingest_countries = "*";
    ingest_cmd->add_option("--input", ingest_src.input_path,
                           "delegated statistics file, - for stdin")
        ->required();
    ingest_cmd->add_option("--country", ingest_countries,
                           "comma-separated country codes, * for the whole "
                           "registry");
    ingest_cmd->add_flag("--strict", ingest_src.strict,
                         "fail on the first malformed record");
    ingest_cmd->add_flag("!--no-16bit-filter", ingest_src.only_16bit,
                         "keep 32-bit ASN records");
    ingest_cmd->add_option("--end-year", ingest_src.end_year,
                           "last year of the annual series");

    // characterize
    auto* char_cmd = app.add_subcommand(
        "characterize", "ACF, PACF, and stationarity/normality tests");
    SeriesSource char_src;
    char_src.add_options(char_cmd);
    int char_max_lag = 12;
    char_cmd->add_option("--max-lag", char_max_lag, "highest lag to report");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit an ARIMA model");
    SeriesSource fit_src;
    fit_src.add_options(fit_cmd);
    std::string fit_spec;
    std::string fit_method = "css_ml";
    fit_cmd->add_option("--spec", fit_spec, "model as p,d,q or p,d,q,drift")
        ->required();
    fit_cmd->add_option("--method", fit_method, "estimation method")
        ->check(CLI::IsMember({"css_ml", "css"}));

    // forecast
    auto* fc_cmd =
        app.add_subcommand("forecast", "forecast from a fitted ARIMA model");
    SeriesSource fc_src;
    fc_src.add_options(fc_cmd);
    std::string fc_spec;
    int fc_horizon = 5;
    double fc_level = 0.95;
    fc_cmd->add_option("--spec", fc_spec, "model as p,d,q or p,d,q,drift")
        ->required();
    fc_cmd->add_option("--horizon", fc_horizon, "steps ahead");
    fc_cmd->add_option("--level", fc_level, "prediction interval level");

    // trend
    auto* trend_cmd = app.add_subcommand(
        "trend", "drift and linear trends with relative growth");
    SeriesSource trend_src;
    trend_src.add_options(trend_cmd);
    std::string trend_countries = "IN,CN,JP,KR,TW";
    trend_cmd->add_option("--countries", trend_countries,
                          "comma-separated country codes");

    // compare
    auto* cmp_cmd = app.add_subcommand(
        "compare", "Fisher test of two correlation coefficients");
    double cmp_r1 = 0.0, cmp_r2 = 0.0, cmp_z1 = 0.0, cmp_z2 = 0.0;
    int cmp_n1 = 0, cmp_n2 = 0;
    auto* r1_opt = cmp_cmd->add_option("--r1", cmp_r1, "first correlation");
    auto* r2_opt = cmp_cmd->add_option("--r2", cmp_r2, "second correlation");
    auto* z1_opt = cmp_cmd->add_option(
        "--z1", cmp_z1, "first Fisher-transformed value (alternative to r1)");
    auto* z2_opt = cmp_cmd->add_option("--z2", cmp_z2,
                                       "second Fisher-transformed value");
    cmp_cmd->add_option("--n1", cmp_n1, "first sample size")->required();
    cmp_cmd->add_option("--n2", cmp_n2, "second sample size")->required();

    // changepoint
    auto* cp_cmd = app.add_subcommand(
        "changepoint", "variance changepoints of the IAAV series");
    SeriesSource cp_src;
    cp_src.add_options(cp_cmd);
    bool cp_raw = false;
    std::string cp_method = "consensus";
    std::string cp_penalty = "sic";
    int cp_max = 5;
    int cp_min_seg = 2;
    cp_cmd->add_flag("--raw", cp_raw,
                     "treat the input series as-is instead of taking IAAV");
    cp_cmd->add_option("--method", cp_method, "search method")
        ->check(CLI::IsMember({"binseg", "segneigh", "consensus"}));
    cp_cmd->add_option("--penalty", cp_penalty,
                       "aic, sic, or manual=<value>");
    cp_cmd->add_option("--max-cps,--Q", cp_max,
                       "most changepoints to consider");
    cp_cmd->add_option("--min-seg", cp_min_seg, "minimum segment length");

    // reachability
    auto* reach_cmd = app.add_subcommand(
        "reachability", "assigned vs advertised AS numbers");
    std::string reach_input, reach_snapshots;
    std::string reach_countries = "IN,CN,JP,KR,TW";
    double reach_threshold = 30.0;
    bool reach_strict = false;
    bool reach_only16 = true;
    reach_cmd->add_option("--input", reach_input, "delegated statistics file")
        ->required();
    reach_cmd
        ->add_option("--snapshots", reach_snapshots,
                     "directory of yyyymmdd-named snapshot files")
        ->required();
    reach_cmd->add_option("--countries", reach_countries,
                          "comma-separated country codes");
    reach_cmd->add_option("--threshold", reach_threshold,
                          "drop-event threshold in percent");
    reach_cmd->add_flag("--strict", reach_strict,
                        "fail on the first malformed record");
    reach_cmd->add_flag("!--no-16bit-filter", reach_only16,
                        "keep 32-bit ASN records");

    // report
    auto* report_cmd =
        app.add_subcommand("report", "full analysis pipeline");
    std::string report_config, report_input, report_snapshots;
    report_cmd->add_option("--config", report_config,
                           "flat key=value configuration file");
    report_cmd->add_option("--input", report_input,
                           "delegated statistics file (overrides config)");
    report_cmd->add_option("--snapshots", report_snapshots,
                           "snapshot directory (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest_cmd) {
            run_ingest(ingest_src, ingest_countries, format);
        } else if (*char_cmd) {
            run_characterize(char_src, char_max_lag, format);
        } else if (*fit_cmd) {
            run_fit(fit_src, fit_spec, fit_method, format);
        } else if (*fc_cmd) {
            run_forecast(fc_src, fc_spec, fc_horizon, fc_level, format);
        } else if (*trend_cmd) {
            run_trend(trend_src, trend_countries, format);
        } else if (*cmp_cmd) {
            const bool use_z = z1_opt->count() > 0 || z2_opt->count() > 0;
            if (use_z && (z1_opt->count() == 0 || z2_opt->count() == 0))
                throw asgrowth::ConfigError("--z1 and --z2 go together");
            if (!use_z && (r1_opt->count() == 0 || r2_opt->count() == 0))
                throw asgrowth::ConfigError(
                    "provide --r1/--r2 or --z1/--z2");
            run_compare(cmp_r1, cmp_r2, cmp_z1, cmp_z2, use_z, cmp_n1,
                        cmp_n2, format);
        } else if (*cp_cmd) {
            run_changepoint(cp_src, cp_raw, cp_method, cp_penalty, cp_max,
                            cp_min_seg, format);
        } else if (*reach_cmd) {
            run_reachability(reach_input, reach_snapshots, reach_countries,
                             reach_threshold, reach_strict, reach_only16,
                             format);
        } else if (*report_cmd) {
            run_report(report_config, report_input, report_snapshots, format,
                       app.count("--format") > 0);
        }
    } catch (const asgrowth::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const asgrowth::MalformedRecord& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const asgrowth::NoRecords& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const asgrowth::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
