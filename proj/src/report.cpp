#include "asgrowth/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asgrowth/errors.hpp"
#include "asgrowth/ingest.hpp"
#include "json.hpp"

namespace asgrowth::report {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string upper(std::string s) {
    for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs an integer, got '" +
                          value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs a number, got '" +
                          value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "' needs true/false, got '" +
                      value + "'");
}

int year_of(std::chrono::year_month_day d) { return int(d.year()); }

std::size_t overlap_years(const Series& a, const Series& b) {
    if (a.origin_year && b.origin_year) {
        const int lo = std::max(*a.origin_year, *b.origin_year);
        const int hi = std::min(*a.origin_year + int(a.size()),
                                *b.origin_year + int(b.size()));
        return hi > lo ? std::size_t(hi - lo) : 0;
    }
    return std::min(a.size(), b.size());
}

}  // namespace

std::vector<arima::ArimaSpec> default_candidates() {
    return {{1, 1, 1, false}, {1, 1, 2, false}, {2, 1, 3, false}};
}

changepoint::PenaltySpec AnalysisConfig::penalty() const {
    changepoint::PenaltySpec p;
    p.kind = penalty_kind;
    if (penalty_kind == changepoint::PenaltyKind::manual)
        p.manual_value = manual_penalty;
    return p;
}

void AnalysisConfig::validate() const {
    if (delegated_path.empty())
        throw ConfigError("delegated input path is required");
    if (countries.empty()) throw ConfigError("country list is empty");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ConfigError("confidence must lie in (0,1)");
    if (candidates.empty()) throw ConfigError("candidate model list is empty");
    if (max_cps < 1) throw ConfigError("max_cps must be >= 1");
    if (difference_order < 1)
        throw ConfigError("difference_order must be >= 1");
    if (max_lag < 1) throw ConfigError("max_lag must be >= 1");
    if (!(drop_threshold_pct > 0.0))
        throw ConfigError("drop_threshold must be positive");
    if (penalty_kind == changepoint::PenaltyKind::manual &&
        manual_penalty < 0.0)
        throw ConfigError("manual penalty must be >= 0");
}

void apply_config_entry(AnalysisConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "delegated") {
        config.delegated_path = value;
    } else if (key == "snapshots") {
        config.snapshot_dir = value;
    } else if (key == "countries") {
        config.countries.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) config.countries.push_back(upper(item));
        }
        if (config.countries.empty())
            throw ConfigError("config key 'countries' lists no codes");
    } else if (key == "train_len") {
        config.train_len = parse_int(key, value);
    } else if (key == "horizon") {
        config.horizon = parse_int(key, value);
    } else if (key == "confidence") {
        config.confidence = parse_double(key, value);
    } else if (key == "candidates") {
        config.candidates.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ';')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                config.candidates.push_back(arima::parse_spec(item));
            } catch (const DomainError& e) {
                throw ConfigError(std::string("bad candidate spec: ") +
                                  e.what());
            }
        }
        if (config.candidates.empty())
            throw ConfigError("config key 'candidates' lists no models");
    } else if (key == "penalty") {
        if (value == "aic") {
            config.penalty_kind = changepoint::PenaltyKind::aic;
        } else if (value == "sic") {
            config.penalty_kind = changepoint::PenaltyKind::sic;
        } else if (value.rfind("manual=", 0) == 0) {
            config.penalty_kind = changepoint::PenaltyKind::manual;
            config.manual_penalty = parse_double(key, value.substr(7));
        } else {
            throw ConfigError("penalty must be aic, sic, or manual=<value>");
        }
    } else if (key == "max_cps") {
        config.max_cps = parse_int(key, value);
    } else if (key == "difference_order") {
        config.difference_order = parse_int(key, value);
    } else if (key == "only_16bit") {
        config.only_16bit = parse_bool(key, value);
    } else if (key == "strict") {
        config.strict_parse = parse_bool(key, value);
    } else if (key == "max_lag") {
        config.max_lag = parse_int(key, value);
    } else if (key == "drop_threshold") {
        config.drop_threshold_pct = parse_double(key, value);
    } else if (key == "end_year") {
        config.end_year = parse_int(key, value);
    } else if (key == "format") {
        if (value == "csv") {
            config.format = OutputFormat::csv;
        } else if (value == "json") {
            config.format = OutputFormat::json;
        } else {
            throw ConfigError("format must be csv or json");
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

AnalysisConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    AnalysisConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not key=value: '" + t + "'");
        apply_config_entry(config, trim(t.substr(0, eq)),
                           trim(t.substr(eq + 1)));
    }
    return config;
}

namespace {

struct CountryWork {
    CountryReport report;
    bool has_series = false;
    bool has_trend = false;
    trend::TrendEstimate drift;
    trend::TrendEstimate linear;
};

void run_characterization(const AnalysisConfig& cfg, const Series& s,
                          CharacterizationReport& ch,
                          std::vector<std::string>& notes,
                          const std::string& country) {
    try {
        const int max_lag =
            std::min<int>(cfg.max_lag, int(s.size()) - 2);
        if (max_lag < 1)
            throw DegenerateInput("series too short for autocorrelation");
        const stats::AcfResult a = stats::acf(s, max_lag);
        const stats::AcfResult p = stats::pacf(s, max_lag);
        ch.acf = a.values;
        ch.pacf.assign(p.values.begin() + 1, p.values.end());
        ch.acf_conf_bound = a.conf_bound;
        // levels are tested against a trend-stationary alternative, the
        // differenced series against a level-stationary one
        ch.df_level =
            stats::dickey_fuller(s, stats::TrendMode::constant_trend);
        ch.df_differenced = stats::dickey_fuller(
            stats::difference(s, 1), stats::TrendMode::constant);
    } catch (const Error& e) {
        ch.error = e.what();
        notes.push_back(country + ": characterization: " + e.what());
    }
}

struct CandidateFitState {
    std::optional<arima::ArimaFit> fit;
    std::optional<arima::ForecastResult> fc;
};

void run_candidates(const AnalysisConfig& cfg, const Series& s,
                    CountryReport& cr, std::vector<std::string>& notes) {
    const std::size_t n = s.size();
    const int train_len =
        cfg.train_len > 0 ? cfg.train_len : int(n) - cfg.horizon;
    if (train_len < 3 || std::size_t(train_len + cfg.horizon) > n) {
        cr.forecast.error = "series too short for the holdout split";
        notes.push_back(cr.country + ": " + cr.forecast.error);
        return;
    }
    Series train(std::vector<double>(s.values.begin(),
                                     s.values.begin() + train_len),
                 s.origin_year);
    std::vector<double> observed(s.values.begin() + train_len,
                                 s.values.begin() + train_len + cfg.horizon);

    std::vector<CandidateFitState> states(cfg.candidates.size());
    for (std::size_t i = 0; i < cfg.candidates.size(); ++i) {
        const arima::ArimaSpec& spec = cfg.candidates[i];
        CandidateReport cand;
        cand.model = spec.label();
        try {
            arima::ArimaFit fit = arima::fit(train, spec);
            arima::ForecastResult fc =
                arima::forecast(fit, cfg.horizon, cfg.confidence);
            cand.rmse = arima::holdout_rmse(observed, fc.points);
            cand.coefficients = arima::coefficient_significance(fit);
            cand.sigma2 = fit.sigma2;
            cand.loglik = fit.loglik;
            cand.aicc = fit.aicc;
            if (fit.residuals.size() >= 8)
                cand.jb = stats::jarque_bera(fit.residuals);
            if (fit.residuals.size() >= 3)
                cand.sw = stats::shapiro_wilk(fit.residuals);
            cand.residuals_normal = cand.jb && cand.sw &&
                                    !cand.jb->reject_null &&
                                    !cand.sw->reject_null;
            cand.fitted = true;
            states[i].fit = std::move(fit);
            states[i].fc = std::move(fc);
        } catch (const Error& e) {
            cand.error = e.what();
            notes.push_back(cr.country + ": " + cand.model + ": " + e.what());
        }
        cr.candidates.push_back(std::move(cand));
    }

    // selection: residual tests first, then holdout accuracy, then AICc
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cr.candidates.size(); ++i) {
        const CandidateReport& c = cr.candidates[i];
        if (!c.fitted) continue;
        if (!best) {
            best = i;
            continue;
        }
        const CandidateReport& b = cr.candidates[*best];
        if (c.residuals_normal != b.residuals_normal) {
            if (c.residuals_normal) best = i;
        } else if (c.rmse != b.rmse) {
            if (c.rmse < b.rmse) best = i;
        } else if (c.aicc < b.aicc) {
            best = i;
        }
    }
    if (!best) {
        cr.forecast.error = "no candidate model could be fitted";
        notes.push_back(cr.country + ": " + cr.forecast.error);
        return;
    }
    cr.candidates[*best].selected = true;

    const CandidateReport& sel = cr.candidates[*best];
    const arima::ArimaFit& train_fit = *states[*best].fit;
    const arima::ForecastResult& train_fc = *states[*best].fc;
    cr.forecast.model = sel.model;
    cr.forecast.rmse = sel.rmse;

    const int first_holdout_year =
        s.origin_year ? *s.origin_year + train_len : train_len;
    for (int h = 0; h < cfg.horizon; ++h) {
        ForecastRow row;
        row.year = first_holdout_year + h;
        row.predicted = train_fc.points[std::size_t(h)];
        row.se = train_fc.se[std::size_t(h)];
        row.lower = train_fc.lower[std::size_t(h)];
        row.upper = train_fc.upper[std::size_t(h)];
        row.observed = observed[std::size_t(h)];
        cr.forecast.holdout.push_back(row);
    }

    try {
        const arima::ArimaFit full_fit = arima::fit(s, train_fit.spec);
        const arima::ForecastResult full_fc =
            arima::forecast(full_fit, cfg.horizon, cfg.confidence);
        const int first_future_year =
            s.origin_year ? *s.origin_year + int(n) : int(n);
        for (int h = 0; h < cfg.horizon; ++h) {
            ForecastRow row;
            row.year = first_future_year + h;
            row.predicted = full_fc.points[std::size_t(h)];
            row.se = full_fc.se[std::size_t(h)];
            row.lower = full_fc.lower[std::size_t(h)];
            row.upper = full_fc.upper[std::size_t(h)];
            cr.forecast.future.push_back(row);
        }
    } catch (const Error& e) {
        cr.forecast.error =
            std::string("full-series refit failed: ") + e.what();
        notes.push_back(cr.country + ": " + cr.forecast.error);
    }
}

void run_changepoints(const AnalysisConfig& cfg, const Series& s,
                      ChangepointReport& cp,
                      std::vector<std::string>& notes,
                      const std::string& country) {
    try {
        const Series base = cfg.difference_order > 1
                                ? stats::difference(s, cfg.difference_order - 1)
                                : s;
        const Series iv = stats::iaav(base);
        cp.iaav_origin_year = iv.origin_year.value_or(0);
        const auto year_at = [&](std::size_t tau) {
            // tau is the length of everything left of the break, so the
            // last year of the old regime sits at origin + tau - 1
            return cp.iaav_origin_year + int(tau) - 1;
        };

        const changepoint::PenaltySpec pen = cfg.penalty();
        const changepoint::ChangePointResult bs =
            changepoint::binseg(iv, pen, std::size_t(cfg.max_cps));
        const changepoint::ChangePointResult sn =
            changepoint::segneigh(iv, pen, std::size_t(cfg.max_cps));
        for (const auto* r : {&bs, &sn}) {
            ChangepointMethodReport m;
            m.method = r->method == changepoint::SearchMethod::binseg
                           ? "binseg"
                           : "segneigh";
            m.indices = r->changepoints;
            for (std::size_t t : r->changepoints)
                m.years.push_back(year_at(t));
            m.segment_variances = r->segment_variances;
            m.total_cost = r->total_cost;
            cp.methods.push_back(std::move(m));
        }

        cp.consensus = changepoint::consensus_changepoints(
            iv, std::size_t(cfg.max_cps));
        for (std::size_t t : cp.consensus)
            cp.consensus_years.push_back(year_at(t));
        if (!cp.consensus.empty()) {
            try {
                cp.rates =
                    changepoint::iaav_growth_rates(iv, cp.consensus.front());
            } catch (const Error& e) {
                notes.push_back(country + ": changepoint rates: " + e.what());
            }
        }
    } catch (const Error& e) {
        cp.error = e.what();
        notes.push_back(country + ": changepoints: " + e.what());
    }
}

}  // namespace

ReachabilityReport reachability_report(
    const AnalysisConfig& cfg,
    const std::vector<ingest::DelegatedRecord>& records,
    const std::string& region_label, std::vector<std::string>* notes) {
    namespace fs = std::filesystem;
    ReachabilityReport rr;

    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(cfg.snapshot_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string stem = entry.path().stem().string();
        if (stem.size() == 8 &&
            std::all_of(stem.begin(), stem.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            }))
            files.emplace_back(stem, entry.path());
    }
    if (files.empty())
        throw NoRecords("no yyyymmdd-named snapshot files in " +
                        cfg.snapshot_dir);
    std::sort(files.begin(), files.end());

    struct Snap {
        std::string stamp;
        ingest::RouteviewSnapshot snapshot;
    };
    std::vector<Snap> snaps;
    for (const auto& [stamp, path] : files) {
        const auto date = ingest::parse_yyyymmdd(stamp);
        if (!date) continue;  // impossible dates like 20131399
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open snapshot file: " + path.string());
        snaps.push_back(
            {stamp,
             ingest::parse_snapshot(in, *date, {cfg.strict_parse}).snapshot});
    }
    if (snaps.empty())
        throw NoRecords("no snapshot file has a valid yyyymmdd name");
    rr.as_of = snaps.back().stamp;

    std::vector<std::pair<std::string, std::string>> labels;
    for (const std::string& c : cfg.countries) labels.emplace_back(c, c);
    labels.emplace_back(std::string(ingest::kAllCountries), region_label);

    for (const auto& [code, label] : labels) {
        std::vector<reachability::DailyCount> daily;
        for (const Snap& snap : snaps) {
            const auto asns =
                ingest::country_asn_set(records, code, snap.snapshot.date);
            daily.push_back(
                {snap.stamp,
                 reachability::advertised_count(snap.snapshot, asns)});
        }

        reachability::ReachabilityStats row;
        row.label = label;
        row.advertised = daily.back().count;
        row.assigned = std::int64_t(
            ingest::asn_totals(records, code, snaps.back().snapshot.date)
                .assigned);
        if (row.assigned <= 0) {
            if (notes)
                notes->push_back("reachability: " + label +
                                 " has no assigned resources; row skipped");
            continue;
        }
        row.ratio =
            reachability::reachability_ratio(row.assigned, row.advertised);
        if (daily.size() >= 2 && daily.front().count > 0)
            row.period_increase_pct = reachability::period_growth_pct(daily);
        rr.rows.push_back(row);

        if (daily.size() >= 2) {
            for (const auto& ev :
                 reachability::drop_events(daily, cfg.drop_threshold_pct))
                rr.drops.push_back({label, ev.date, ev.drop_pct});
        }
    }
    return rr;
}

namespace {

void run_reachability(const AnalysisConfig& cfg,
                      const std::vector<ingest::DelegatedRecord>& records,
                      const std::string& region_label,
                      ReachabilityReport& rr,
                      std::vector<std::string>& notes) {
    try {
        rr = reachability_report(cfg, records, region_label, &notes);
    } catch (const Error& e) {
        rr.error = e.what();
        notes.push_back(std::string("reachability: ") + e.what());
    }
}

}  // namespace

ReportBundle run_pipeline(const AnalysisConfig& config) {
    config.validate();

    ReportBundle bundle;
    bundle.source = config.delegated_path;

    std::ifstream in(config.delegated_path);
    if (!in)
        throw ConfigError("cannot open delegated file: " +
                          config.delegated_path);
    const ingest::ParseResult parsed =
        ingest::parse_delegated(in, {config.strict_parse});
    if (parsed.records.empty())
        throw NoRecords("delegated file holds no records");
    const std::vector<ingest::DelegatedRecord> records =
        config.only_16bit ? ingest::filter_16bit(parsed.records)
                          : parsed.records;
    bundle.region_label = upper(records.front().registry);

    int end_year = config.end_year;
    if (end_year == 0) {
        for (const auto& r : records)
            if (r.resource_type == ingest::ResourceType::asn && r.date &&
                r.counts_as_assigned())
                end_year = std::max(end_year, year_of(*r.date));
        if (end_year == 0)
            throw NoRecords("no dated ASN allocations in the input");
    }

    // build every series first so configuration errors surface before any
    // statistical work starts
    std::vector<CountryWork> work(config.countries.size());
    for (std::size_t i = 0; i < config.countries.size(); ++i) {
        CountryWork& w = work[i];
        w.report.country = config.countries[i];
        try {
            w.report.counts = ingest::build_annual_series(
                                  records, config.countries[i],
                                  ingest::ResourceType::asn, end_year)
                                  .to_series();
            w.has_series = true;
        } catch (const Error& e) {
            w.report.error = e.what();
            bundle.notes.push_back(config.countries[i] + ": " + e.what());
        }
    }
    if (config.train_len > 0) {
        for (const CountryWork& w : work) {
            if (!w.has_series) continue;
            if (std::size_t(config.train_len + config.horizon) >
                w.report.counts.size())
                throw ConfigError(
                    "train_len + horizon exceeds the " +
                    std::to_string(w.report.counts.size()) + "-year series for " +
                    w.report.country);
        }
    }

    for (CountryWork& w : work) {
        if (!w.has_series) continue;
        const Series& s = w.report.counts;
        run_characterization(config, s, w.report.characterization,
                             bundle.notes, w.report.country);
        run_candidates(config, s, w.report, bundle.notes);
        run_changepoints(config, s, w.report.changepoints, bundle.notes,
                         w.report.country);
        try {
            w.drift = trend::rw_drift_trend(s);
            w.linear = trend::linear_trend(s);
            w.has_trend = true;
        } catch (const Error& e) {
            bundle.notes.push_back(w.report.country + ": trend: " + e.what());
        }
    }

    // region trend anchors the relative-growth column
    bool region_ok = false;
    trend::TrendEstimate region_drift, region_linear;
    try {
        const Series region = ingest::build_annual_series(
                                  records, ingest::kAllCountries,
                                  ingest::ResourceType::asn, end_year)
                                  .to_series();
        region_drift = trend::rw_drift_trend(region);
        region_linear = trend::linear_trend(region);
        region_ok = true;
        bundle.trend_table.push_back({bundle.region_label, "rw_drift",
                                      region_drift.annual_growth,
                                      region_drift.se, 100.0});
        bundle.trend_table.push_back({bundle.region_label, "linear",
                                      region_linear.annual_growth,
                                      region_linear.se, 100.0});
    } catch (const Error& e) {
        bundle.notes.push_back(std::string("region trend: ") + e.what());
    }
    for (const CountryWork& w : work) {
        if (!w.has_trend) continue;
        if (region_ok) {
            try {
                bundle.trend_table.push_back(
                    {w.report.country, "rw_drift", w.drift.annual_growth,
                     w.drift.se,
                     trend::relative_growth_pct(w.drift, region_drift)});
                bundle.trend_table.push_back(
                    {w.report.country, "linear", w.linear.annual_growth,
                     w.linear.se,
                     trend::relative_growth_pct(w.linear, region_linear)});
            } catch (const Error& e) {
                bundle.notes.push_back(w.report.country +
                                       ": relative growth: " + e.what());
            }
        }
    }

    // pairwise trend correlations against the first country, and Fisher
    // tests of the first pair against each later pair
    if (!work.empty() && work.front().has_trend) {
        const CountryWork& ref = work.front();
        for (std::size_t k = 1; k < work.size(); ++k) {
            if (!work[k].has_trend) continue;
            try {
                CorrelationRow row;
                row.a = ref.report.country;
                row.b = work[k].report.country;
                row.r = trend::trend_correlation(ref.drift, work[k].drift);
                row.n = overlap_years(ref.drift.one_step,
                                      work[k].drift.one_step);
                row.z = trend::fisher_z(row.r);
                bundle.correlations.push_back(row);
            } catch (const Error& e) {
                bundle.notes.push_back(ref.report.country + "-" +
                                       work[k].report.country +
                                       ": correlation: " + e.what());
            }
        }
        for (std::size_t k = 1; k < bundle.correlations.size(); ++k) {
            const CorrelationRow& first = bundle.correlations.front();
            const CorrelationRow& other = bundle.correlations[k];
            try {
                ComparisonRow row;
                row.pair1 = first.a + "-" + first.b;
                row.pair2 = other.a + "-" + other.b;
                row.cmp = trend::compare_correlations(first.r, first.n,
                                                      other.r, other.n);
                bundle.comparisons.push_back(row);
            } catch (const Error& e) {
                bundle.notes.push_back("comparison " + first.b + " vs " +
                                       other.b + ": " + e.what());
            }
        }
    }

    if (!config.snapshot_dir.empty()) {
        ReachabilityReport rr;
        run_reachability(config, records, bundle.region_label, rr,
                         bundle.notes);
        bundle.reachability = std::move(rr);
    }

    for (CountryWork& w : work)
        bundle.countries.push_back(std::move(w.report));
    return bundle;
}

// ---- serialization -------------------------------------------------------

namespace {

ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json to_json(const stats::StatTestResult& t) {
    return {{"statistic", json_number(t.statistic)},
            {"p_value", json_number(t.p_value)},
            {"p_value_kind", t.p_value_kind == stats::PValueKind::exact
                                 ? "exact"
                                 : "tabulated_bracket"},
            {"reject_null", t.reject_null}};
}

ordered_json to_json(const Series& s) {
    ordered_json j;
    if (s.origin_year) j["origin_year"] = *s.origin_year;
    ordered_json vals = ordered_json::array();
    for (double v : s.values) vals.push_back(json_number(v));
    j["values"] = std::move(vals);
    return j;
}

ordered_json forecast_rows_json(const std::vector<ForecastRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const ForecastRow& r : rows) {
        ordered_json j{{"year", r.year},
                       {"predicted", json_number(r.predicted)},
                       {"se", json_number(r.se)},
                       {"lower", json_number(r.lower)},
                       {"upper", json_number(r.upper)}};
        if (r.observed) j["observed"] = json_number(*r.observed);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string fmt_cell(double v) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
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

}  // namespace

std::string to_json(const ReportBundle& bundle) {
    ordered_json j;
    j["source"] = bundle.source;
    j["region"] = bundle.region_label;

    ordered_json countries = ordered_json::array();
    for (const CountryReport& c : bundle.countries) {
        ordered_json jc;
        jc["country"] = c.country;
        if (!c.error.empty()) {
            jc["error"] = c.error;
            countries.push_back(std::move(jc));
            continue;
        }
        jc["series"] = to_json(c.counts);

        ordered_json ch;
        if (!c.characterization.error.empty())
            ch["error"] = c.characterization.error;
        ch["acf"] = c.characterization.acf;
        ch["pacf"] = c.characterization.pacf;
        ch["acf_conf_bound"] = json_number(c.characterization.acf_conf_bound);
        if (c.characterization.df_level)
            ch["df_level"] = to_json(*c.characterization.df_level);
        if (c.characterization.df_differenced)
            ch["df_differenced"] = to_json(*c.characterization.df_differenced);
        jc["characterization"] = std::move(ch);

        ordered_json cands = ordered_json::array();
        for (const CandidateReport& cand : c.candidates) {
            ordered_json jcand;
            jcand["model"] = cand.model;
            jcand["fitted"] = cand.fitted;
            if (!cand.error.empty()) {
                jcand["error"] = cand.error;
                cands.push_back(std::move(jcand));
                continue;
            }
            ordered_json coefs = ordered_json::array();
            for (const auto& row : cand.coefficients)
                coefs.push_back({{"term", row.name},
                                 {"estimate", json_number(row.coefficient)},
                                 {"se", json_number(row.se)},
                                 {"z", json_number(row.z)},
                                 {"significant", row.significant}});
            jcand["coefficients"] = std::move(coefs);
            jcand["sigma2"] = json_number(cand.sigma2);
            jcand["loglik"] = json_number(cand.loglik);
            jcand["aicc"] = json_number(cand.aicc);
            jcand["rmse"] = json_number(cand.rmse);
            if (cand.jb) jcand["jarque_bera"] = to_json(*cand.jb);
            if (cand.sw) jcand["shapiro_wilk"] = to_json(*cand.sw);
            jcand["residuals_normal"] = cand.residuals_normal;
            jcand["selected"] = cand.selected;
            cands.push_back(std::move(jcand));
        }
        jc["candidates"] = std::move(cands);

        ordered_json jf;
        if (!c.forecast.error.empty()) jf["error"] = c.forecast.error;
        if (!c.forecast.model.empty()) {
            jf["model"] = c.forecast.model;
            jf["rmse"] = json_number(c.forecast.rmse);
            jf["holdout"] = forecast_rows_json(c.forecast.holdout);
            jf["future"] = forecast_rows_json(c.forecast.future);
        }
        jc["forecast"] = std::move(jf);

        ordered_json jcp;
        if (!c.changepoints.error.empty()) jcp["error"] = c.changepoints.error;
        jcp["iaav_origin_year"] = c.changepoints.iaav_origin_year;
        ordered_json methods = ordered_json::array();
        for (const ChangepointMethodReport& m : c.changepoints.methods) {
            ordered_json jm;
            jm["method"] = m.method;
            jm["indices"] = m.indices;
            jm["years"] = m.years;
            ordered_json vars = ordered_json::array();
            for (double v : m.segment_variances)
                vars.push_back(json_number(v));
            jm["segment_variances"] = std::move(vars);
            jm["total_cost"] = json_number(m.total_cost);
            methods.push_back(std::move(jm));
        }
        jcp["methods"] = std::move(methods);
        jcp["consensus_indices"] = c.changepoints.consensus;
        jcp["consensus_years"] = c.changepoints.consensus_years;
        if (c.changepoints.rates) {
            jcp["growth_before_pct"] =
                json_number(c.changepoints.rates->before_pct);
            jcp["growth_after_pct"] =
                json_number(c.changepoints.rates->after_pct);
        }
        jc["changepoints"] = std::move(jcp);
        countries.push_back(std::move(jc));
    }
    j["countries"] = std::move(countries);

    ordered_json trends = ordered_json::array();
    for (const TrendRow& t : bundle.trend_table)
        trends.push_back({{"label", t.label},
                          {"method", t.method},
                          {"annual_growth", json_number(t.annual_growth)},
                          {"se", json_number(t.se)},
                          {"relative_pct", json_number(t.relative_pct)}});
    j["trend"] = std::move(trends);

    ordered_json corrs = ordered_json::array();
    for (const CorrelationRow& c : bundle.correlations)
        corrs.push_back({{"a", c.a},
                         {"b", c.b},
                         {"n", c.n},
                         {"r", json_number(c.r)},
                         {"z", json_number(c.z)}});
    j["correlations"] = std::move(corrs);

    ordered_json cmps = ordered_json::array();
    for (const ComparisonRow& c : bundle.comparisons)
        cmps.push_back({{"pair1", c.pair1},
                        {"pair2", c.pair2},
                        {"r1", json_number(c.cmp.r1)},
                        {"r2", json_number(c.cmp.r2)},
                        {"n1", c.cmp.n1},
                        {"n2", c.cmp.n2},
                        {"z1", json_number(c.cmp.z1)},
                        {"z2", json_number(c.cmp.z2)},
                        {"zd", json_number(c.cmp.zd)},
                        {"p_value", json_number(c.cmp.p_value)},
                        {"reject_equal", c.cmp.reject_equal}});
    j["comparisons"] = std::move(cmps);

    if (bundle.reachability) {
        const ReachabilityReport& rr = *bundle.reachability;
        ordered_json jr;
        if (!rr.error.empty()) jr["error"] = rr.error;
        jr["as_of"] = rr.as_of;
        ordered_json rows = ordered_json::array();
        for (const auto& row : rr.rows) {
            ordered_json jrow{{"label", row.label},
                              {"assigned", row.assigned},
                              {"advertised", row.advertised},
                              {"ratio", json_number(row.ratio)}};
            if (row.period_increase_pct)
                jrow["period_increase_pct"] =
                    json_number(*row.period_increase_pct);
            rows.push_back(std::move(jrow));
        }
        jr["rows"] = std::move(rows);
        ordered_json drops = ordered_json::array();
        for (const DropRow& d : rr.drops)
            drops.push_back({{"label", d.label},
                             {"date", d.date},
                             {"drop_pct", json_number(d.drop_pct)}});
        jr["drops"] = std::move(drops);
        j["reachability"] = std::move(jr);
    }

    j["notes"] = bundle.notes;
    return j.dump(2) + "\n";
}

std::string to_csv(const ReportBundle& bundle) {
    std::ostringstream os;
    os << "## meta\n";
    os << "key,value\n";
    os << "source," << csv_field(bundle.source) << "\n";
    os << "region," << csv_field(bundle.region_label) << "\n";

    os << "\n## series\n";
    os << "country,year,count\n";
    for (const CountryReport& c : bundle.countries) {
        if (!c.error.empty()) continue;
        for (std::size_t i = 0; i < c.counts.size(); ++i)
            os << c.country << "," << c.counts.year_at(i) << ","
               << fmt_cell(c.counts[i]) << "\n";
    }

    os << "\n## acf\n";
    os << "country,lag,acf,pacf,conf_bound\n";
    for (const CountryReport& c : bundle.countries) {
        const CharacterizationReport& ch = c.characterization;
        for (std::size_t lag = 0; lag < ch.acf.size(); ++lag) {
            os << c.country << "," << lag << "," << fmt_cell(ch.acf[lag])
               << ",";
            if (lag >= 1 && lag - 1 < ch.pacf.size())
                os << fmt_cell(ch.pacf[lag - 1]);
            os << "," << fmt_cell(ch.acf_conf_bound) << "\n";
        }
    }

    os << "\n## stationarity\n";
    os << "country,test,statistic,p_value,p_value_kind,reject_null\n";
    for (const CountryReport& c : bundle.countries) {
        const auto emit = [&](const char* name,
                              const std::optional<stats::StatTestResult>& t) {
            if (!t) return;
            os << c.country << "," << name << "," << fmt_cell(t->statistic)
               << "," << fmt_cell(t->p_value) << ","
               << (t->p_value_kind == stats::PValueKind::exact
                       ? "exact"
                       : "tabulated_bracket")
               << "," << bool_cell(t->reject_null) << "\n";
        };
        emit("df_level", c.characterization.df_level);
        emit("df_differenced", c.characterization.df_differenced);
    }

    os << "\n## candidates\n";
    os << "country,model,fitted,sigma2,loglik,aicc,rmse,jb_p,sw_p,"
          "residuals_normal,selected,error\n";
    for (const CountryReport& c : bundle.countries) {
        for (const CandidateReport& cand : c.candidates) {
            os << c.country << "," << csv_field(cand.model) << ","
               << bool_cell(cand.fitted) << ",";
            if (cand.fitted)
                os << fmt_cell(cand.sigma2) << "," << fmt_cell(cand.loglik)
                   << "," << fmt_cell(cand.aicc) << "," << fmt_cell(cand.rmse);
            else
                os << ",,,";
            os << ",";
            if (cand.jb) os << fmt_cell(cand.jb->p_value);
            os << ",";
            if (cand.sw) os << fmt_cell(cand.sw->p_value);
            os << "," << bool_cell(cand.residuals_normal) << ","
               << bool_cell(cand.selected) << "," << csv_field(cand.error)
               << "\n";
        }
    }

    os << "\n## coefficients\n";
    os << "country,model,term,estimate,se,z,significant\n";
    for (const CountryReport& c : bundle.countries)
        for (const CandidateReport& cand : c.candidates)
            for (const auto& row : cand.coefficients)
                os << c.country << "," << csv_field(cand.model) << ","
                   << row.name << "," << fmt_cell(row.coefficient) << ","
                   << fmt_cell(row.se) << "," << fmt_cell(row.z) << ","
                   << bool_cell(row.significant) << "\n";

    os << "\n## holdout\n";
    os << "country,model,year,observed,predicted,se,lower,upper\n";
    for (const CountryReport& c : bundle.countries)
        for (const ForecastRow& r : c.forecast.holdout)
            os << c.country << "," << csv_field(c.forecast.model) << ","
               << r.year << ","
               << (r.observed ? fmt_cell(*r.observed) : std::string()) << ","
               << fmt_cell(r.predicted) << "," << fmt_cell(r.se) << ","
               << fmt_cell(r.lower) << "," << fmt_cell(r.upper) << "\n";

    os << "\n## forecast\n";
    os << "country,model,year,predicted,se,lower,upper\n";
    for (const CountryReport& c : bundle.countries)
        for (const ForecastRow& r : c.forecast.future)
            os << c.country << "," << csv_field(c.forecast.model) << ","
               << r.year << "," << fmt_cell(r.predicted) << ","
               << fmt_cell(r.se) << "," << fmt_cell(r.lower) << ","
               << fmt_cell(r.upper) << "\n";

    os << "\n## trend\n";
    os << "label,method,annual_growth,se,relative_pct\n";
    for (const TrendRow& t : bundle.trend_table)
        os << csv_field(t.label) << "," << t.method << ","
           << fmt_cell(t.annual_growth) << "," << fmt_cell(t.se) << ","
           << fmt_cell(t.relative_pct) << "\n";

    os << "\n## correlations\n";
    os << "a,b,n,r,z\n";
    for (const CorrelationRow& c : bundle.correlations)
        os << c.a << "," << c.b << "," << c.n << "," << fmt_cell(c.r) << ","
           << fmt_cell(c.z) << "\n";

    os << "\n## comparisons\n";
    os << "pair1,pair2,r1,r2,n1,n2,z1,z2,zd,p_value,reject_equal\n";
    for (const ComparisonRow& c : bundle.comparisons)
        os << csv_field(c.pair1) << "," << csv_field(c.pair2) << ","
           << fmt_cell(c.cmp.r1) << "," << fmt_cell(c.cmp.r2) << ","
           << c.cmp.n1 << "," << c.cmp.n2 << "," << fmt_cell(c.cmp.z1) << ","
           << fmt_cell(c.cmp.z2) << "," << fmt_cell(c.cmp.zd) << ","
           << fmt_cell(c.cmp.p_value) << "," << bool_cell(c.cmp.reject_equal)
           << "\n";

    os << "\n## changepoints\n";
    os << "country,method,index,year\n";
    for (const CountryReport& c : bundle.countries)
        for (const ChangepointMethodReport& m : c.changepoints.methods)
            for (std::size_t i = 0; i < m.indices.size(); ++i)
                os << c.country << "," << m.method << "," << m.indices[i]
                   << "," << m.years[i] << "\n";

    os << "\n## segment_variances\n";
    os << "country,method,segment,variance\n";
    for (const CountryReport& c : bundle.countries)
        for (const ChangepointMethodReport& m : c.changepoints.methods)
            for (std::size_t i = 0; i < m.segment_variances.size(); ++i)
                os << c.country << "," << m.method << "," << i << ","
                   << fmt_cell(m.segment_variances[i]) << "\n";

    os << "\n## cp_consensus\n";
    os << "country,index,year,before_pct,after_pct\n";
    for (const CountryReport& c : bundle.countries)
        for (std::size_t i = 0; i < c.changepoints.consensus.size(); ++i) {
            os << c.country << "," << c.changepoints.consensus[i] << ","
               << c.changepoints.consensus_years[i] << ",";
            if (i == 0 && c.changepoints.rates)
                os << fmt_cell(c.changepoints.rates->before_pct) << ","
                   << fmt_cell(c.changepoints.rates->after_pct);
            else
                os << ",";
            os << "\n";
        }

    if (bundle.reachability) {
        const ReachabilityReport& rr = *bundle.reachability;
        os << "\n## reachability\n";
        os << "as_of,label,assigned,advertised,ratio,period_increase_pct\n";
        for (const auto& row : rr.rows) {
            os << rr.as_of << "," << csv_field(row.label) << ","
               << row.assigned << "," << row.advertised << ","
               << fmt_cell(row.ratio) << ",";
            if (row.period_increase_pct)
                os << fmt_cell(*row.period_increase_pct);
            os << "\n";
        }
        os << "\n## drops\n";
        os << "label,date,drop_pct\n";
        for (const DropRow& d : rr.drops)
            os << csv_field(d.label) << "," << d.date << ","
               << fmt_cell(d.drop_pct) << "\n";
    }

    os << "\n## notes\n";
    os << "note\n";
    for (const std::string& n : bundle.notes) os << csv_field(n) << "\n";
    return os.str();
}

}  // namespace asgrowth::report
