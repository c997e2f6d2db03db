#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asgrowth/arima.hpp"
#include "asgrowth/changepoint.hpp"
#include "asgrowth/reachability.hpp"
#include "asgrowth/series.hpp"
#include "asgrowth/series_stats.hpp"
#include "asgrowth/trend.hpp"

namespace asgrowth::report {

enum class OutputFormat { csv, json };

std::vector<arima::ArimaSpec> default_candidates();

// Flat configuration for the full analysis pipeline.  Every knob has a
// working default; only delegated_path is required.
struct AnalysisConfig {
    std::string delegated_path;
    std::string snapshot_dir;  // empty: skip the reachability section

    std::vector<std::string> countries{"IN", "CN", "JP", "KR", "TW"};
    int train_len = 14;   // <= 0: use series length minus horizon
    int horizon = 5;
    double confidence = 0.95;
    std::vector<arima::ArimaSpec> candidates = default_candidates();

    changepoint::PenaltyKind penalty_kind = changepoint::PenaltyKind::sic;
    double manual_penalty = 0.0;
    int max_cps = 5;
    int difference_order = 1;  // differencing applied before the IAAV step

    bool only_16bit = true;
    bool strict_parse = false;
    int max_lag = 12;
    double drop_threshold_pct = 30.0;
    int end_year = 0;  // 0: latest allocation year present in the file
    OutputFormat format = OutputFormat::csv;

    changepoint::PenaltySpec penalty() const;
    void validate() const;  // throws ConfigError on contradictions
};

// One key=value assignment; unknown keys and unparseable values throw
// ConfigError.
void apply_config_entry(AnalysisConfig& config, const std::string& key,
                        const std::string& value);
AnalysisConfig parse_config_file(const std::string& path);

// ---- report bundle -------------------------------------------------------

struct CharacterizationReport {
    std::string error;
    std::vector<double> acf;   // lags 0..max_lag of the level series
    std::vector<double> pacf;  // lags 1..max_lag
    double acf_conf_bound = 0.0;
    std::optional<stats::StatTestResult> df_level;       // trend-mode test
    std::optional<stats::StatTestResult> df_differenced; // constant-mode
};

struct CandidateReport {
    std::string model;
    bool fitted = false;
    std::string error;
    std::vector<arima::SignificanceRow> coefficients;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aicc = 0.0;
    double rmse = 0.0;  // holdout RMSE; meaningful only when fitted
    std::optional<stats::StatTestResult> jb;  // residual normality
    std::optional<stats::StatTestResult> sw;
    bool residuals_normal = false;
    bool selected = false;
};

struct ForecastRow {
    int year = 0;
    double predicted = 0.0;
    double se = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> observed;
};

struct ForecastReport {
    std::string model;
    std::string error;
    double rmse = 0.0;
    std::vector<ForecastRow> holdout;  // validation window, observed known
    std::vector<ForecastRow> future;   // beyond the series end
};

struct ChangepointMethodReport {
    std::string method;
    std::vector<std::size_t> indices;
    std::vector<int> years;
    std::vector<double> segment_variances;
    double total_cost = 0.0;
};

struct ChangepointReport {
    std::string error;
    int iaav_origin_year = 0;
    std::vector<ChangepointMethodReport> methods;
    std::vector<std::size_t> consensus;  // segneigh-located indices
    std::vector<int> consensus_years;
    // growth on each side of the first consensus changepoint
    std::optional<changepoint::GrowthRates> rates;
};

struct CountryReport {
    std::string country;
    std::string error;  // series construction failed; stages are empty
    Series counts;
    CharacterizationReport characterization;
    std::vector<CandidateReport> candidates;
    ForecastReport forecast;
    ChangepointReport changepoints;
};

struct TrendRow {
    std::string label;  // country code or the region label
    std::string method;
    double annual_growth = 0.0;
    double se = 0.0;
    double relative_pct = 0.0;  // vs the region trend of the same method
};

struct CorrelationRow {
    std::string a, b;
    std::size_t n = 0;  // overlapping years
    double r = 0.0;
    double z = 0.0;
};

struct ComparisonRow {
    std::string pair1, pair2;
    trend::CorrelationComparison cmp;
};

struct DropRow {
    std::string label;
    std::string date;
    double drop_pct = 0.0;
};

struct ReachabilityReport {
    std::string error;
    std::string as_of;  // date of the newest snapshot
    std::vector<reachability::ReachabilityStats> rows;
    std::vector<DropRow> drops;
};

struct ReportBundle {
    std::string source;        // delegated file path
    std::string region_label;  // registry name from the file, uppercased
    std::vector<CountryReport> countries;
    std::vector<TrendRow> trend_table;
    std::vector<CorrelationRow> correlations;
    std::vector<ComparisonRow> comparisons;
    std::optional<ReachabilityReport> reachability;
    std::vector<std::string> notes;
};

// Builds the reachability section alone: snapshots from cfg.snapshot_dir
// are matched against the delegated records.  Throws on missing or
// unreadable snapshots; per-label problems are appended to notes when a
// notes sink is given.
ReachabilityReport reachability_report(
    const AnalysisConfig& cfg,
    const std::vector<ingest::DelegatedRecord>& records,
    const std::string& region_label,
    std::vector<std::string>* notes = nullptr);

// Runs ingest, characterization, model comparison, forecasting, trends,
// correlation tests, changepoint detection, and reachability in that
// order.  Configuration contradictions throw ConfigError before any
// analysis; failures inside a stage are recorded on the affected section
// and analysis continues.
ReportBundle run_pipeline(const AnalysisConfig& config);

std::string to_json(const ReportBundle& bundle);
std::string to_csv(const ReportBundle& bundle);

}  // namespace asgrowth::report
