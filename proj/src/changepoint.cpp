#include "asgrowth/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asgrowth/errors.hpp"
#include "asgrowth/series_stats.hpp"
#include "detail/linalg.hpp"

namespace asgrowth::changepoint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093453;

// Prefix sums of squared deviations from the global mean let every segment
// cost come out of two lookups.
class CostTable {
  public:
    CostTable(const std::vector<double>& x, const CpOptions& opts)
        : n_(x.size()), prefix_sq_(x.size() + 1, 0.0) {
        const double mean = stats::mean(x);
        double total_sq = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double d = x[i] - mean;
            total_sq += d * d;
            prefix_sq_[i + 1] = total_sq;
        }
        const double series_var = total_sq / double(n_);
        floor_ = series_var > 0.0 ? opts.variance_floor_factor * series_var
                                  : 1e-12;
    }

    // variance of the half-open segment [first, last), mean held global
    double variance(std::size_t first, std::size_t last) const {
        return (prefix_sq_[last] - prefix_sq_[first]) / double(last - first);
    }

    // cost of [first, last)
    double operator()(std::size_t first, std::size_t last) const {
        const double len = double(last - first);
        const double v = std::max(variance(first, last), floor_);
        return len * (kLog2Pi + std::log(v) + 1.0);
    }

    std::size_t size() const { return n_; }

  private:
    std::size_t n_;
    double floor_;
    std::vector<double> prefix_sq_;
};

void fill_segments(ChangePointResult& r, const CostTable& cost) {
    const std::size_t n = cost.size();
    r.segment_variances.clear();
    double total = 0.0;
    std::size_t prev = 0;
    auto bounds = r.changepoints;
    bounds.push_back(n);
    for (std::size_t b : bounds) {
        r.segment_variances.push_back(cost.variance(prev, b));
        total += cost(prev, b);
        prev = b;
    }
    r.total_cost =
        total + r.penalty.value(n) * double(r.changepoints.size());
}

// Best single split of [first, last): smallest t with minimal
// cost(first,t) + cost(t,last), both sides >= min_seg.
struct Split {
    bool found = false;
    std::size_t at = 0;
    double cost = kInf;
};

Split best_split(const CostTable& cost, std::size_t first, std::size_t last,
                 std::size_t min_seg) {
    Split s;
    if (last - first < 2 * min_seg) return s;
    for (std::size_t t = first + min_seg; t + min_seg <= last; ++t) {
        const double c = cost(first, t) + cost(t, last);
        if (c < s.cost) {
            s.cost = c;
            s.at = t;
            s.found = true;
        }
    }
    return s;
}

void binseg_recurse(const CostTable& cost, double beta, std::size_t min_seg,
                    std::size_t first, std::size_t last, std::size_t max_cps,
                    std::vector<std::size_t>& out) {
    if (out.size() >= max_cps) return;
    const Split s = best_split(cost, first, last, min_seg);
    if (!s.found || !(s.cost + beta < cost(first, last))) return;
    out.push_back(s.at);
    binseg_recurse(cost, beta, min_seg, first, s.at, max_cps, out);
    binseg_recurse(cost, beta, min_seg, s.at, last, max_cps, out);
}

void check_series(const Series& s, const char* what) {
    if (s.size() < 2)
        throw DegenerateInput(std::string(what) +
                              " needs at least 2 observations");
}

}  // namespace

Series cusum(const Series& s) {
    if (s.size() < 2) throw DegenerateInput("cusum needs at least 2 values");
    const double mean = stats::mean(s.values);
    std::vector<double> c(s.size());
    double run = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        run += s[i] - mean;
        c[i] = run;
    }
    return Series(std::move(c), s.origin_year);
}

double PenaltySpec::value(std::size_t n) const {
    if (params_per_cp < 1)
        throw DomainError("penalty params_per_cp must be >= 1");
    switch (kind) {
        case PenaltyKind::aic:
            return 2.0 * double(params_per_cp);
        case PenaltyKind::sic:
            return double(params_per_cp) * std::log(double(n));
        case PenaltyKind::manual:
            if (!manual_value || *manual_value < 0.0)
                throw DomainError(
                    "manual penalty requires manual_value >= 0");
            return *manual_value;
    }
    throw DomainError("unknown penalty kind");
}

std::string PenaltySpec::label() const {
    switch (kind) {
        case PenaltyKind::aic:
            return "AIC";
        case PenaltyKind::sic:
            return "SIC";
        case PenaltyKind::manual:
            return "manual";
    }
    return "?";
}

double segment_cost(const Series& s, std::size_t from, std::size_t to,
                    const CpOptions& opts) {
    check_series(s, "segment_cost");
    if (to >= s.size() || from > to ||
        to - from + 1 < opts.min_segment)
        throw DegenerateSegment("segment [" + std::to_string(from) + "," +
                                std::to_string(to) + "] is out of range or "
                                "shorter than the minimum segment");
    const CostTable cost(s.values, opts);
    return cost(from, to + 1);
}

ChangePointResult binseg(const Series& s, const PenaltySpec& penalty,
                         std::size_t max_cps, const CpOptions& opts) {
    check_series(s, "binseg");
    const CostTable cost(s.values, opts);
    ChangePointResult r;
    r.method = SearchMethod::binseg;
    r.penalty = penalty;
    const double beta = penalty.value(s.size());
    binseg_recurse(cost, beta, opts.min_segment, 0, s.size(), max_cps,
                   r.changepoints);
    std::sort(r.changepoints.begin(), r.changepoints.end());
    fill_segments(r, cost);
    return r;
}

ChangePointResult segneigh(const Series& s, const PenaltySpec& penalty,
                           std::size_t Q, const CpOptions& opts) {
    check_series(s, "segneigh");
    if (Q < 1) throw DomainError("segneigh needs Q >= 1");
    const std::size_t n = s.size();
    const std::size_t min_seg = opts.min_segment;
    const CostTable cost(s.values, opts);

    // the series cannot hold more than n/min_seg segments
    const std::size_t qmax =
        std::min(Q, min_seg > 0 && n / min_seg > 0 ? n / min_seg - 1
                                                   : std::size_t(0));

    // best[m][j]: minimum cost of x[0..j) split into m+1 segments;
    // arg[m][j]: position of the last changepoint achieving it
    std::vector<std::vector<double>> best(qmax + 1,
                                          std::vector<double>(n + 1, kInf));
    std::vector<std::vector<std::size_t>> arg(
        qmax + 1, std::vector<std::size_t>(n + 1, 0));
    // the whole prefix as one segment is always admissible; min_seg only
    // constrains where splits may fall
    for (std::size_t j = 1; j <= n; ++j) best[0][j] = cost(0, j);
    for (std::size_t m = 1; m <= qmax; ++m) {
        for (std::size_t j = (m + 1) * min_seg; j <= n; ++j) {
            double b = kInf;
            std::size_t bt = 0;
            for (std::size_t t = m * min_seg; t + min_seg <= j; ++t) {
                const double c = best[m - 1][t] + cost(t, j);
                if (c < b) {
                    b = c;
                    bt = t;
                }
            }
            best[m][j] = b;
            arg[m][j] = bt;
        }
    }

    ChangePointResult r;
    r.method = SearchMethod::segneigh;
    r.penalty = penalty;
    const double beta = penalty.value(n);
    std::size_t pick = 0;
    double pick_cost = kInf;
    r.costs_by_count.resize(qmax + 1);
    for (std::size_t m = 0; m <= qmax; ++m) {
        r.costs_by_count[m] = best[m][n];
        const double penalized = best[m][n] + beta * double(m);
        if (penalized < pick_cost) {
            pick_cost = penalized;
            pick = m;
        }
    }
    std::size_t j = n;
    for (std::size_t m = pick; m > 0; --m) {
        const std::size_t t = arg[m][j];
        r.changepoints.push_back(t);
        j = t;
    }
    std::reverse(r.changepoints.begin(), r.changepoints.end());
    fill_segments(r, cost);
    return r;
}

std::vector<std::size_t> consensus_match(
    const std::vector<std::size_t>& segneigh_cps,
    const std::vector<std::size_t>& binseg_cps, std::size_t slack) {
    std::vector<std::size_t> out;
    for (std::size_t sn : segneigh_cps) {
        for (std::size_t bs : binseg_cps) {
            const std::size_t d = sn > bs ? sn - bs : bs - sn;
            if (d <= slack) {
                out.push_back(sn);
                break;
            }
        }
    }
    return out;
}

std::vector<std::size_t> consensus_changepoints(const Series& s,
                                                std::size_t max_cps,
                                                const CpOptions& opts) {
    PenaltySpec sic;
    sic.kind = PenaltyKind::sic;
    const ChangePointResult bs = binseg(s, sic, max_cps, opts);
    const ChangePointResult sn = segneigh(s, sic, max_cps, opts);
    return consensus_match(sn.changepoints, bs.changepoints, 1);
}

GrowthRates iaav_growth_rates(const Series& s, std::size_t cp) {
    const std::size_t n = s.size();
    if (cp < 3 || cp + 3 > n)
        throw DegenerateSegment(
            "changepoint must leave at least 3 points on each side");

    auto side = [&](std::size_t first, std::size_t last, double& rate,
                    double& slope) {
        const std::size_t len = last - first;
        detail::Matrix X(len, 2);
        std::vector<double> y(len);
        for (std::size_t i = 0; i < len; ++i) {
            X.at(i, 0) = 1.0;
            X.at(i, 1) = double(i);
            y[i] = s[first + i];
        }
        auto fit = detail::ols(X, y);
        if (!fit) throw SingularRegression("degenerate side regression");
        slope = fit->beta[1];
        const double m = stats::mean(y);
        // a zero-mean side has no meaningful relative rate
        rate = m == 0.0 ? 0.0 : 100.0 * slope / m;
    };

    GrowthRates g;
    side(0, cp, g.before_pct, g.before_slope);
    side(cp, n, g.after_pct, g.after_slope);
    return g;
}

}  // namespace asgrowth::changepoint
