#include "asgrowth/reachability.hpp"

#include "asgrowth/errors.hpp"

namespace asgrowth::reachability {

std::int64_t advertised_count(const ingest::RouteviewSnapshot& snapshot,
                              const std::set<std::uint32_t>& country_asns) {
    std::int64_t n = 0;
    for (std::uint32_t asn : snapshot.asns)
        if (country_asns.count(asn)) ++n;
    return n;
}

double reachability_ratio(std::int64_t assigned, std::int64_t advertised) {
    if (assigned <= 0)
        throw DivisionByZero("reachability ratio needs assigned > 0");
    return double(advertised) / double(assigned);
}

double period_growth_pct(const std::vector<DailyCount>& daily) {
    if (daily.size() < 2)
        throw DegenerateInput("period growth needs at least 2 samples");
    const double first = double(daily.front().count);
    if (first == 0.0)
        throw DivisionByZero("period growth from a zero first count");
    return 100.0 * (double(daily.back().count) - first) / first;
}

std::vector<DropEvent> drop_events(const std::vector<DailyCount>& daily,
                                   double threshold_pct) {
    if (daily.size() < 2)
        throw DegenerateInput("drop detection needs at least 2 samples");
    if (!(threshold_pct > 0.0))
        throw DomainError("drop threshold must be positive");
    std::vector<DropEvent> out;
    for (std::size_t i = 1; i < daily.size(); ++i) {
        const double prev = double(daily[i - 1].count);
        if (prev <= 0.0) continue;
        const double pct = 100.0 * (prev - double(daily[i].count)) / prev;
        if (pct >= threshold_pct) out.push_back({daily[i].date, pct});
    }
    return out;
}

}  // namespace asgrowth::reachability
