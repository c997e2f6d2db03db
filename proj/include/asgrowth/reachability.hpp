#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asgrowth/ingest.hpp"

namespace asgrowth::reachability {

struct DailyCount {
    std::string date;  // yyyymmdd
    std::int64_t count = 0;
};

struct DropEvent {
    std::string date;
    double drop_pct = 0.0;
};

struct ReachabilityStats {
    std::string label;
    std::int64_t assigned = 0;
    std::int64_t advertised = 0;
    double ratio = 0.0;
    std::optional<double> period_increase_pct;
};

// |snapshot ∩ country_asns|
std::int64_t advertised_count(const ingest::RouteviewSnapshot& snapshot,
                              const std::set<std::uint32_t>& country_asns);

// advertised / assigned; assigned must be positive
double reachability_ratio(std::int64_t assigned, std::int64_t advertised);

// 100 * (last - first) / first over the sample window
double period_growth_pct(const std::vector<DailyCount>& daily);

// days on which the count fell by at least threshold_pct from the
// previous sample
std::vector<DropEvent> drop_events(const std::vector<DailyCount>& daily,
                                   double threshold_pct);

}  // namespace asgrowth::reachability
