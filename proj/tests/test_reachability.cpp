#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"

#include "asgrowth/errors.hpp"
#include "asgrowth/ingest.hpp"
#include "asgrowth/reachability.hpp"

using namespace asgrowth;
using namespace asgrowth::reachability;

TEST_CASE("advertised count is a set intersection") {
    ingest::RouteviewSnapshot snap;
    snap.asns = {1, 2, 3, 10, 20};
    CHECK(advertised_count(snap, {2, 3, 4}) == 2);
    CHECK(advertised_count(snap, {}) == 0);
    CHECK(advertised_count(snap, {99}) == 0);
}

TEST_CASE("reachability ratio") {
    CHECK(reachability_ratio(607, 495) ==
          doctest::Approx(495.0 / 607.0).epsilon(1e-14));
    CHECK_THROWS_AS(reachability_ratio(0, 10), DivisionByZero);
    CHECK_THROWS_AS(reachability_ratio(-5, 10), DivisionByZero);
}

TEST_CASE("single-decimal display of the ratios rounds as published") {
    // the ratios surface in reports rounded to one decimal place
    auto rounded = [](std::int64_t assigned, std::int64_t advertised) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f",
                      reachability_ratio(assigned, advertised));
        return std::string(buf);
    };
    CHECK(rounded(607, 495) == "0.8");
    CHECK(rounded(551, 220) == "0.4");
    CHECK(rounded(8420, 5285) == "0.6");
}

TEST_CASE("period growth percentage") {
    const std::vector<DailyCount> daily{{"20120101", 100},
                                        {"20120301", 130},
                                        {"20120601", 150}};
    CHECK(period_growth_pct(daily) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK_THROWS_AS(period_growth_pct({{"20120101", 100}}), DegenerateInput);
    CHECK_THROWS_AS(
        period_growth_pct({{"20120101", 0}, {"20120201", 5}}),
        DivisionByZero);
}

TEST_CASE("drop events flag large day-over-day falls") {
    const std::vector<DailyCount> daily{
        {"d1", 100}, {"d2", 90}, {"d3", 50}, {"d4", 55}, {"d5", 20}};
    const auto events = drop_events(daily, 30.0);
    REQUIRE(events.size() == 2);
    CHECK(events[0].date == "d3");
    CHECK(events[0].drop_pct ==
          doctest::Approx(100.0 * 40.0 / 90.0).epsilon(1e-12));
    CHECK(events[1].date == "d5");
    CHECK(events[1].drop_pct ==
          doctest::Approx(100.0 * 35.0 / 55.0).epsilon(1e-12));

    CHECK(drop_events(daily, 80.0).empty());
    CHECK_THROWS_AS(drop_events(daily, 0.0), DomainError);
    CHECK_THROWS_AS(drop_events(daily, -5.0), DomainError);
}

TEST_CASE("zero-count days cannot divide") {
    const std::vector<DailyCount> daily{
        {"d1", 0}, {"d2", 50}, {"d3", 10}};
    // the zero first sample is skipped as a drop base
    const auto events = drop_events(daily, 30.0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].date == "d3");
}

TEST_CASE("snapshot fixtures show the TW reachability drop") {
    const std::string dir = std::string(ASGROWTH_TEST_DATA_DIR);
    std::ifstream del(dir + "/delegated_synthetic.txt");
    REQUIRE(del.good());
    const auto records =
        ingest::filter_16bit(ingest::parse_delegated(del).records);

    std::vector<DailyCount> tw_daily;
    for (const std::string stamp : {"20120101", "20120417", "20130101"}) {
        std::ifstream snap_in(dir + "/snapshots/" + stamp + ".txt");
        REQUIRE(snap_in.good());
        const auto date = ingest::parse_yyyymmdd(stamp);
        REQUIRE(date.has_value());
        const auto snap = ingest::parse_snapshot(snap_in, *date).snapshot;
        const auto asns = ingest::country_asn_set(records, "TW", *date);
        tw_daily.push_back({stamp, advertised_count(snap, asns)});
    }
    REQUIRE(tw_daily.size() == 3);
    // the middle snapshot withdraws a large share of TW announcements
    const auto events = drop_events(tw_daily, 30.0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].date == "20120417");
    CHECK(events[0].drop_pct >= 30.0);
}
