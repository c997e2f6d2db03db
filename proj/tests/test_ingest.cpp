#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "asgrowth/errors.hpp"
#include "asgrowth/ingest.hpp"

using namespace asgrowth;
using namespace asgrowth::ingest;

namespace {

const std::string kSample =
    "2|apnic|20130101|5|19940101|20130101|+1000\n"
    "apnic|*|asn|*|5|summary\n"
    "apnic|*|ipv4|*|2|summary\n"
    "apnic|IN|asn|9829|1|19950510|allocated\n"
    "apnic|IN|asn|17430|3|20010704|assigned\n"
    "apnic|CN|asn|4134|1|19970415|allocated|ext-1\n"
    "apnic|JP|asn|2497|1|19940312|assigned\n"
    "apnic|IN|ipv4|61.0.0.0|1048576|20000801|allocated\n";

std::string data_path(const std::string& name) {
    return std::string(ASGROWTH_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("delegated parsing reads records and skips headers") {
    const ParseResult r = parse_delegated(kSample);
    CHECK(r.records.size() == 5);
    CHECK(r.summary_lines == 2);
    REQUIRE(r.version_header.has_value());
    CHECK(r.version_header->substr(0, 1) == "2");
    CHECK(r.issues.empty());

    const DelegatedRecord& first = r.records.front();
    CHECK(first.registry == "apnic");
    CHECK(first.country_code == "IN");
    CHECK(first.resource_type == ResourceType::asn);
    CHECK(first.start_asn == 9829);
    CHECK(first.value == 1);
    CHECK(first.status == RecordStatus::allocated);
    REQUIRE(first.date.has_value());
    CHECK(int(first.date->year()) == 1995);
    CHECK(unsigned(first.date->month()) == 5);
    CHECK(unsigned(first.date->day()) == 10);
}

TEST_CASE("extensions after the status survive parsing") {
    const ParseResult r = parse_delegated(kSample);
    const DelegatedRecord& cn = r.records[2];
    CHECK(cn.country_code == "CN");
    REQUIRE(cn.extensions.has_value());
    CHECK(*cn.extensions == "ext-1");
}

TEST_CASE("malformed records are skipped or fatal depending on strictness") {
    const std::string bad =
        "apnic|IN|asn|9829|1|19950510|allocated\n"
        "apnic|IN|asn|not-a-number|1|19950510|allocated\n";
    const ParseResult lax = parse_delegated(bad);
    CHECK(lax.records.size() == 1);
    REQUIRE(lax.issues.size() == 1);
    CHECK(lax.issues[0].line_number == 2);

    CHECK_THROWS_AS(parse_delegated(bad, ParseOptions{true}),
                    MalformedRecord);
}

TEST_CASE("records with too few fields are issues, not crashes") {
    const ParseResult r = parse_delegated("apnic|IN|asn|9829\n");
    CHECK(r.records.empty());
    CHECK(r.issues.size() == 1);
}

TEST_CASE("counts_as_assigned covers the status vocabulary") {
    auto rec = [](RecordStatus status) {
        DelegatedRecord r;
        r.status = status;
        return r;
    };
    CHECK(rec(RecordStatus::assigned).counts_as_assigned());
    CHECK(rec(RecordStatus::allocated).counts_as_assigned());
    CHECK_FALSE(rec(RecordStatus::available).counts_as_assigned());
    CHECK_FALSE(rec(RecordStatus::reserved).counts_as_assigned());
}

TEST_CASE("annual series accumulates counts through end_year") {
    const auto records = parse_delegated(kSample).records;
    const AnnualCountSeries in =
        build_annual_series(records, "IN", ResourceType::asn, 2003);
    CHECK(in.label == "IN");
    CHECK(in.start_year == 1995);
    // 1995: 1; flat until 2001 adds a block of 3
    REQUIRE(in.counts.size() == 9);
    CHECK(in.counts[0] == 1);
    CHECK(in.counts[5] == 1);
    CHECK(in.counts[6] == 4);
    CHECK(in.counts.back() == 4);

    const Series s = in.to_series();
    REQUIRE(s.origin_year.has_value());
    CHECK(*s.origin_year == 1995);
    CHECK(s.values.back() == 4.0);
}

TEST_CASE("annual series matches countries case-insensitively") {
    const auto records = parse_delegated(kSample).records;
    const AnnualCountSeries lower =
        build_annual_series(records, "in", ResourceType::asn, 2003);
    CHECK(lower.counts.back() == 4);
    CHECK(lower.label == "IN");
}

TEST_CASE("the * country aggregates the whole registry") {
    const auto records = parse_delegated(kSample).records;
    const AnnualCountSeries all =
        build_annual_series(records, kAllCountries, ResourceType::asn, 2003);
    CHECK(all.start_year == 1994);
    CHECK(all.counts.back() == 6);  // 1+3 IN, 1 CN, 1 JP
}

TEST_CASE("annual series rejects impossible requests") {
    const auto records = parse_delegated(kSample).records;
    CHECK_THROWS_AS(
        build_annual_series(records, "ZZ", ResourceType::asn, 2003),
        NoRecords);
    CHECK_THROWS_AS(
        build_annual_series(records, "IN", ResourceType::asn, 1990),
        DomainError);
}

TEST_CASE("16-bit filter drops high ASN starts and keeps other resources") {
    const std::string text =
        "apnic|IN|asn|65535|1|20100101|assigned\n"
        "apnic|IN|asn|65536|1|20100101|assigned\n"
        "apnic|IN|asn|131072|5|20100101|assigned\n"
        "apnic|IN|ipv4|61.0.0.0|1024|20100101|assigned\n";
    const auto kept = filter_16bit(parse_delegated(text).records);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].start_asn == 65535);
    CHECK(kept[1].resource_type == ResourceType::ipv4);
}

TEST_CASE("yyyymmdd parsing accepts real dates only") {
    auto d = parse_yyyymmdd("20120417");
    REQUIRE(d.has_value());
    CHECK(int(d->year()) == 2012);
    CHECK(unsigned(d->month()) == 4);
    CHECK(unsigned(d->day()) == 17);
    CHECK_FALSE(parse_yyyymmdd("20121399").has_value());
    CHECK_FALSE(parse_yyyymmdd("2012041").has_value());
    CHECK_FALSE(parse_yyyymmdd("2012x417").has_value());
    // calendar-aware: no Feb 30
    CHECK_FALSE(parse_yyyymmdd("20120230").has_value());
}

TEST_CASE("country ASN sets expand blocks and honor as_of") {
    const std::string text =
        "apnic|IN|asn|100|3|20000101|assigned\n"
        "apnic|IN|asn|500|1|20100601|assigned\n"
        "apnic|CN|asn|200|1|20000101|assigned\n";
    const auto records = parse_delegated(text).records;

    const auto all = country_asn_set(records, "IN");
    CHECK(all == std::set<std::uint32_t>{100, 101, 102, 500});

    const auto early =
        country_asn_set(records, "IN", parse_yyyymmdd("20050101"));
    CHECK(early == std::set<std::uint32_t>{100, 101, 102});

    const auto everyone = country_asn_set(records, kAllCountries);
    CHECK(everyone.count(200) == 1);
    CHECK(everyone.size() == 5);
}

TEST_CASE("asn totals split registered and assigned") {
    const std::string text =
        "apnic|IN|asn|100|3|20000101|assigned\n"
        "apnic|IN|asn|300|2|20000101|reserved\n";
    const auto records = parse_delegated(text).records;
    const AsnTotals t = asn_totals(records, "IN");
    CHECK(t.registered == 5);
    CHECK(t.assigned == 3);
}

TEST_CASE("snapshot parsing collects unique ASNs") {
    const std::string text = "123\n456\n123\n# comment\n\n  789  \n";
    const auto date = parse_yyyymmdd("20120101");
    REQUIRE(date.has_value());
    const auto r = parse_snapshot(text, *date);
    CHECK(r.snapshot.asns == std::set<std::uint32_t>{123, 456, 789});
    CHECK(r.issues.empty());
}

TEST_CASE("snapshot parsing flags junk lines") {
    const auto date = parse_yyyymmdd("20120101");
    const auto r = parse_snapshot("123\nxyz\n", *date);
    CHECK(r.snapshot.asns.size() == 1);
    CHECK(r.issues.size() == 1);
    CHECK_THROWS_AS(parse_snapshot("xyz\n", *date, ParseOptions{true}),
                    MalformedRecord);
}

TEST_CASE("serialization round-trips") {
    const auto records = parse_delegated(kSample).records;
    std::string text;
    for (const auto& r : records) text += serialize(r) + "\n";
    const auto again = parse_delegated(text).records;
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(again[i].country_code == records[i].country_code);
        CHECK(again[i].start_text == records[i].start_text);
        CHECK(again[i].value == records[i].value);
        CHECK(again[i].status == records[i].status);
    }
}

TEST_CASE("bundled corpus parses to the expected totals") {
    std::ifstream in(data_path("delegated_synthetic.txt"));
    REQUIRE(in.good());
    const ParseResult r = parse_delegated(in);
    CHECK(r.issues.empty());
    REQUIRE_FALSE(r.records.empty());

    const auto records = filter_16bit(r.records);
    const AnnualCountSeries in_series =
        build_annual_series(records, "IN", ResourceType::asn, 2012);
    CHECK(in_series.counts.back() == 432);
    const AnnualCountSeries cn =
        build_annual_series(records, "CN", ResourceType::asn, 2012);
    CHECK(cn.counts.back() == 414);
    const AnnualCountSeries tw =
        build_annual_series(records, "TW", ResourceType::asn, 2012);
    CHECK(tw.counts.back() == 207);
}
