#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asgrowth/series.hpp"

namespace asgrowth::ingest {

enum class ResourceType { asn, ipv4, ipv6 };
enum class RecordStatus { allocated, assigned, reserved, available };

std::string_view to_string(ResourceType t);
std::string_view to_string(RecordStatus s);

/// Parses "YYYYMMDD"; nullopt when the text is not a valid calendar date.
std::optional<std::chrono::year_month_day> parse_yyyymmdd(std::string_view text);

/// One resource line of an RIR delegated-statistics file:
/// registry|cc|type|start|value|date|status[|extensions].
struct DelegatedRecord {
    std::string registry;
    std::string country_code;
    ResourceType resource_type = ResourceType::asn;
    std::string start_text;              // verbatim start field
    std::uint64_t start_asn = 0;         // parsed when resource_type is asn
    std::uint64_t value = 0;             // number of resources in the block
    std::string date_text;               // verbatim date field
    std::optional<std::chrono::year_month_day> date;  // nullopt: sentinel
    RecordStatus status = RecordStatus::allocated;
    std::optional<std::string> extensions;

    /// allocated and assigned records count toward a country's totals.
    bool counts_as_assigned() const {
        return status == RecordStatus::allocated ||
               status == RecordStatus::assigned;
    }
};

/// Re-emits the record in delegated format.  Parsing a valid line and
/// serializing the result reproduces the original fields byte for byte.
std::string serialize(const DelegatedRecord& r);

struct ParseIssue {
    std::size_t line_number = 0;
    std::string reason;
};

struct ParseOptions {
    bool strict = false;  // strict: throw MalformedRecord at the first issue
};

struct ParseResult {
    std::vector<DelegatedRecord> records;
    std::vector<ParseIssue> issues;
    std::optional<std::string> version_header;
    std::size_t summary_lines = 0;
};

ParseResult parse_delegated(std::istream& in, const ParseOptions& opts = {});
ParseResult parse_delegated(std::string_view text,
                            const ParseOptions& opts = {});

/// Matches every country when passed as the country argument below.
inline constexpr std::string_view kAllCountries = "*";

/// Cumulative resource count per year for one country (or the whole file).
struct AnnualCountSeries {
    std::string label;
    int start_year = 0;               // year of the earliest allocation
    std::vector<std::uint64_t> counts;  // cumulative, one entry per year

    Series to_series() const;
};

/// Builds the cumulative annual count of allocated+assigned resources,
/// weighted by each record's value field.  country may be a 2-letter code
/// (case-insensitive) or kAllCountries.  Throws NoRecords when nothing
/// matches and DomainError when end_year precedes the first allocation.
AnnualCountSeries build_annual_series(
    const std::vector<DelegatedRecord>& records, std::string_view country,
    ResourceType type, int end_year);

/// Keeps only records usable in a 16-bit-ASN analysis: non-ASN records
/// pass through, ASN records must start below 65536.
std::vector<DelegatedRecord> filter_16bit(
    const std::vector<DelegatedRecord>& records);

/// The set of ASNs assigned or allocated to a country, optionally as of a
/// date (records dated later are excluded).  Blocks expand to
/// start .. start+value-1.
std::set<std::uint32_t> country_asn_set(
    const std::vector<DelegatedRecord>& records, std::string_view country,
    std::optional<std::chrono::year_month_day> as_of = std::nullopt);

struct AsnTotals {
    std::uint64_t registered = 0;  // every ASN record, any status
    std::uint64_t assigned = 0;    // allocated + assigned only
};

/// Value-weighted ASN totals for a country as of a date.  Sentinel-dated
/// reserved/available records always count as registered.
AsnTotals asn_totals(const std::vector<DelegatedRecord>& records,
                     std::string_view country,
                     std::optional<std::chrono::year_month_day> as_of =
                         std::nullopt);

/// A routing-table snapshot: the set of origin ASNs visible on a date.
struct RouteviewSnapshot {
    std::chrono::year_month_day date{};
    std::set<std::uint32_t> asns;
};

struct SnapshotParseResult {
    RouteviewSnapshot snapshot;
    std::vector<ParseIssue> issues;  // non-numeric lines (non-strict mode)
};

/// Parses one ASN per line; blank lines and '#' comments are skipped.
/// Non-numeric lines throw MalformedRecord in strict mode and are
/// collected as issues otherwise.
SnapshotParseResult parse_snapshot(std::istream& in,
                                   std::chrono::year_month_day date,
                                   const ParseOptions& opts = {});
SnapshotParseResult parse_snapshot(std::string_view text,
                                   std::chrono::year_month_day date,
                                   const ParseOptions& opts = {});

}  // namespace asgrowth::ingest
