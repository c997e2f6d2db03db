#include "asgrowth/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "asgrowth/errors.hpp"

namespace asgrowth::ingest {

namespace {

constexpr std::uint64_t kAsnLimit = 1ull << 32;

std::vector<std::string_view> split_pipes(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t bar = line.find('|', pos);
        if (bar == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, bar - pos));
        pos = bar + 1;
    }
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (!all_digits(s)) return std::nullopt;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

bool looks_like_version_header(const std::vector<std::string_view>& f) {
    if (f.size() != 7 || f[0].empty()) return false;
    return std::all_of(f[0].begin(), f[0].end(), [](unsigned char c) {
        return std::isdigit(c) || c == '.';
    });
}

bool is_summary_line(const std::vector<std::string_view>& f) {
    if (f.size() >= 2 && f[1] == "*") return true;
    return f.size() >= 6 && f.back() == "summary";
}

std::optional<ResourceType> parse_type(std::string_view s) {
    if (s == "asn") return ResourceType::asn;
    if (s == "ipv4") return ResourceType::ipv4;
    if (s == "ipv6") return ResourceType::ipv6;
    return std::nullopt;
}

std::optional<RecordStatus> parse_status(std::string_view s) {
    if (s == "allocated") return RecordStatus::allocated;
    if (s == "assigned") return RecordStatus::assigned;
    if (s == "reserved") return RecordStatus::reserved;
    if (s == "available") return RecordStatus::available;
    return std::nullopt;
}

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

// Either records the issue or throws, depending on strictness.
void report(std::vector<ParseIssue>& issues, const ParseOptions& opts,
            std::size_t line_number, std::string reason) {
    if (opts.strict) throw MalformedRecord(line_number, reason);
    issues.push_back({line_number, std::move(reason)});
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string_view to_string(ResourceType t) {
    switch (t) {
        case ResourceType::asn: return "asn";
        case ResourceType::ipv4: return "ipv4";
        case ResourceType::ipv6: return "ipv6";
    }
    return "asn";
}

std::string_view to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::allocated: return "allocated";
        case RecordStatus::assigned: return "assigned";
        case RecordStatus::reserved: return "reserved";
        case RecordStatus::available: return "available";
    }
    return "allocated";
}

std::optional<std::chrono::year_month_day> parse_yyyymmdd(
    std::string_view text) {
    if (text.size() != 8 || !all_digits(text)) return std::nullopt;
    const int y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 +
                  (text[2] - '0') * 10 + (text[3] - '0');
    const unsigned m = unsigned((text[4] - '0') * 10 + (text[5] - '0'));
    const unsigned d = unsigned((text[6] - '0') * 10 + (text[7] - '0'));
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

std::string serialize(const DelegatedRecord& r) {
    std::string out;
    out.reserve(64);
    out += r.registry;
    out += '|';
    out += r.country_code;
    out += '|';
    out += to_string(r.resource_type);
    out += '|';
    out += r.start_text;
    out += '|';
    out += std::to_string(r.value);
    out += '|';
    out += r.date_text;
    out += '|';
    out += to_string(r.status);
    if (r.extensions) {
        out += '|';
        out += *r.extensions;
    }
    return out;
}

ParseResult parse_delegated(std::istream& in, const ParseOptions& opts) {
    ParseResult result;
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string_view line = strip_cr(raw);
        if (is_blank(line) || line.front() == '#') continue;

        const auto f = split_pipes(line);
        if (is_summary_line(f)) {
            ++result.summary_lines;
            continue;
        }
        if (!result.version_header && result.records.empty() &&
            looks_like_version_header(f)) {
            result.version_header = std::string(line);
            continue;
        }
        if (f.size() < 7) {
            report(result.issues, opts, line_number,
                   "expected at least 7 pipe-separated fields, got " +
                       std::to_string(f.size()));
            continue;
        }

        DelegatedRecord rec;
        rec.registry = std::string(f[0]);
        rec.country_code = std::string(f[1]);
        if (rec.registry.empty()) {
            report(result.issues, opts, line_number, "empty registry field");
            continue;
        }
        if (rec.country_code.size() != 2) {
            report(result.issues, opts, line_number,
                   "country code must be 2 characters, got '" +
                       rec.country_code + "'");
            continue;
        }

        const auto type = parse_type(f[2]);
        if (!type) {
            report(result.issues, opts, line_number,
                   "unknown resource type '" + std::string(f[2]) + "'");
            continue;
        }
        rec.resource_type = *type;

        rec.start_text = std::string(f[3]);
        if (rec.start_text.empty()) {
            report(result.issues, opts, line_number, "empty start field");
            continue;
        }
        if (rec.resource_type == ResourceType::asn) {
            const auto asn = parse_uint(f[3]);
            if (!asn || *asn >= kAsnLimit) {
                report(result.issues, opts, line_number,
                       "start is not a valid ASN: '" + rec.start_text + "'");
                continue;
            }
            rec.start_asn = *asn;
        }

        const auto value = parse_uint(f[4]);
        if (!value || *value == 0) {
            report(result.issues, opts, line_number,
                   "value must be a positive integer, got '" +
                       std::string(f[4]) + "'");
            continue;
        }
        rec.value = *value;

        const auto status = parse_status(f[6]);
        if (!status) {
            report(result.issues, opts, line_number,
                   "unknown status '" + std::string(f[6]) + "'");
            continue;
        }
        rec.status = *status;

        rec.date_text = std::string(f[5]);
        const bool sentinel = rec.date_text.empty() ||
                              rec.date_text == "00000000";
        if (sentinel) {
            // only reserved/available stock may carry a sentinel date
            if (rec.counts_as_assigned()) {
                report(result.issues, opts, line_number,
                       "allocated/assigned record without a date");
                continue;
            }
        } else {
            rec.date = parse_yyyymmdd(rec.date_text);
            if (!rec.date) {
                report(result.issues, opts, line_number,
                       "invalid date '" + rec.date_text + "'");
                continue;
            }
        }

        if (f.size() > 7) {
            std::string ext(f[7]);
            for (std::size_t i = 8; i < f.size(); ++i) {
                ext += '|';
                ext += f[i];
            }
            rec.extensions = std::move(ext);
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

ParseResult parse_delegated(std::string_view text, const ParseOptions& opts) {
    std::istringstream in{std::string(text)};
    return parse_delegated(in, opts);
}

Series AnnualCountSeries::to_series() const {
    std::vector<double> v(counts.begin(), counts.end());
    return Series(std::move(v), start_year);
}

AnnualCountSeries build_annual_series(
    const std::vector<DelegatedRecord>& records, std::string_view country,
    ResourceType type, int end_year) {
    const bool all = country == kAllCountries;
    std::map<int, std::uint64_t> per_year;
    for (const DelegatedRecord& r : records) {
        if (r.resource_type != type || !r.counts_as_assigned() || !r.date)
            continue;
        if (!all && !iequal(r.country_code, country)) continue;
        per_year[int(r.date->year())] += r.value;
    }
    if (per_year.empty())
        throw NoRecords("no allocated/assigned " +
                        std::string(to_string(type)) + " records for '" +
                        std::string(country) + "'");

    AnnualCountSeries s;
    s.label = all ? "*" : std::string(country);
    for (char& c : s.label)
        c = char(std::toupper(static_cast<unsigned char>(c)));
    s.start_year = per_year.begin()->first;
    if (end_year < s.start_year)
        throw DomainError("end_year " + std::to_string(end_year) +
                          " precedes first allocation year " +
                          std::to_string(s.start_year));
    s.counts.resize(std::size_t(end_year - s.start_year) + 1, 0);
    for (const auto& [year, count] : per_year) {
        if (year > end_year) continue;
        s.counts[std::size_t(year - s.start_year)] += count;
    }
    std::uint64_t running = 0;
    for (std::uint64_t& c : s.counts) {
        running += c;
        c = running;
    }
    return s;
}

std::vector<DelegatedRecord> filter_16bit(
    const std::vector<DelegatedRecord>& records) {
    std::vector<DelegatedRecord> out;
    out.reserve(records.size());
    for (const DelegatedRecord& r : records) {
        if (r.resource_type == ResourceType::asn && r.start_asn >= 65536)
            continue;
        out.push_back(r);
    }
    return out;
}

std::set<std::uint32_t> country_asn_set(
    const std::vector<DelegatedRecord>& records, std::string_view country,
    std::optional<std::chrono::year_month_day> as_of) {
    const bool all = country == kAllCountries;
    std::set<std::uint32_t> out;
    for (const DelegatedRecord& r : records) {
        if (r.resource_type != ResourceType::asn || !r.counts_as_assigned() ||
            !r.date)
            continue;
        if (!all && !iequal(r.country_code, country)) continue;
        if (as_of && *r.date > *as_of) continue;
        const std::uint64_t last =
            std::min(r.start_asn + r.value - 1, kAsnLimit - 1);
        for (std::uint64_t a = r.start_asn; a <= last; ++a)
            out.insert(std::uint32_t(a));
    }
    return out;
}

AsnTotals asn_totals(const std::vector<DelegatedRecord>& records,
                     std::string_view country,
                     std::optional<std::chrono::year_month_day> as_of) {
    const bool all = country == kAllCountries;
    AsnTotals t;
    for (const DelegatedRecord& r : records) {
        if (r.resource_type != ResourceType::asn) continue;
        if (!all && !iequal(r.country_code, country)) continue;
        if (as_of && r.date && *r.date > *as_of) continue;
        t.registered += r.value;
        if (r.counts_as_assigned()) t.assigned += r.value;
    }
    return t;
}

SnapshotParseResult parse_snapshot(std::istream& in,
                                   std::chrono::year_month_day date,
                                   const ParseOptions& opts) {
    SnapshotParseResult result;
    result.snapshot.date = date;
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string_view line = strip_cr(raw);
        if (is_blank(line) || line.front() == '#') continue;
        // tolerate surrounding whitespace around the number
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1])))
            --e;
        const auto asn = parse_uint(line.substr(b, e - b));
        if (!asn || *asn >= kAsnLimit) {
            report(result.issues, opts, line_number,
                   "not an ASN: '" + std::string(line.substr(b, e - b)) + "'");
            continue;
        }
        result.snapshot.asns.insert(std::uint32_t(*asn));
    }
    return result;
}

SnapshotParseResult parse_snapshot(std::string_view text,
                                   std::chrono::year_month_day date,
                                   const ParseOptions& opts) {
    std::istringstream in{std::string(text)};
    return parse_snapshot(in, date, opts);
}

}  // namespace asgrowth::ingest
