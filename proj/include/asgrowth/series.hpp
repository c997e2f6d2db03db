#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

namespace asgrowth {

/// A real-valued series observed at consecutive integer steps.  When the
/// series is annual, origin_year is the calendar year of values[0].
struct Series {
    std::vector<double> values;
    std::optional<int> origin_year;

    Series() = default;
    Series(std::vector<double> v, std::optional<int> year = std::nullopt)
        : values(std::move(v)), origin_year(year) {}
    Series(std::initializer_list<double> v) : values(v) {}

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }

    /// Calendar year of values[i]; valid only when origin_year is set.
    int year_at(std::size_t i) const { return *origin_year + int(i); }
};

}  // namespace asgrowth
