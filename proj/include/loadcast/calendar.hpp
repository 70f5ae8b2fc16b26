#pragma once

#include <filesystem>
#include <set>
#include <vector>

#include "loadcast/time.hpp"

namespace loadcast {

// Set of holiday dates loaded from a one-ISO-date-per-line file
// ('#' starts a comment).
struct HolidayCalendar {
    std::set<Date> dates;

    bool contains(const Date& d) const { return dates.count(d) != 0; }

    // Holidays falling outside the given range; callers surface these as
    // warnings.
    std::vector<Date> outside_range(const HourRange& range) const;
};

bool is_weekend(const Date& d);

HolidayCalendar parse_holidays(const std::string& text, const std::string& source_name);
HolidayCalendar load_holidays(const std::filesystem::path& file);

// Number of whole hours in [start, end); throws ConfigError on an inverted
// range.
std::int64_t expected_hour_count(const HourRange& range);

}  // namespace loadcast
