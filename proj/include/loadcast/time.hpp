#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "loadcast/error.hpp"

namespace loadcast {

// Naive local calendar time. Hours are counted uniformly with no DST
// adjustment, so every day is exactly 24 hours long.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    auto operator<=>(const Date&) const = default;
};

// Hours since 1970-01-01T00:00.
using HourStamp = std::int64_t;

// Half-open hour range [begin, end).
struct HourRange {
    HourStamp begin = 0;
    HourStamp end = 0;

    std::int64_t count() const { return end - begin; }
    bool contains(HourStamp t) const { return t >= begin && t < end; }
    auto operator<=>(const HourRange&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t days);

// 1 = Monday .. 7 = Sunday.
int day_of_week(const Date& d);

// 1 = January 1st.
int day_of_year(const Date& d);

HourStamp make_stamp(const Date& d, int hour_of_day);
Date stamp_date(HourStamp t);
int stamp_hour(HourStamp t);

// "YYYY-MM-DD"; throws ParseError.
Date parse_date(const std::string& text);
std::string format_date(const Date& d);

// ISO-8601 truncated to the hour: "YYYY-MM-DDTHH:00". Parsing accepts a
// 'T' or space separator, a bare hour, and explicit zero minutes/seconds.
HourStamp parse_timestamp(const std::string& text);
std::string format_timestamp(HourStamp t);

}  // namespace loadcast
