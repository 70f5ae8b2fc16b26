#include "loadcast/time.hpp"

#include <charconv>
#include <cstdio>

namespace loadcast {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool parse_int(std::string_view text, int& out) {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && p == text.data() + text.size();
}

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

std::int64_t days_from_civil(const Date& d) {
    int y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned day = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (month <= 2)), static_cast<int>(month),
                static_cast<int>(day)};
}

int day_of_week(const Date& d) {
    const std::int64_t z = days_from_civil(d);
    // 1970-01-01 was a Thursday.
    const int weekday = static_cast<int>(((z % 7) + 11) % 7);  // 0 = Sunday
    return weekday == 0 ? 7 : weekday;
}

int day_of_year(const Date& d) {
    return static_cast<int>(days_from_civil(d) - days_from_civil(Date{d.year, 1, 1})) + 1;
}

HourStamp make_stamp(const Date& d, int hour_of_day) {
    return days_from_civil(d) * 24 + hour_of_day;
}

Date stamp_date(HourStamp t) { return civil_from_days(floor_div(t, 24)); }

int stamp_hour(HourStamp t) {
    return static_cast<int>(t - floor_div(t, 24) * 24);
}

Date parse_date(const std::string& text) {
    const std::string s = text;
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        !parse_int(std::string_view(s).substr(0, 4), y) ||
        !parse_int(std::string_view(s).substr(5, 2), m) ||
        !parse_int(std::string_view(s).substr(8, 2), d))
        throw ParseError("invalid date '" + text + "' (expected YYYY-MM-DD)");
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        throw ParseError("invalid date '" + text + "' (out-of-range month or day)");
    return Date{y, m, d};
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

HourStamp parse_timestamp(const std::string& text) {
    if (text.size() < 13 || (text[10] != 'T' && text[10] != ' '))
        throw ParseError("invalid timestamp '" + text + "' (expected YYYY-MM-DDTHH:00)");
    const Date date = parse_date(text.substr(0, 10));
    const std::string rest = text.substr(11);
    int hour = 0;
    if (rest.size() < 2 || !parse_int(std::string_view(rest).substr(0, 2), hour))
        throw ParseError("invalid timestamp '" + text + "' (bad hour)");
    if (hour < 0 || hour > 23)
        throw ParseError("invalid timestamp '" + text + "' (hour out of range)");
    // Anything after the hour must be zero minutes/seconds.
    std::string_view tail = std::string_view(rest).substr(2);
    if (!tail.empty() && tail != ":00" && tail != ":00:00")
        throw ParseError("invalid timestamp '" + text + "' (not aligned to a whole hour)");
    return make_stamp(date, hour);
}

std::string format_timestamp(HourStamp t) {
    const Date d = stamp_date(t);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00", d.year, d.month, d.day,
                  stamp_hour(t));
    return buf;
}

}  // namespace loadcast
