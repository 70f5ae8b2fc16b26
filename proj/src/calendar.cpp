#include "loadcast/calendar.hpp"

#include "loadcast/text.hpp"

namespace loadcast {

std::vector<Date> HolidayCalendar::outside_range(const HourRange& range) const {
    std::vector<Date> out;
    for (const Date& d : dates) {
        const HourStamp day_start = make_stamp(d, 0);
        if (day_start + 23 < range.begin || day_start >= range.end) out.push_back(d);
    }
    return out;
}

bool is_weekend(const Date& d) {
    const int dow = day_of_week(d);
    return dow == 6 || dow == 7;
}

HolidayCalendar parse_holidays(const std::string& text, const std::string& source_name) {
    HolidayCalendar cal;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        std::string_view body = line.substr(0, line.find('#'));
        const std::string entry = trim(body);
        if (entry.empty()) return;
        try {
            cal.dates.insert(parse_date(entry));
        } catch (const ParseError& e) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    });
    return cal;
}

HolidayCalendar load_holidays(const std::filesystem::path& file) {
    return parse_holidays(read_text_file(file), file.string());
}

std::int64_t expected_hour_count(const HourRange& range) {
    if (range.end < range.begin)
        throw ConfigError("inverted hour range: " + format_timestamp(range.begin) + " .. " +
                          format_timestamp(range.end));
    return range.count();
}

}  // namespace loadcast
