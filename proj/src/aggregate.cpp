#include "loadcast/aggregate.hpp"

#include <algorithm>

namespace loadcast {

namespace {

struct PeriodStats {
    double kwh_total = 0.0;
    double temp_max = 0.0, temp_min = 0.0, temp_sum = 0.0;
    double hum_max = 0.0, hum_min = 0.0, hum_sum = 0.0;
    std::size_t n = 0;

    void add(const HourValues& v) {
        kwh_total += v.kwh;
        if (n == 0) {
            temp_max = temp_min = v.temp_f;
            hum_max = hum_min = v.humidity_pct;
        } else {
            temp_max = std::max(temp_max, v.temp_f);
            temp_min = std::min(temp_min, v.temp_f);
            hum_max = std::max(hum_max, v.humidity_pct);
            hum_min = std::min(hum_min, v.humidity_pct);
        }
        temp_sum += v.temp_f;
        hum_sum += v.humidity_pct;
        ++n;
    }

    double temp_avg() const { return temp_sum / static_cast<double>(n); }
    double hum_avg() const { return hum_sum / static_cast<double>(n); }
};

PeriodStats scan(const CleanHourlySeries& series, std::size_t first, std::size_t count) {
    PeriodStats s;
    for (std::size_t i = first; i < first + count; ++i) s.add(series.values[i]);
    return s;
}

void require_day_aligned(const CleanHourlySeries& series, const char* what) {
    if (stamp_hour(series.start) != 0)
        throw DataError(std::string(what) + ": series must start at midnight (starts at " +
                        format_timestamp(series.start) + ")");
    if (series.size() % 24 != 0)
        throw DataError(std::string(what) + ": series covers a partial day (" +
                        std::to_string(series.size()) + " hours)");
}

}  // namespace

const char* scale_name(Scale s) {
    switch (s) {
        case Scale::Hourly: return "hourly";
        case Scale::Daily: return "daily";
        case Scale::Weekly: return "weekly";
        case Scale::Monthly: return "monthly";
    }
    return "?";
}

Scale parse_scale(const std::string& name) {
    if (name == "hourly") return Scale::Hourly;
    if (name == "daily") return Scale::Daily;
    if (name == "weekly") return Scale::Weekly;
    if (name == "monthly") return Scale::Monthly;
    throw ConfigError("unknown scale '" + name + "' (hourly|daily|weekly|monthly)");
}

const std::vector<std::string>& schema_columns(Scale s) {
    static const std::vector<std::string> hourly = {
        "kwh",         "month",       "temp_f",     "humidity_pct",
        "hour_of_day", "day_of_week", "is_weekend", "is_holiday"};
    static const std::vector<std::string> daily = {
        "kwh_total", "temp_max", "temp_min",   "temp_avg",  "hum_max",
        "hum_min",   "hum_avg",  "is_weekend", "is_holiday"};
    static const std::vector<std::string> weekly = {
        "kwh_total", "temp_max", "temp_min", "temp_avg",
        "hum_max",   "hum_min",  "hum_avg",  "holiday_count"};
    static const std::vector<std::string> monthly = {
        "kwh_total", "temp_max", "temp_min",          "temp_avg",     "hum_max",
        "hum_min",   "hum_avg",  "weekend_day_count", "holiday_count"};
    switch (s) {
        case Scale::Hourly: return hourly;
        case Scale::Daily: return daily;
        case Scale::Weekly: return weekly;
        case Scale::Monthly: return monthly;
    }
    return hourly;
}

ScaleDataset build_hourly(const CleanHourlySeries& series, const HolidayCalendar& holidays) {
    ScaleDataset out;
    out.scale = Scale::Hourly;
    out.columns = schema_columns(Scale::Hourly);
    out.rows.reserve(series.size());
    out.period_starts.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const HourStamp t = series.stamp_at(i);
        const Date d = stamp_date(t);
        const HourValues& v = series.values[i];
        out.rows.push_back({v.kwh, static_cast<double>(d.month), v.temp_f, v.humidity_pct,
                            static_cast<double>(stamp_hour(t)),
                            static_cast<double>(day_of_week(d)), is_weekend(d) ? 1.0 : 0.0,
                            holidays.contains(d) ? 1.0 : 0.0});
        out.period_starts.push_back(t);
    }
    return out;
}

ScaleDataset build_daily(const CleanHourlySeries& series, const HolidayCalendar& holidays) {
    require_day_aligned(series, "build_daily");
    ScaleDataset out;
    out.scale = Scale::Daily;
    out.columns = schema_columns(Scale::Daily);
    const std::size_t n_days = series.size() / 24;
    for (std::size_t day = 0; day < n_days; ++day) {
        const HourStamp start = series.stamp_at(day * 24);
        const Date d = stamp_date(start);
        const PeriodStats s = scan(series, day * 24, 24);
        out.rows.push_back({s.kwh_total, s.temp_max, s.temp_min, s.temp_avg(), s.hum_max,
                            s.hum_min, s.hum_avg(), is_weekend(d) ? 1.0 : 0.0,
                            holidays.contains(d) ? 1.0 : 0.0});
        out.period_starts.push_back(start);
    }
    return out;
}

ScaleDataset build_weekly(const CleanHourlySeries& series, const HolidayCalendar& holidays) {
    require_day_aligned(series, "build_weekly");
    const std::size_t n_days = series.size() / 24;
    const std::size_t n_weeks = n_days / 7;
    if (n_weeks == 0)
        throw DataError("build_weekly: series shorter than one 7-day block (" +
                        std::to_string(n_days) + " days)");

    ScaleDataset out;
    out.scale = Scale::Weekly;
    out.columns = schema_columns(Scale::Weekly);
    for (std::size_t week = 0; week < n_weeks; ++week) {
        const HourStamp start = series.stamp_at(week * 168);
        const PeriodStats s = scan(series, week * 168, 168);
        double holiday_count = 0.0;
        for (int day = 0; day < 7; ++day)
            if (holidays.contains(stamp_date(start + day * 24))) holiday_count += 1.0;
        out.rows.push_back({s.kwh_total, s.temp_max, s.temp_min, s.temp_avg(), s.hum_max,
                            s.hum_min, s.hum_avg(), holiday_count});
        out.period_starts.push_back(start);
    }
    return out;
}

ScaleDataset build_monthly(const CleanHourlySeries& series, const HolidayCalendar& holidays) {
    require_day_aligned(series, "build_monthly");
    Date start_date = stamp_date(series.start);
    if (start_date.day != 1)
        throw DataError("build_monthly: series must start on the first of a month (starts " +
                        format_date(start_date) + ")");

    ScaleDataset out;
    out.scale = Scale::Monthly;
    out.columns = schema_columns(Scale::Monthly);
    std::size_t offset = 0;
    Date month_start = start_date;
    while (offset < series.size()) {
        const std::size_t month_hours =
            static_cast<std::size_t>(days_in_month(month_start.year, month_start.month)) * 24;
        if (offset + month_hours > series.size())
            throw DataError("build_monthly: series covers a partial month (" +
                            format_date(month_start) + ")");
        const PeriodStats s = scan(series, offset, month_hours);
        double weekend_days = 0.0, holiday_count = 0.0;
        for (int day = 0; day < days_in_month(month_start.year, month_start.month); ++day) {
            const Date d = civil_from_days(days_from_civil(month_start) + day);
            if (is_weekend(d)) weekend_days += 1.0;
            if (holidays.contains(d)) holiday_count += 1.0;
        }
        out.rows.push_back({s.kwh_total, s.temp_max, s.temp_min, s.temp_avg(), s.hum_max,
                            s.hum_min, s.hum_avg(), weekend_days, holiday_count});
        out.period_starts.push_back(series.stamp_at(offset));

        offset += month_hours;
        month_start = month_start.month == 12 ? Date{month_start.year + 1, 1, 1}
                                              : Date{month_start.year, month_start.month + 1, 1};
    }
    return out;
}

ScaleDataset build_dataset(Scale scale, const CleanHourlySeries& series,
                           const HolidayCalendar& holidays) {
    switch (scale) {
        case Scale::Hourly: return build_hourly(series, holidays);
        case Scale::Daily: return build_daily(series, holidays);
        case Scale::Weekly: return build_weekly(series, holidays);
        case Scale::Monthly: return build_monthly(series, holidays);
    }
    throw ConfigError("build_dataset: unknown scale");
}

}  // namespace loadcast
