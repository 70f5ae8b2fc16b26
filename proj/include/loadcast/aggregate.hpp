#pragma once

#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/ingest.hpp"

namespace loadcast {

enum class Scale { Hourly, Daily, Weekly, Monthly };

const char* scale_name(Scale s);
Scale parse_scale(const std::string& name);  // throws ConfigError

// Column names of each dataset schema. Column 0 is always the consumption
// target; the remaining columns are the scale's context factors.
//   hourly : kwh, month, temp_f, humidity_pct, hour_of_day, day_of_week,
//            is_weekend, is_holiday                                  (8)
//   daily  : kwh_total, temp_max, temp_min, temp_avg, hum_max, hum_min,
//            hum_avg, is_weekend, is_holiday                         (9)
//   weekly : kwh_total, temp_max, temp_min, temp_avg, hum_max, hum_min,
//            hum_avg, holiday_count                                  (8)
//   monthly: kwh_total, temp_max, temp_min, temp_avg, hum_max, hum_min,
//            hum_avg, weekend_day_count, holiday_count               (9)
const std::vector<std::string>& schema_columns(Scale s);

struct ScaleDataset {
    Scale scale = Scale::Hourly;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // chronological, schema order
    std::vector<HourStamp> period_starts;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return columns.size(); }
};

ScaleDataset build_hourly(const CleanHourlySeries& series, const HolidayCalendar& holidays);

// Requires a midnight-aligned series covering whole days.
ScaleDataset build_daily(const CleanHourlySeries& series, const HolidayCalendar& holidays);

// Consecutive 7-day blocks anchored at the series start; a trailing partial
// week is dropped.
ScaleDataset build_weekly(const CleanHourlySeries& series, const HolidayCalendar& holidays);

// Calendar-month boundaries; requires whole months.
ScaleDataset build_monthly(const CleanHourlySeries& series, const HolidayCalendar& holidays);

ScaleDataset build_dataset(Scale scale, const CleanHourlySeries& series,
                           const HolidayCalendar& holidays);

}  // namespace loadcast
