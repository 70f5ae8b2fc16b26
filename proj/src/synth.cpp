#include "loadcast/synth.hpp"

#include <algorithm>
#include <cmath>

#include "loadcast/rng.hpp"
#include "loadcast/text.hpp"

namespace loadcast {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double season_phase(const Date& d, int hour) {
    return (static_cast<double>(day_of_year(d) - 1) + hour / 24.0) / 365.25;
}

}  // namespace

void SynthConfig::validate() const {
    if (range.end <= range.begin) throw ConfigError("synth: range must be nonempty");
    if (noise_sd < 0.0) throw ConfigError("synth: noise_sd must be >= 0");
    if (gap_rate < 0.0 || gap_rate >= 1.0 || sentinel_rate < 0.0 || sentinel_rate >= 1.0)
        throw ConfigError("synth: gap_rate and sentinel_rate must lie in [0, 1)");
}

SynthOutput generate(const SynthConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.range.count());

    SynthOutput out;
    // Fixed-date holidays for every year the range touches.
    const int first_year = stamp_date(config.range.begin).year;
    const int last_year = stamp_date(config.range.end - 1).year;
    out.holiday_file = "# synthetic holiday calendar\n";
    for (int year = first_year; year <= last_year; ++year) {
        for (const auto& [month, day] :
             {std::pair{1, 1}, {7, 4}, {12, 24}, {12, 25}, {12, 31}}) {
            const Date d{year, month, day};
            const HourStamp day_start = make_stamp(d, 0);
            if (day_start + 23 < config.range.begin || day_start >= config.range.end) continue;
            out.holidays.dates.insert(d);
            out.holiday_file += format_date(d) + "\n";
        }
    }

    Rng rng(config.seed);
    out.ground_truth.start = config.range.begin;
    out.ground_truth.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const HourStamp t = config.range.begin + static_cast<HourStamp>(i);
        const Date d = stamp_date(t);
        const int h = stamp_hour(t);
        const double phase = season_phase(d, h);

        const double temp = 65.0 - 18.0 * std::cos(kTwoPi * phase) +
                            8.0 * std::sin(kTwoPi * (h - 9) / 24.0);
        const double hum = std::clamp(
            70.0 - 0.6 * (temp - 65.0) + 12.0 * std::sin(kTwoPi * (h - 4) / 24.0), 0.0, 100.0);

        const double diurnal = std::sin(kTwoPi * (h - 12) / 24.0);  // evening peak
        const double seasonal = -std::cos(kTwoPi * phase);          // summer peak
        const double noise = rng.gaussian(0.0, config.noise_sd);

        const double kwh = std::max(
            0.0, config.base_kwh + config.temp_coeff * temp +
                     config.weekend_coeff * (is_weekend(d) ? 1.0 : 0.0) +
                     config.holiday_coeff * (out.holidays.contains(d) ? 1.0 : 0.0) +
                     config.daily_amplitude * diurnal +
                     config.seasonal_amplitude * seasonal + noise);
        out.ground_truth.values.push_back(HourValues{kwh, temp, hum});
    }

    // Corruption pass. All draws happen for every hour so the stream layout
    // is independent of the rates.
    std::vector<int> sentinel_field(n, -1);
    std::vector<bool> gapped(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double u_gap = rng.uniform01();
        const double u_sentinel = rng.uniform01();
        const double u_field = rng.uniform01();
        const bool eligible = i >= 48 && i + 48 < n;
        if (!eligible) continue;
        if (u_gap < config.gap_rate) {
            gapped[i] = true;
            out.injected_gaps.push_back(config.range.begin + static_cast<HourStamp>(i));
        } else if (u_sentinel < config.sentinel_rate) {
            const Field field = u_field < 0.5 ? Field::TempF : Field::HumidityPct;
            sentinel_field[i] = static_cast<int>(field);
            out.injected_sentinels.push_back(
                SentinelHit{config.range.begin + static_cast<HourStamp>(i), field});
        }
    }

    out.consumption_csv = "timestamp,kwh\n";
    out.weather_csv = "timestamp,temp_f,humidity_pct\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (gapped[i]) continue;
        const std::string ts = format_timestamp(config.range.begin + static_cast<HourStamp>(i));
        const HourValues& v = out.ground_truth.values[i];
        double temp = v.temp_f, hum = v.humidity_pct;
        if (sentinel_field[i] == static_cast<int>(Field::TempF)) temp = -999.99;
        if (sentinel_field[i] == static_cast<int>(Field::HumidityPct)) hum = -999.99;
        out.consumption_csv += ts + "," + format_double(v.kwh) + "\n";
        out.weather_csv += ts + "," + format_double(temp) + "," + format_double(hum) + "\n";
    }
    return out;
}

}  // namespace loadcast
