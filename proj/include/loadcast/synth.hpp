#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/ingest.hpp"

namespace loadcast {

// Deterministic synthetic smart-meter generator. Consumption is a linear
// combination of known factors, so experiments on generated data have a
// known correct importance ordering.
struct SynthConfig {
    HourRange range;
    double base_kwh = 1.2;
    double temp_coeff = 0.03;  // kWh per degF
    double weekend_coeff = 0.4;
    double holiday_coeff = 0.6;
    double daily_amplitude = 0.5;
    double seasonal_amplitude = 0.4;
    double noise_sd = 0.05;
    std::uint64_t seed = 1;
    double gap_rate = 0.0;       // per-hour probability of dropping the hour
    double sentinel_rate = 0.0;  // per-hour probability of a -999.99 field

    void validate() const;  // throws ConfigError
};

struct SynthOutput {
    std::string consumption_csv;
    std::string weather_csv;
    std::string holiday_file;
    HolidayCalendar holidays;
    CleanHourlySeries ground_truth;  // pre-injection values
    std::vector<HourStamp> injected_gaps;
    std::vector<SentinelHit> injected_sentinels;
};

// Corruption is only injected at least 48 hours from either end of the
// range, so generated files are always repairable.
SynthOutput generate(const SynthConfig& config);

}  // namespace loadcast
