#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loadcast/time.hpp"

namespace loadcast {

// One merged consumption+weather observation. An absent optional means the
// value was missing from the source files.
struct RawHourlyRecord {
    HourStamp t = 0;
    std::optional<double> kwh;
    std::optional<double> temp_f;
    std::optional<double> humidity_pct;
};

struct HourValues {
    double kwh = 0.0;
    double temp_f = 0.0;
    double humidity_pct = 0.0;
};

// Gap-free repaired series, one entry per hour from `start`.
struct CleanHourlySeries {
    HourStamp start = 0;
    std::vector<HourValues> values;

    std::size_t size() const { return values.size(); }
    HourStamp stamp_at(std::size_t i) const { return start + static_cast<HourStamp>(i); }
};

enum class Field { Kwh, TempF, HumidityPct };
const char* field_name(Field f);

struct SentinelHit {
    HourStamp t = 0;
    Field field = Field::Kwh;
};

struct ContinuityReport {
    HourRange range;
    std::int64_t expected_count = 0;
    std::int64_t actual_count = 0;
    std::vector<HourStamp> point_gaps;          // isolated single missing hours
    std::vector<HourRange> block_gaps;           // runs of >= 2 missing hours
    std::vector<SentinelHit> sentinel_hits;

    bool clean() const {
        return point_gaps.empty() && block_gaps.empty() && sentinel_hits.empty();
    }
};

struct ParsedHourly {
    std::vector<RawHourlyRecord> records;  // sorted, one per present hour in range
    ContinuityReport report;
};

// Sentinel predicates: the -999.99 failure marker (within 1e-6), negative
// consumption, humidity outside [0, 100].
bool is_sentinel_value(Field field, double value);

// Consumption CSV: header "timestamp,kwh". Weather CSV: header
// "timestamp,temp_f,humidity_pct". An hour missing from either source is a
// gap. Throws ParseError (with line numbers) and DataError on duplicates.
ParsedHourly parse_hourly_text(const std::string& consumption_csv,
                               const std::string& weather_csv, const HourRange& range,
                               const std::string& consumption_name = "consumption",
                               const std::string& weather_name = "weather");
ParsedHourly parse_hourly_files(const std::filesystem::path& consumption_file,
                                const std::filesystem::path& weather_file,
                                const HourRange& range);

// Recompute gaps and sentinels for an in-memory record set.
ContinuityReport scan_records(const std::vector<RawHourlyRecord>& records,
                              const HourRange& range);

// Fill each sentinel field and each isolated single-hour gap with the mean of
// the valid values at t-2h, t-1h, t+1h, t+2h (window clipped at the range
// boundary). All repairs read pre-repair data.
std::vector<RawHourlyRecord> repair_local(const std::vector<RawHourlyRecord>& records,
                                          const ContinuityReport& report);

// Fill each hour of a multi-hour gap with the mean of the valid values at the
// same hour of day on days d-2, d-1, d+1, d+2.
std::vector<RawHourlyRecord> repair_block(const std::vector<RawHourlyRecord>& records,
                                          const ContinuityReport& report);

// Requires a fully repaired record set covering the range.
CleanHourlySeries finalize_series(const std::vector<RawHourlyRecord>& records,
                                  const HourRange& range);

struct IngestResult {
    CleanHourlySeries series;
    ContinuityReport report;  // as found before repair
};

// parse -> repair_local -> repair_block -> finalize.
IngestResult ingest_and_repair(const std::filesystem::path& consumption_file,
                               const std::filesystem::path& weather_file,
                               const HourRange& range);
IngestResult ingest_and_repair_text(const std::string& consumption_csv,
                                    const std::string& weather_csv, const HourRange& range);

}  // namespace loadcast
