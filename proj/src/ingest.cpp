#include "loadcast/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "loadcast/text.hpp"

namespace loadcast {

namespace {

constexpr double kSentinel = -999.99;
constexpr double kSentinelTolerance = 1e-6;

// Dense per-hour view over the range. Index = t - range.begin.
struct DenseCells {
    HourRange range;
    std::vector<std::optional<RawHourlyRecord>> cells;

    explicit DenseCells(const HourRange& r)
        : range(r), cells(static_cast<std::size_t>(r.count())) {}

    static DenseCells from_records(const std::vector<RawHourlyRecord>& records,
                                   const HourRange& range) {
        DenseCells d(range);
        for (const RawHourlyRecord& rec : records) {
            if (!range.contains(rec.t))
                throw DataError("record at " + format_timestamp(rec.t) +
                                " falls outside the requested range");
            auto& cell = d.cells[static_cast<std::size_t>(rec.t - range.begin)];
            if (cell.has_value())
                throw DataError("duplicate timestamp " + format_timestamp(rec.t));
            cell = rec;
        }
        return d;
    }

    std::vector<RawHourlyRecord> to_records() const {
        std::vector<RawHourlyRecord> out;
        for (const auto& c : cells)
            if (c.has_value()) out.push_back(*c);
        return out;
    }

    // A field value usable as a repair source: present and non-sentinel.
    std::optional<double> valid_value(std::int64_t index, Field field) const {
        if (index < 0 || index >= static_cast<std::int64_t>(cells.size())) return std::nullopt;
        const auto& cell = cells[static_cast<std::size_t>(index)];
        if (!cell.has_value()) return std::nullopt;
        const std::optional<double>* slot = nullptr;
        switch (field) {
            case Field::Kwh: slot = &cell->kwh; break;
            case Field::TempF: slot = &cell->temp_f; break;
            case Field::HumidityPct: slot = &cell->humidity_pct; break;
        }
        if (!slot->has_value() || is_sentinel_value(field, **slot)) return std::nullopt;
        return **slot;
    }

    std::optional<double> mean_over(std::int64_t index, Field field,
                                    std::initializer_list<std::int64_t> offsets) const {
        double sum = 0.0;
        int n = 0;
        for (std::int64_t off : offsets) {
            if (auto v = valid_value(index + off, field)) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / n;
    }
};

void set_field(RawHourlyRecord& rec, Field field, double value) {
    switch (field) {
        case Field::Kwh: rec.kwh = value; break;
        case Field::TempF: rec.temp_f = value; break;
        case Field::HumidityPct: rec.humidity_pct = value; break;
    }
}

struct ParsedColumn {
    std::vector<std::optional<double>> first;   // kwh or temp_f
    std::vector<std::optional<double>> second;  // humidity_pct
};

// Parses one of the two source CSVs into dense per-hour slots.
ParsedColumn parse_source(const std::string& csv, const std::string& name,
                          const std::vector<std::string>& expected_header,
                          const HourRange& range) {
    ParsedColumn out;
    const auto n = static_cast<std::size_t>(range.count());
    out.first.resize(n);
    if (expected_header.size() == 3) out.second.resize(n);

    bool header_seen = false;
    for_each_line(csv, [&](std::size_t line_no, std::string_view line) {
        if (trim(line).empty()) return;
        const std::string where = name + ":" + std::to_string(line_no);
        std::vector<std::string> fields = split(line, ',');
        if (!header_seen) {
            if (fields.size() != expected_header.size())
                throw ParseError(where + ": bad header (expected " +
                                 std::to_string(expected_header.size()) + " columns)");
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (trim(fields[i]) != expected_header[i])
                    throw ParseError(where + ": unexpected header column '" + trim(fields[i]) +
                                     "' (expected '" + expected_header[i] + "')");
            header_seen = true;
            return;
        }
        if (fields.size() != expected_header.size())
            throw ParseError(where + ": expected " + std::to_string(expected_header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        HourStamp t = 0;
        try {
            t = parse_timestamp(trim(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!range.contains(t)) return;  // outside the requested range
        const auto idx = static_cast<std::size_t>(t - range.begin);
        if (out.first[idx].has_value())
            throw ParseError(where + ": duplicate timestamp " + format_timestamp(t));
        out.first[idx] = parse_double_field(fields[1], where);
        if (expected_header.size() == 3)
            out.second[idx] = parse_double_field(fields[2], where);
    });
    return out;
}

}  // namespace

const char* field_name(Field f) {
    switch (f) {
        case Field::Kwh: return "kwh";
        case Field::TempF: return "temp_f";
        case Field::HumidityPct: return "humidity_pct";
    }
    return "?";
}

bool is_sentinel_value(Field field, double value) {
    if (std::abs(value - kSentinel) <= kSentinelTolerance) return true;
    if (field == Field::Kwh && value < 0.0) return true;
    if (field == Field::HumidityPct && (value < 0.0 || value > 100.0)) return true;
    return false;
}

ParsedHourly parse_hourly_text(const std::string& consumption_csv,
                               const std::string& weather_csv, const HourRange& range,
                               const std::string& consumption_name,
                               const std::string& weather_name) {
    if (range.end < range.begin) throw ConfigError("inverted hour range");

    const ParsedColumn cons =
        parse_source(consumption_csv, consumption_name, {"timestamp", "kwh"}, range);
    const ParsedColumn weather = parse_source(
        weather_csv, weather_name, {"timestamp", "temp_f", "humidity_pct"}, range);

    ParsedHourly out;
    const auto n = static_cast<std::size_t>(range.count());
    for (std::size_t i = 0; i < n; ++i) {
        // An hour missing from either source is a gap for the whole hour.
        if (!cons.first[i].has_value() || !weather.first[i].has_value()) continue;
        RawHourlyRecord rec;
        rec.t = range.begin + static_cast<HourStamp>(i);
        rec.kwh = cons.first[i];
        rec.temp_f = weather.first[i];
        rec.humidity_pct = weather.second[i];
        out.records.push_back(rec);
    }
    out.report = scan_records(out.records, range);
    return out;
}

ParsedHourly parse_hourly_files(const std::filesystem::path& consumption_file,
                                const std::filesystem::path& weather_file,
                                const HourRange& range) {
    return parse_hourly_text(read_text_file(consumption_file), read_text_file(weather_file),
                             range, consumption_file.string(), weather_file.string());
}

ContinuityReport scan_records(const std::vector<RawHourlyRecord>& records,
                              const HourRange& range) {
    const DenseCells dense = DenseCells::from_records(records, range);

    ContinuityReport report;
    report.range = range;
    report.expected_count = range.count();
    report.actual_count = static_cast<std::int64_t>(records.size());

    const auto n = static_cast<std::int64_t>(dense.cells.size());
    for (std::int64_t i = 0; i < n;) {
        if (dense.cells[static_cast<std::size_t>(i)].has_value()) {
            ++i;
            continue;
        }
        std::int64_t j = i;
        while (j < n && !dense.cells[static_cast<std::size_t>(j)].has_value()) ++j;
        if (j - i == 1)
            report.point_gaps.push_back(range.begin + i);
        else
            report.block_gaps.push_back(HourRange{range.begin + i, range.begin + j});
        i = j;
    }

    for (const auto& cell : dense.cells) {
        if (!cell.has_value()) continue;
        auto check = [&](Field f, const std::optional<double>& v) {
            // A missing field on a present hour is treated like a sentinel:
            // the value needs local repair.
            if (!v.has_value() || is_sentinel_value(f, *v))
                report.sentinel_hits.push_back(SentinelHit{cell->t, f});
        };
        check(Field::Kwh, cell->kwh);
        check(Field::TempF, cell->temp_f);
        check(Field::HumidityPct, cell->humidity_pct);
    }
    return report;
}

std::vector<RawHourlyRecord> repair_local(const std::vector<RawHourlyRecord>& records,
                                          const ContinuityReport& report) {
    const DenseCells snapshot = DenseCells::from_records(records, report.range);
    const std::initializer_list<std::int64_t> kNeighbors = {-2, -1, 1, 2};

    struct Edit {
        std::int64_t index;
        Field field;
        double value;
    };
    std::vector<Edit> edits;
    std::vector<RawHourlyRecord> inserts;

    for (const SentinelHit& hit : report.sentinel_hits) {
        const std::int64_t idx = hit.t - report.range.begin;
        const auto mean = snapshot.mean_over(idx, hit.field, kNeighbors);
        if (!mean)
            throw DataError("unrepairable point at " + format_timestamp(hit.t) + " (" +
                            field_name(hit.field) + "): no valid neighbor within 2 hours");
        edits.push_back(Edit{idx, hit.field, *mean});
    }

    for (const HourStamp t : report.point_gaps) {
        const std::int64_t idx = t - report.range.begin;
        RawHourlyRecord rec;
        rec.t = t;
        for (Field f : {Field::Kwh, Field::TempF, Field::HumidityPct}) {
            const auto mean = snapshot.mean_over(idx, f, kNeighbors);
            if (!mean)
                throw DataError("unrepairable point at " + format_timestamp(t) + " (" +
                                field_name(f) + "): no valid neighbor within 2 hours");
            set_field(rec, f, *mean);
        }
        inserts.push_back(rec);
    }

    DenseCells repaired = snapshot;
    for (const Edit& e : edits)
        set_field(*repaired.cells[static_cast<std::size_t>(e.index)], e.field, e.value);
    for (const RawHourlyRecord& rec : inserts)
        repaired.cells[static_cast<std::size_t>(rec.t - report.range.begin)] = rec;
    return repaired.to_records();
}

std::vector<RawHourlyRecord> repair_block(const std::vector<RawHourlyRecord>& records,
                                          const ContinuityReport& report) {
    const DenseCells snapshot = DenseCells::from_records(records, report.range);
    // Same hour of day on days d-2, d-1, d+1, d+2.
    const std::initializer_list<std::int64_t> kSameHourDays = {-48, -24, 24, 48};

    std::vector<RawHourlyRecord> inserts;
    for (const HourRange& gap : report.block_gaps) {
        for (HourStamp t = gap.begin; t < gap.end; ++t) {
            const std::int64_t idx = t - report.range.begin;
            RawHourlyRecord rec;
            rec.t = t;
            for (Field f : {Field::Kwh, Field::TempF, Field::HumidityPct}) {
                const auto mean = snapshot.mean_over(idx, f, kSameHourDays);
                if (!mean)
                    throw DataError("unrepairable block " + format_timestamp(gap.begin) +
                                    " .. " + format_timestamp(gap.end) + ": hour " +
                                    format_timestamp(t) + " (" + field_name(f) +
                                    ") has no valid same-hour value on the four "
                                    "surrounding days");
                set_field(rec, f, *mean);
            }
            inserts.push_back(rec);
        }
    }

    DenseCells repaired = snapshot;
    for (const RawHourlyRecord& rec : inserts)
        repaired.cells[static_cast<std::size_t>(rec.t - report.range.begin)] = rec;
    return repaired.to_records();
}

CleanHourlySeries finalize_series(const std::vector<RawHourlyRecord>& records,
                                  const HourRange& range) {
    const ContinuityReport residual = scan_records(records, range);
    if (!residual.clean()) {
        std::string msg = "residual gaps after repair:";
        int listed = 0;
        auto add = [&](const std::string& item) {
            if (listed < 8) msg += " " + item;
            ++listed;
        };
        for (HourStamp t : residual.point_gaps) add(format_timestamp(t));
        for (const HourRange& b : residual.block_gaps)
            add(format_timestamp(b.begin) + ".." + format_timestamp(b.end));
        for (const SentinelHit& s : residual.sentinel_hits)
            add(std::string(field_name(s.field)) + "@" + format_timestamp(s.t));
        if (listed > 8) msg += " (+" + std::to_string(listed - 8) + " more)";
        throw DataError(msg);
    }

    CleanHourlySeries series;
    series.start = range.begin;
    series.values.reserve(records.size());
    for (const RawHourlyRecord& rec : records)
        series.values.push_back(HourValues{*rec.kwh, *rec.temp_f, *rec.humidity_pct});
    return series;
}

IngestResult ingest_and_repair_text(const std::string& consumption_csv,
                                    const std::string& weather_csv, const HourRange& range) {
    ParsedHourly parsed = parse_hourly_text(consumption_csv, weather_csv, range);
    std::vector<RawHourlyRecord> records = repair_local(parsed.records, parsed.report);
    records = repair_block(records, parsed.report);
    return IngestResult{finalize_series(records, range), std::move(parsed.report)};
}

IngestResult ingest_and_repair(const std::filesystem::path& consumption_file,
                               const std::filesystem::path& weather_file,
                               const HourRange& range) {
    ParsedHourly parsed = parse_hourly_files(consumption_file, weather_file, range);
    std::vector<RawHourlyRecord> records = repair_local(parsed.records, parsed.report);
    records = repair_block(records, parsed.report);
    return IngestResult{finalize_series(records, range), std::move(parsed.report)};
}

}  // namespace loadcast
