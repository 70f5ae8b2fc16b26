#include <cmath>

#include "doctest.h"
#include "loadcast/synth.hpp"

using namespace loadcast;

namespace {

SynthConfig base_config() {
    SynthConfig c;
    c.range = {make_stamp(Date{2016, 1, 1}, 0), make_stamp(Date{2016, 7, 1}, 0)};
    return c;
}

}  // namespace

TEST_CASE("no corruption: parsed files equal the ground truth exactly") {
    SynthConfig config = base_config();
    config.noise_sd = 0.0;
    const SynthOutput out = generate(config);

    const IngestResult result =
        ingest_and_repair_text(out.consumption_csv, out.weather_csv, config.range);
    REQUIRE(result.series.size() == out.ground_truth.size());
    CHECK(result.report.clean());
    for (std::size_t i = 0; i < result.series.size(); ++i) {
        CHECK(result.series.values[i].kwh == out.ground_truth.values[i].kwh);
        CHECK(result.series.values[i].temp_f == out.ground_truth.values[i].temp_f);
        CHECK(result.series.values[i].humidity_pct == out.ground_truth.values[i].humidity_pct);
    }
}

TEST_CASE("generation is deterministic") {
    SynthConfig config = base_config();
    config.gap_rate = 0.01;
    config.sentinel_rate = 0.01;
    const SynthOutput a = generate(config);
    const SynthOutput b = generate(config);
    CHECK(a.consumption_csv == b.consumption_csv);
    CHECK(a.weather_csv == b.weather_csv);
    CHECK(a.holiday_file == b.holiday_file);
    CHECK(a.injected_gaps == b.injected_gaps);
    CHECK(a.injected_gaps.size() > 0);
}

TEST_CASE("ground truth satisfies every clean-series invariant") {
    SynthConfig config = base_config();
    config.gap_rate = 0.05;  // corruption never touches the ground truth
    const SynthOutput out = generate(config);
    CHECK(out.ground_truth.size() == static_cast<std::size_t>(config.range.count()));
    for (const HourValues& v : out.ground_truth.values) {
        CHECK(v.kwh >= 0.0);
        CHECK(std::isfinite(v.kwh));
        CHECK(v.humidity_pct >= 0.0);
        CHECK(v.humidity_pct <= 100.0);
        CHECK_FALSE(is_sentinel_value(Field::TempF, v.temp_f));
    }
}

TEST_CASE("gap injection count sits within 3 sigma of the binomial expectation") {
    SynthConfig config;
    config.range = {make_stamp(Date{2016, 1, 1}, 0), make_stamp(Date{2018, 1, 1}, 0)};
    config.gap_rate = 0.01;
    const SynthOutput out = generate(config);

    const double n = 17544.0;
    const double expected = n * config.gap_rate;
    const double sigma = std::sqrt(n * config.gap_rate * (1.0 - config.gap_rate));
    CHECK(std::abs(static_cast<double>(out.injected_gaps.size()) - expected) < 3.0 * sigma);
}

TEST_CASE("repair error at injected point gaps is bounded by local variation") {
    SynthConfig config = base_config();
    config.noise_sd = 0.0;
    config.gap_rate = 0.004;
    const SynthOutput out = generate(config);
    REQUIRE(out.injected_gaps.size() > 5);

    const IngestResult result =
        ingest_and_repair_text(out.consumption_csv, out.weather_csv, config.range);

    // Only isolated holes follow the four-neighbor rule; blocks use day means.
    for (const HourStamp t : result.report.point_gaps) {
        const auto i = static_cast<std::size_t>(t - config.range.begin);
        const double err =
            std::abs(result.series.values[i].kwh - out.ground_truth.values[i].kwh);
        double variation = 0.0;
        for (std::int64_t k = -2; k < 2; ++k)
            variation += std::abs(out.ground_truth.values[i + k + 1].kwh -
                                  out.ground_truth.values[i + k].kwh);
        CHECK(err <= variation + 1e-12);
    }
}

TEST_CASE("sentinels only land on eligible interior hours") {
    SynthConfig config = base_config();
    config.sentinel_rate = 0.01;
    const SynthOutput out = generate(config);
    REQUIRE(out.injected_sentinels.size() > 10);
    for (const SentinelHit& hit : out.injected_sentinels) {
        CHECK(hit.t - config.range.begin >= 48);
        CHECK(config.range.end - hit.t > 48);
        CHECK((hit.field == Field::TempF || hit.field == Field::HumidityPct));
    }

    // And the files really carry the marker.
    const ParsedHourly parsed =
        parse_hourly_text(out.consumption_csv, out.weather_csv, config.range);
    CHECK(parsed.report.sentinel_hits.size() == out.injected_sentinels.size());
}

TEST_CASE("config validation") {
    SynthConfig config = base_config();
    config.gap_rate = 1.0;
    CHECK_THROWS_AS(generate(config), ConfigError);
    config = base_config();
    config.noise_sd = -1.0;
    CHECK_THROWS_AS(generate(config), ConfigError);
    config = base_config();
    config.range.end = config.range.begin;
    CHECK_THROWS_AS(generate(config), ConfigError);
}
