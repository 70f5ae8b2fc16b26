#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "loadcast/experiments.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/synth.hpp"

using namespace loadcast;

namespace {

// One year of noise-free synthetic data whose kWh is an exact affine
// function of temperature.
ScaleDataset affine_daily_dataset() {
    SynthConfig config;
    config.range = {make_stamp(Date{2016, 1, 1}, 0), make_stamp(Date{2017, 1, 1}, 0)};
    config.base_kwh = 2.0;
    config.temp_coeff = 0.05;
    config.weekend_coeff = 0.0;
    config.holiday_coeff = 0.0;
    config.daily_amplitude = 0.0;
    config.seasonal_amplitude = 0.0;
    config.noise_sd = 0.0;
    const SynthOutput synth = generate(config);
    return build_daily(synth.ground_truth, synth.holidays);
}

ExperimentPlan fast_plan(Scale scale, std::size_t lags, bool context) {
    ExperimentPlan plan;
    plan.features.scale = scale;
    plan.features.lag_count = lags;
    plan.features.include_context = context;
    plan.topology = Topology{plan.features.feature_width(), 8, 1};
    plan.train.learning_rate = 0.05;
    plan.train.max_epochs = 200;
    plan.train.patience = 25;
    plan.train.seed = 10;
    plan.repeat_count = 3;
    return plan;
}

}  // namespace

TEST_CASE("compute_metrics arithmetic") {
    SUBCASE("perfect prediction") {
        const std::vector<double> v = {1.0, 2.0, 3.0};
        const TrialMetrics m = compute_metrics(v, v, v, v);
        CHECK(m.accuracy_pct == 100.0);
        CHECK(m.mse_kwh2 == 0.0);
        CHECK(m.mse_norm == 0.0);
    }
    SUBCASE("single sample 1.1 vs 1.0") {
        const TrialMetrics m = compute_metrics(std::vector{1.1}, std::vector{1.0},
                                               std::vector{0.1}, std::vector{0.0});
        CHECK(m.accuracy_pct == doctest::Approx(90.0).epsilon(1e-9));
        CHECK(m.mse_kwh2 == doctest::Approx(0.01).epsilon(1e-9));
    }
    SUBCASE("a wildly wrong sample clamps to zero") {
        const TrialMetrics m = compute_metrics(std::vector{3.0}, std::vector{1.0},
                                               std::vector{1.0}, std::vector{0.0});
        CHECK(m.accuracy_pct == 0.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(compute_metrics(std::vector{1.0}, std::vector{1.0, 2.0},
                                        std::vector{1.0}, std::vector{1.0}),
                        DimensionError);
        CHECK_THROWS_AS(compute_metrics(std::vector<double>{}, {}, {}, {}), DimensionError);
    }
}

TEST_CASE("metric bounds hold on random inputs (property)") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.bounded(20);
        std::vector<double> pred(n), actual(n);
        for (auto& v : pred) v = rng.uniform(-10.0, 10.0);
        for (auto& v : actual) v = rng.uniform(-10.0, 10.0);
        const TrialMetrics m = compute_metrics(pred, actual, pred, actual);
        CHECK(m.accuracy_pct >= 0.0);
        CHECK(m.accuracy_pct <= 100.0);
        CHECK(m.mse_kwh2 >= 0.0);
        const bool equal = pred == actual;
        CHECK((m.mse_kwh2 == 0.0) == equal);
    }
}

TEST_CASE("run_trial is deterministic and learns an affine target") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 3, true);
    plan.train.max_epochs = 400;

    const TrialMetrics a = run_trial(plan, ds, 42);
    const TrialMetrics b = run_trial(plan, ds, 42);
    CHECK(a.accuracy_pct == b.accuracy_pct);
    CHECK(a.mse_kwh2 == b.mse_kwh2);
    CHECK(a.mse_norm == b.mse_norm);
    CHECK(a.seed == 42);

    CHECK(a.accuracy_pct > 95.0);
}

TEST_CASE("run_trial rejects a mismatched topology before training") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 3, true);
    plan.topology.n_in = 4;  // actual width is 3 + 8
    CHECK_THROWS_AS(run_trial(plan, ds, 1), DimensionError);
}

TEST_CASE("run_repeated averages per-trial metrics") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 2, true);
    plan.train.max_epochs = 60;

    SUBCASE("repeat_count 1 equals the single trial") {
        plan.repeat_count = 1;
        const RepeatedResult r = run_repeated(plan, ds);
        REQUIRE(r.trials.size() == 1);
        CHECK(r.mean.accuracy_pct == doctest::Approx(r.trials[0].accuracy_pct));
        CHECK(r.mean.mse_kwh2 == doctest::Approx(r.trials[0].mse_kwh2));
    }

    SUBCASE("repeat_count 10 equals independent re-averaging") {
        plan.repeat_count = 10;
        const RepeatedResult r = run_repeated(plan, ds);
        REQUIRE(r.trials.size() == 10);
        double acc = 0.0, mse = 0.0, msen = 0.0;
        for (const TrialMetrics& t : r.trials) {
            acc += t.accuracy_pct;
            mse += t.mse_kwh2;
            msen += t.mse_norm;
        }
        CHECK(r.mean.accuracy_pct == doctest::Approx(acc / 10.0).epsilon(1e-12));
        CHECK(r.mean.mse_kwh2 == doctest::Approx(mse / 10.0).epsilon(1e-12));
        CHECK(r.mean.mse_norm == doctest::Approx(msen / 10.0).epsilon(1e-12));
        // Trial seeds are consecutive from the base seed.
        for (std::size_t i = 0; i < 10; ++i) CHECK(r.trials[i].seed == plan.train.seed + i);
    }

    SUBCASE("parallel execution matches serial") {
        plan.repeat_count = 6;
        const RepeatedResult serial = run_repeated(plan, ds, 1);
        const RepeatedResult parallel = run_repeated(plan, ds, 4);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(serial.trials[i].accuracy_pct == parallel.trials[i].accuracy_pct);
            CHECK(serial.trials[i].mse_kwh2 == parallel.trials[i].mse_kwh2);
        }
    }
}

TEST_CASE("lag grids match the experiment protocol exactly") {
    CHECK(lag_grid(Scale::Hourly) == std::vector<std::size_t>{0, 1, 2, 4, 6, 12, 24});
    CHECK(lag_grid(Scale::Daily) == std::vector<std::size_t>{0, 1, 3, 5, 7, 9, 11, 13});
    CHECK(lag_grid(Scale::Weekly) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    CHECK(lag_grid(Scale::Monthly) == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("lag_sweep emits context-on cells for the grid and context-off minus zero") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 0, true);
    plan.train.max_epochs = 15;
    plan.repeat_count = 1;
    const SweepResult sweep = lag_sweep(Scale::Daily, ds, plan);

    REQUIRE(sweep.cells.size() == 8 + 7);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(sweep.cells[i].context);
        CHECK(sweep.cells[i].lag_count == lag_grid(Scale::Daily)[i]);
    }
    for (std::size_t i = 8; i < 15; ++i) {
        CHECK_FALSE(sweep.cells[i].context);
        CHECK(sweep.cells[i].lag_count == lag_grid(Scale::Daily)[i - 7]);
    }
}

TEST_CASE("hourly sweep has 7 context-on and 6 context-off cells") {
    SynthConfig config;
    config.range = {make_stamp(Date{2016, 1, 1}, 0), make_stamp(Date{2016, 1, 31}, 0)};
    config.noise_sd = 0.0;
    const SynthOutput synth = generate(config);
    const ScaleDataset hourly = build_hourly(synth.ground_truth, synth.holidays);

    ExperimentPlan plan = fast_plan(Scale::Hourly, 0, true);
    plan.train.max_epochs = 3;
    plan.repeat_count = 1;
    const SweepResult sweep = lag_sweep(Scale::Hourly, hourly, plan);

    std::size_t on = 0, off = 0;
    for (const SweepCell& cell : sweep.cells) (cell.context ? on : off) += 1;
    CHECK(on == 7);
    CHECK(off == 6);
}

TEST_CASE("lag_sweep propagates insufficient-data errors on tiny datasets") {
    SynthConfig config;
    config.range = {make_stamp(Date{2016, 1, 1}, 0), make_stamp(Date{2016, 7, 1}, 0)};
    const SynthOutput synth = generate(config);
    const ScaleDataset monthly = build_monthly(synth.ground_truth, synth.holidays);
    REQUIRE(monthly.n_rows() == 6);  // lag 4 leaves too few samples to split

    ExperimentPlan plan = fast_plan(Scale::Monthly, 0, true);
    plan.train.max_epochs = 3;
    plan.repeat_count = 1;
    CHECK_THROWS_AS(lag_sweep(Scale::Monthly, monthly, plan), ConfigError);
}

TEST_CASE("best candidate: ties break toward fewer hidden nodes") {
    RepeatedResult low, high;
    low.mean.mse_kwh2 = 1.0;
    high.mean.mse_kwh2 = 2.0;
    const std::vector<HiddenEntry> tied = {{16, low, {}}, {15, low, {}}, {4, high, {}}};
    CHECK(best_hidden_by_mse(tied) == 15);
    const std::vector<HiddenEntry> clear_winner = {{15, low, {}}, {16, high, {}}};
    CHECK(best_hidden_by_mse(clear_winner) == 15);
    CHECK_THROWS_AS(best_hidden_by_mse({}), ConfigError);
}

TEST_CASE("factor_ablation: daily emits 8 drops plus a baseline with shared seeds") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 0, true);
    plan.train.max_epochs = 15;
    plan.repeat_count = 2;
    const AblationResult ablation = factor_ablation(Scale::Daily, ds, plan);

    CHECK(ablation.drops.size() == 8);
    std::vector<std::string> factors;
    for (const AblationEntry& d : ablation.drops) {
        factors.push_back(d.factor);
        REQUIRE(d.result.trials.size() == 2);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(d.result.trials[i].seed == ablation.baseline.trials[i].seed);
        CHECK(d.accuracy_delta ==
              doctest::Approx(d.result.mean.accuracy_pct -
                              ablation.baseline.mean.accuracy_pct));
    }
    const auto& daily_cols = schema_columns(Scale::Daily);
    CHECK(factors == std::vector<std::string>(daily_cols.begin() + 1, daily_cols.end()));

    ExperimentPlan no_context = fast_plan(Scale::Daily, 2, false);
    CHECK_THROWS_AS(factor_ablation(Scale::Daily, ds, no_context), ConfigError);
}

TEST_CASE("hidden_formula_candidates reproduces the published worked example") {
    const FormulaCandidates c = hidden_formula_candidates(15, 1, 730);
    CHECK(c.eq1_min_hidden == 10);
    CHECK(c.eq2_lo == 5);
    CHECK(c.eq2_hi == 14);
    CHECK(c.eq3 == 4);
    CHECK_FALSE(c.eq3_degenerate);
    CHECK(c.eq4 == 31);
}

TEST_CASE("eq1 minimum matches a brute-force binomial-sum oracle") {
    // Independent oracle via Pascal's triangle rows.
    auto prefix_sum = [](std::size_t m, std::size_t n) {
        std::vector<double> row{1.0};  // C(m, 0..)
        for (std::size_t r = 1; r <= m; ++r) {
            std::vector<double> next(r + 1, 1.0);
            for (std::size_t i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
            row = std::move(next);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i <= std::min(m, n); ++i) sum += row[i];
        return sum;
    };
    for (const auto& [n_in, k] :
         {std::pair<std::size_t, std::size_t>{15, 730}, {15, 1023}, {15, 1024}, {3, 50},
          {1, 1}, {8, 100}}) {
        const FormulaCandidates c = hidden_formula_candidates(n_in, 1, k);
        std::size_t oracle = 1;
        while (prefix_sum(oracle, n_in) <= static_cast<double>(k)) ++oracle;
        CHECK(c.eq1_min_hidden == oracle);
    }
}

TEST_CASE("eq3 is flagged degenerate for a single input") {
    const FormulaCandidates c = hidden_formula_candidates(1, 1, 10);
    CHECK(c.eq3 == 1);
    CHECK(c.eq3_degenerate);
    CHECK(c.eq4 == 3);
}

TEST_CASE("check_capacity") {
    SUBCASE("15-15-1 with 511 training samples passes both conditions") {
        const Topology t{15, 15, 1};
        CHECK(t.parameter_count() == 256);
        CHECK(check_capacity(t, 511).empty());
    }
    SUBCASE("15-600-1 with 511 training samples violates both") {
        CHECK(check_capacity(Topology{15, 600, 1}, 511).size() == 2);
    }
    SUBCASE("the n_train - 1 boundary is exclusive") {
        const auto violations = check_capacity(Topology{2, 99, 1}, 100);
        REQUIRE(violations.size() >= 1);
        CHECK(violations[0].find("fewer than") != std::string::npos);
    }
}

TEST_CASE("hidden_layer_search picks the lowest-MSE candidate, ties to fewer nodes") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 1, true);
    plan.train.max_epochs = 30;
    plan.repeat_count = 2;

    const HiddenSearchResult result = hidden_layer_search(plan, ds, {4, 8, 12});
    REQUIRE(result.tried.size() == 3);
    // best_by_mse equals an independent argmin over the emitted table.
    std::size_t best = result.tried[0].n_hidden;
    double best_mse = result.tried[0].result.mean.mse_kwh2;
    for (const HiddenEntry& e : result.tried) {
        if (e.result.mean.mse_kwh2 < best_mse ||
            (e.result.mean.mse_kwh2 == best_mse && e.n_hidden < best)) {
            best = e.n_hidden;
            best_mse = e.result.mean.mse_kwh2;
        }
    }
    CHECK(result.best_by_mse == best);
    CHECK(result.formula_candidates.eq4 == 2 * plan.features.feature_width() + 1);

    CHECK_THROWS_AS(hidden_layer_search(plan, ds, {}), ConfigError);
}

TEST_CASE("hidden_layer_search records capacity violations but still runs them") {
    const ScaleDataset ds = affine_daily_dataset();
    ExperimentPlan plan = fast_plan(Scale::Daily, 1, true);
    plan.train.max_epochs = 5;
    plan.repeat_count = 1;

    // Daily data: 365 rows, lag 1 -> 364 samples -> 255 training rows.
    const HiddenSearchResult result = hidden_layer_search(plan, ds, {4, 300});
    CHECK(result.tried[0].violations.empty());
    CHECK_FALSE(result.tried[1].violations.empty());
    CHECK(result.tried[1].result.trials.size() == 1);  // ran despite the warning
}
