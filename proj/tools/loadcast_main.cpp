// loadcast: multi-factor electricity consumption forecasting pipeline.
//
// Subcommands: synth, ingest, aggregate, train, predict, sweep, ablate,
// search-hidden. All randomness is controlled by --seed; identical
// invocations produce byte-identical result files.

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loadcast/io.hpp"
#include "loadcast/synth.hpp"
#include "loadcast/text.hpp"

namespace lc = loadcast;
using lc::Json;

namespace {

using ConfigMap = std::map<std::string, std::string>;

Json config_json(const ConfigMap& kv) {
    Json j = Json::object();
    for (const auto& [key, value] : kv) j[key] = value;
    return j;
}

std::string config_comment(const ConfigMap& kv) {
    std::string out;
    for (const auto& [key, value] : kv) out += "# " + key + "=" + value + "\n";
    return out;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    lc::write_text_file(path, j.dump(2) + "\n");
}

std::string fmt(double v) { return lc::format_double(v); }

lc::SplitSpec parse_split(const std::string& text, std::uint64_t seed) {
    const std::vector<std::string> parts = lc::split(text, ',');
    if (parts.size() != 3)
        throw lc::ConfigError("--split expects three comma-separated fractions, got '" +
                              text + "'");
    lc::SplitSpec spec;
    spec.train_fraction = lc::parse_double_field(parts[0], "--split");
    spec.val_fraction = lc::parse_double_field(parts[1], "--split");
    spec.test_fraction = lc::parse_double_field(parts[2], "--split");
    spec.seed = seed;
    spec.validate();
    return spec;
}

// Applies a flat key=value config file by appending "--key value" pairs for
// every key not already present on the command line, so flags always win.
// Boolean flags use key=true / key=false.
std::vector<std::string> expand_config_args(std::vector<std::string> args) {
    std::string cfg_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            cfg_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            cfg_path = args[i].substr(9);
    }
    if (cfg_path.empty()) return args;

    lc::for_each_line(lc::read_text_file(cfg_path), [&](std::size_t line_no,
                                                        std::string_view line) {
        const std::string entry = lc::trim(line.substr(0, line.find('#')));
        if (entry.empty()) return;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw lc::ParseError(cfg_path + ":" + std::to_string(line_no) +
                                 ": expected key=value");
        const std::string key = lc::trim(entry.substr(0, eq));
        const std::string value = lc::trim(entry.substr(eq + 1));
        const std::string flag = "--" + key;
        for (const std::string& given : args)
            if (given == flag || given.rfind(flag + "=", 0) == 0) return;
        if (value == "false") return;
        args.push_back(flag);
        if (value != "true") args.push_back(value);
    });
    return args;
}

// Scans both source files for the earliest and latest timestamps.
lc::HourRange infer_range(const std::string& consumption_csv, const std::string& weather_csv) {
    std::optional<lc::HourStamp> lo, hi;
    for (const std::string* csv : {&consumption_csv, &weather_csv}) {
        bool header = true;
        lc::for_each_line(*csv, [&](std::size_t, std::string_view line) {
            if (lc::trim(line).empty()) return;
            if (header) {
                header = false;
                return;
            }
            const std::vector<std::string> fields = lc::split(line, ',');
            if (fields.empty()) return;
            const lc::HourStamp t = lc::parse_timestamp(lc::trim(fields[0]));
            lo = lo ? std::min(*lo, t) : t;
            hi = hi ? std::max(*hi, t) : t;
        });
    }
    if (!lo)
        throw lc::DataError("cannot infer an hour range from empty input files; "
                            "pass --start and --end");
    return lc::HourRange{*lo, *hi + 1};
}

// Shared flags for every subcommand that trains networks.
struct TrainFlags {
    std::string scale = "daily";
    std::size_t lags = 1;
    bool no_context = false;
    std::vector<std::string> drop_factors;
    std::string split = "0.7,0.15,0.15";
    std::uint64_t seed = 0;
    double learning_rate = 0.01;
    std::size_t epochs = 1000;
    std::size_t patience = 25;
    std::size_t hidden = 10;
    std::size_t repeat = 10;
    unsigned jobs = 1;

    void add_plan_options(CLI::App* cmd, bool with_lags = true) {
        cmd->add_option("--scale", scale, "Dataset scale (hourly|daily|weekly|monthly)")
            ->required();
        if (with_lags) cmd->add_option("--lags", lags, "Trailing consumption lags");
        cmd->add_flag("--no-context", no_context, "Use lagged consumption only");
        cmd->add_option("--drop-factor", drop_factors,
                        "Context column to exclude (repeatable)");
        cmd->add_option("--split", split, "train,val,test fractions");
        cmd->add_option("--seed", seed, "Base random seed");
        cmd->add_option("--lr", learning_rate, "Learning rate");
        cmd->add_option("--epochs", epochs, "Maximum training epochs");
        cmd->add_option("--patience", patience, "Early-stop patience (epochs)");
        cmd->add_option("--hidden", hidden, "Hidden-layer node count");
    }

    lc::ExperimentPlan make_plan(lc::Scale parsed_scale) const {
        lc::ExperimentPlan plan;
        plan.features.scale = parsed_scale;
        plan.features.lag_count = lags;
        plan.features.include_context = !no_context;
        if (!drop_factors.empty()) {
            const lc::FeatureSpec full{parsed_scale, lags, true, std::nullopt};
            std::set<std::string> mask;
            for (const std::string& name : full.included_context()) mask.insert(name);
            for (const std::string& name : drop_factors) {
                if (!mask.count(name))
                    throw lc::ConfigError("unknown factor name '" + name + "' for " +
                                          lc::scale_name(parsed_scale) + " scale");
                mask.erase(name);
            }
            plan.features.factor_mask = std::move(mask);
        }
        plan.topology = lc::Topology{plan.features.feature_width(), hidden, 1};
        plan.train.learning_rate = learning_rate;
        plan.train.max_epochs = epochs;
        plan.train.patience = patience;
        plan.train.seed = seed;
        plan.split = parse_split(split, seed);
        plan.repeat_count = repeat;
        return plan;
    }

    ConfigMap config(const std::string& in_path) const {
        ConfigMap kv;
        kv["in"] = in_path;
        kv["scale"] = scale;
        kv["lags"] = std::to_string(lags);
        kv["context"] = no_context ? "off" : "on";
        std::string dropped;
        for (const std::string& name : drop_factors)
            dropped += (dropped.empty() ? "" : ";") + name;
        kv["drop_factors"] = dropped;
        kv["split"] = split;
        kv["seed"] = std::to_string(seed);
        kv["lr"] = fmt(learning_rate);
        kv["epochs"] = std::to_string(epochs);
        kv["patience"] = std::to_string(patience);
        kv["hidden"] = std::to_string(hidden);
        kv["repeat"] = std::to_string(repeat);
        return kv;
    }
};

void warn_constant_features(const lc::NormParams& norm,
                            const std::vector<std::string>& names) {
    for (const std::size_t j : norm.constant_features)
        std::cerr << "warning: constant feature '" << names[j]
                  << "' normalizes to 0 uniformly\n";
}

// ---- subcommand runners ----

int run_synth(const std::string& out_dir, lc::SynthConfig config, const std::string& start,
              const std::string& end) {
    config.range = lc::HourRange{lc::parse_timestamp(start), lc::parse_timestamp(end)};
    const lc::SynthOutput out = lc::generate(config);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    lc::write_text_file(dir / "consumption.csv", out.consumption_csv);
    lc::write_text_file(dir / "weather.csv", out.weather_csv);
    lc::write_text_file(dir / "holidays.txt", out.holiday_file);
    lc::write_text_file(dir / "ground_truth.csv", lc::write_clean_csv(out.ground_truth));

    ConfigMap kv;
    kv["start"] = start;
    kv["end"] = end;
    kv["seed"] = std::to_string(config.seed);
    kv["base_kwh"] = fmt(config.base_kwh);
    kv["temp_coeff"] = fmt(config.temp_coeff);
    kv["weekend_coeff"] = fmt(config.weekend_coeff);
    kv["holiday_coeff"] = fmt(config.holiday_coeff);
    kv["daily_amplitude"] = fmt(config.daily_amplitude);
    kv["seasonal_amplitude"] = fmt(config.seasonal_amplitude);
    kv["noise_sd"] = fmt(config.noise_sd);
    kv["gap_rate"] = fmt(config.gap_rate);
    kv["sentinel_rate"] = fmt(config.sentinel_rate);

    Json log;
    log["config"] = config_json(kv);
    log["injected_gaps"] = Json::array();
    for (const lc::HourStamp t : out.injected_gaps)
        log["injected_gaps"].push_back(lc::format_timestamp(t));
    log["injected_sentinels"] = Json::array();
    for (const lc::SentinelHit& hit : out.injected_sentinels)
        log["injected_sentinels"].push_back({{"timestamp", lc::format_timestamp(hit.t)},
                                             {"field", lc::field_name(hit.field)}});
    write_json_file(dir / "synth_log.json", log);

    std::cout << "synth: wrote " << out.ground_truth.size() << " hours to " << out_dir
              << " (" << out.injected_gaps.size() << " gaps, "
              << out.injected_sentinels.size() << " sentinels injected)\n";
    return 0;
}

int run_ingest(std::string consumption, std::string weather, const std::string& in_dir,
               std::string start, std::string end, const std::string& report_path,
               const std::string& out_path) {
    if (!in_dir.empty()) {
        if (consumption.empty()) consumption = (std::filesystem::path(in_dir) / "consumption.csv").string();
        if (weather.empty()) weather = (std::filesystem::path(in_dir) / "weather.csv").string();
    }
    if (consumption.empty() || weather.empty())
        throw lc::ConfigError("ingest needs --in <dir> or both --consumption and --weather");

    const std::string cons_text = lc::read_text_file(consumption);
    const std::string weather_text = lc::read_text_file(weather);
    lc::HourRange range;
    if (start.empty() != end.empty())
        throw lc::ConfigError("pass both --start and --end, or neither");
    if (start.empty()) {
        range = infer_range(cons_text, weather_text);
        start = lc::format_timestamp(range.begin);
        end = lc::format_timestamp(range.end);
    } else {
        range = lc::HourRange{lc::parse_timestamp(start), lc::parse_timestamp(end)};
    }

    const lc::IngestResult result = lc::ingest_and_repair_text(cons_text, weather_text, range);

    ConfigMap kv;
    kv["consumption"] = consumption;
    kv["weather"] = weather;
    kv["start"] = start;
    kv["end"] = end;

    if (!report_path.empty()) {
        Json j;
        j["config"] = config_json(kv);
        j["report"] = lc::report_to_json(result.report);
        write_json_file(report_path, j);
    }
    if (!out_path.empty())
        lc::write_text_file(out_path,
                            config_comment(kv) + lc::write_clean_csv(result.series));

    std::cout << "ingest: " << result.report.actual_count << "/"
              << result.report.expected_count << " hours present, "
              << result.report.point_gaps.size() << " point gaps, "
              << result.report.block_gaps.size() << " block gaps, "
              << result.report.sentinel_hits.size() << " sentinel values repaired\n";
    return 0;
}

int run_aggregate(const std::string& in_path, const std::string& scale_name,
                  const std::string& holidays_path, const std::string& out_path) {
    const lc::CleanHourlySeries series = lc::read_clean_csv(in_path);
    lc::HolidayCalendar holidays;
    if (!holidays_path.empty()) holidays = lc::load_holidays(holidays_path);

    const lc::HourRange range{series.start,
                              series.start + static_cast<lc::HourStamp>(series.size())};
    for (const lc::Date& d : holidays.outside_range(range))
        std::cerr << "warning: holiday " << lc::format_date(d) << " lies outside the data\n";

    const lc::Scale scale = lc::parse_scale(scale_name);
    const lc::ScaleDataset dataset = lc::build_dataset(scale, series, holidays);

    ConfigMap kv;
    kv["in"] = in_path;
    kv["scale"] = scale_name;
    kv["holidays"] = holidays_path;
    lc::write_text_file(out_path, config_comment(kv) + lc::write_scale_csv(dataset));

    std::cout << "aggregate: " << dataset.n_rows() << " " << scale_name << " rows x "
              << dataset.n_cols() << " columns\n";
    return 0;
}

int run_train(const std::string& in_path, const TrainFlags& flags,
              const std::string& model_path, const std::string& metrics_path) {
    const lc::ScaleDataset dataset = lc::read_scale_csv(in_path);
    const lc::Scale scale = lc::parse_scale(flags.scale);
    if (dataset.scale != scale)
        throw lc::ConfigError(std::string("dataset file is ") +
                              lc::scale_name(dataset.scale) + " but --scale says " +
                              flags.scale);

    lc::ExperimentPlan plan = flags.make_plan(scale);
    const lc::TrainedModel model = lc::run_plan(plan, dataset, plan.train.seed);

    const lc::DesignMatrix dm = lc::build_design_matrix(dataset, plan.features);
    warn_constant_features(model.norm, dm.feature_names);

    ConfigMap kv = flags.config(in_path);
    Json j;
    j["config"] = config_json(kv);
    j["feature_spec"] = lc::feature_spec_to_json(plan.features);
    j["norm_params"] = lc::norm_params_to_json(model.norm);
    j["network"] = lc::params_to_json(model.report.final_params);
    j["train_report"] = {{"epochs_run", model.report.epochs_run},
                         {"best_val_loss", model.report.best_val_loss}};
    j["test_metrics"] = lc::metrics_to_json(model.test_metrics);
    write_json_file(model_path, j);

    if (!metrics_path.empty()) {
        Json m;
        m["config"] = config_json(kv);
        m["test_metrics"] = lc::metrics_to_json(model.test_metrics);
        m["train_loss_curve"] = model.report.train_loss_curve;
        m["val_loss_curve"] = model.report.val_loss_curve;
        write_json_file(metrics_path, m);
    }

    std::cout << "train: " << model.report.epochs_run << " epochs, best val loss "
              << fmt(model.report.best_val_loss) << ", test accuracy "
              << fmt(model.test_metrics.accuracy_pct) << "%, test MSE "
              << fmt(model.test_metrics.mse_kwh2) << " kWh^2\n";
    return 0;
}

int run_predict(const std::string& model_path, const std::string& in_path,
                const std::string& out_path) {
    const Json bundle = Json::parse(lc::read_text_file(model_path));
    const lc::FeatureSpec spec = lc::feature_spec_from_json(bundle.at("feature_spec"));
    const lc::NormParams norm = lc::norm_params_from_json(bundle.at("norm_params"));
    const lc::NetworkParameters params = lc::params_from_json(bundle.at("network"));

    const lc::ScaleDataset dataset = lc::read_scale_csv(in_path);
    if (dataset.scale != spec.scale)
        throw lc::ConfigError(std::string("model was trained on ") +
                              lc::scale_name(spec.scale) + " data but the input is " +
                              lc::scale_name(dataset.scale));

    const lc::DesignMatrix dm = lc::build_design_matrix(dataset, spec);
    const auto [xn, yn] = lc::apply_normalizer(norm, dm.x, dm.y);
    const std::vector<double> pred_norm = lc::predict(params, xn);
    const std::vector<double> pred_kwh = lc::invert_target(norm, pred_norm);

    ConfigMap kv;
    kv["model"] = model_path;
    kv["in"] = in_path;
    std::string csv = config_comment(kv) + "period_start,predicted_kwh,actual_kwh\n";
    for (std::size_t i = 0; i < pred_kwh.size(); ++i)
        csv += lc::format_timestamp(dm.period_starts[i]) + "," + fmt(pred_kwh[i]) + "," +
               fmt(dm.y[i]) + "\n";
    lc::write_text_file(out_path, csv);

    std::cout << "predict: wrote " << pred_kwh.size() << " predictions to " << out_path
              << "\n";
    return 0;
}

void write_experiment_outputs(const ConfigMap& kv, const Json& payload,
                              const std::string& csv_body, const std::string& json_path,
                              const std::string& csv_path) {
    if (json_path.empty() && csv_path.empty())
        throw lc::ConfigError("pass --out-json and/or --out-csv");
    if (!json_path.empty()) {
        Json j;
        j["config"] = config_json(kv);
        j["result"] = payload;
        write_json_file(json_path, j);
    }
    if (!csv_path.empty()) lc::write_text_file(csv_path, config_comment(kv) + csv_body);
}

int run_sweep(const std::string& in_path, const TrainFlags& flags,
              const std::string& json_path, const std::string& csv_path) {
    const lc::ScaleDataset dataset = lc::read_scale_csv(in_path);
    const lc::Scale scale = lc::parse_scale(flags.scale);
    lc::ExperimentPlan base = flags.make_plan(scale);
    const lc::SweepResult result = lc::lag_sweep(scale, dataset, base, flags.jobs);

    write_experiment_outputs(flags.config(in_path), lc::sweep_to_json(result),
                             lc::sweep_to_csv(result), json_path, csv_path);
    std::cout << "sweep: " << result.cells.size() << " cells x "
              << base.repeat_count << " trials on " << flags.scale << " data\n";
    return 0;
}

int run_ablate(const std::string& in_path, const TrainFlags& flags,
               const std::string& json_path, const std::string& csv_path) {
    const lc::ScaleDataset dataset = lc::read_scale_csv(in_path);
    const lc::Scale scale = lc::parse_scale(flags.scale);
    lc::ExperimentPlan base = flags.make_plan(scale);
    const lc::AblationResult result = lc::factor_ablation(scale, dataset, base, flags.jobs);

    write_experiment_outputs(flags.config(in_path), lc::ablation_to_json(result),
                             lc::ablation_to_csv(result), json_path, csv_path);
    std::cout << "ablate: baseline accuracy "
              << fmt(result.baseline.mean.accuracy_pct) << "%, " << result.drops.size()
              << " single-factor drops\n";
    return 0;
}

int run_search_hidden(const std::string& in_path, const TrainFlags& flags,
                      std::size_t min_hidden, std::size_t max_hidden, std::size_t step,
                      const std::string& json_path, const std::string& csv_path) {
    if (max_hidden < min_hidden || step < 1)
        throw lc::ConfigError("search-hidden: need min <= max and step >= 1");
    const lc::ScaleDataset dataset = lc::read_scale_csv(in_path);
    const lc::Scale scale = lc::parse_scale(flags.scale);
    lc::ExperimentPlan base = flags.make_plan(scale);

    std::vector<std::size_t> candidates;
    for (std::size_t h = min_hidden; h <= max_hidden; h += step) candidates.push_back(h);
    const lc::HiddenSearchResult result =
        lc::hidden_layer_search(base, dataset, candidates, flags.jobs);

    for (const lc::HiddenEntry& entry : result.tried)
        for (const std::string& violation : entry.violations)
            std::cerr << "warning: n_hidden " << entry.n_hidden << ": " << violation << "\n";

    ConfigMap kv = flags.config(in_path);
    kv["min_hidden"] = std::to_string(min_hidden);
    kv["max_hidden"] = std::to_string(max_hidden);
    kv["step"] = std::to_string(step);
    write_experiment_outputs(kv, lc::hidden_search_to_json(result),
                             lc::hidden_search_to_csv(result), json_path, csv_path);
    std::cout << "search-hidden: best n_hidden by MSE is " << result.best_by_mse << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loadcast: multi-factor electricity consumption forecasting"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic meter and weather files");
    std::string synth_cfg;
    synth->add_option("--config", synth_cfg, "Flat key=value config file");
    std::string synth_out;
    std::string synth_start = "2016-01-01T00:00", synth_end = "2018-01-01T00:00";
    lc::SynthConfig synth_config;
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--start", synth_start, "Range start (inclusive hour)");
    synth->add_option("--end", synth_end, "Range end (exclusive hour)");
    synth->add_option("--seed", synth_config.seed, "Random seed");
    synth->add_option("--base-kwh", synth_config.base_kwh, "Base hourly consumption");
    synth->add_option("--temp-coeff", synth_config.temp_coeff, "kWh per degF");
    synth->add_option("--weekend-coeff", synth_config.weekend_coeff, "Weekend bump (kWh)");
    synth->add_option("--holiday-coeff", synth_config.holiday_coeff, "Holiday bump (kWh)");
    synth->add_option("--daily-amplitude", synth_config.daily_amplitude, "Diurnal swing");
    synth->add_option("--seasonal-amplitude", synth_config.seasonal_amplitude,
                      "Seasonal swing");
    synth->add_option("--noise-sd", synth_config.noise_sd, "Gaussian noise sd (kWh)");
    synth->add_option("--gap-rate", synth_config.gap_rate, "Per-hour gap probability");
    synth->add_option("--sentinel-rate", synth_config.sentinel_rate,
                      "Per-hour sentinel probability");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse, repair and report raw hourly files");
    std::string ingest_cfg;
    ingest->add_option("--config", ingest_cfg, "Flat key=value config file");
    std::string ingest_cons, ingest_weather, ingest_dir, ingest_start, ingest_end;
    std::string ingest_report, ingest_out;
    ingest->add_option("--in", ingest_dir, "Directory with consumption.csv and weather.csv");
    ingest->add_option("--consumption", ingest_cons, "Consumption CSV path");
    ingest->add_option("--weather", ingest_weather, "Weather CSV path");
    ingest->add_option("--start", ingest_start, "Range start (default: inferred)");
    ingest->add_option("--end", ingest_end, "Range end (default: inferred)");
    ingest->add_option("--report", ingest_report, "Write the continuity report JSON here");
    ingest->add_option("--out", ingest_out, "Write the repaired clean series CSV here");

    // aggregate
    auto* aggregate = app.add_subcommand("aggregate", "Build a scale dataset from a clean series");
    std::string agg_cfg;
    aggregate->add_option("--config", agg_cfg, "Flat key=value config file");
    std::string agg_in, agg_scale, agg_holidays, agg_out;
    aggregate->add_option("--in", agg_in, "Clean series CSV")->required();
    aggregate->add_option("--scale", agg_scale, "hourly|daily|weekly|monthly")->required();
    aggregate->add_option("--holidays", agg_holidays, "Holiday file (one date per line)");
    aggregate->add_option("--out", agg_out, "Output dataset CSV")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one network and save the model");
    std::string train_cfg;
    train_cmd->add_option("--config", train_cfg, "Flat key=value config file");
    std::string train_in, train_model, train_metrics;
    TrainFlags train_flags;
    train_cmd->add_option("--in", train_in, "Dataset CSV from `aggregate`")->required();
    train_flags.add_plan_options(train_cmd);
    train_cmd->add_option("--out", train_model, "Model bundle JSON")->required();
    train_cmd->add_option("--metrics", train_metrics, "Also write metrics/loss curves here");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict kWh from a saved model");
    std::string pred_cfg;
    predict_cmd->add_option("--config", pred_cfg, "Flat key=value config file");
    std::string pred_model, pred_in, pred_out;
    predict_cmd->add_option("--model", pred_model, "Model bundle JSON")->required();
    predict_cmd->add_option("--in", pred_in, "Dataset CSV to predict on")->required();
    predict_cmd->add_option("--out", pred_out, "Predictions CSV")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Lag-window sweep, context on and off");
    std::string sweep_cfg;
    sweep_cmd->add_option("--config", sweep_cfg, "Flat key=value config file");
    std::string sweep_in, sweep_json, sweep_csv;
    TrainFlags sweep_flags;
    sweep_cmd->add_option("--in", sweep_in, "Dataset CSV")->required();
    sweep_flags.add_plan_options(sweep_cmd, /*with_lags=*/false);
    sweep_cmd->add_option("--repeat", sweep_flags.repeat, "Trials per cell");
    sweep_cmd->add_option("--jobs", sweep_flags.jobs, "Concurrent trials");
    sweep_cmd->add_option("--out-json", sweep_json, "Result JSON path");
    sweep_cmd->add_option("--out-csv", sweep_csv, "Plot-data CSV path");

    // ablate
    auto* ablate_cmd = app.add_subcommand("ablate", "Single-factor ablation study");
    std::string ablate_cfg;
    ablate_cmd->add_option("--config", ablate_cfg, "Flat key=value config file");
    std::string ablate_in, ablate_json, ablate_csv;
    TrainFlags ablate_flags;
    ablate_cmd->add_option("--in", ablate_in, "Dataset CSV")->required();
    ablate_flags.add_plan_options(ablate_cmd);
    ablate_cmd->add_option("--repeat", ablate_flags.repeat, "Trials per run");
    ablate_cmd->add_option("--jobs", ablate_flags.jobs, "Concurrent trials");
    ablate_cmd->add_option("--out-json", ablate_json, "Result JSON path");
    ablate_cmd->add_option("--out-csv", ablate_csv, "Plot-data CSV path");

    // search-hidden
    auto* search_cmd = app.add_subcommand("search-hidden",
                                          "Trial-and-error hidden-layer size search");
    std::string search_cfg;
    search_cmd->add_option("--config", search_cfg, "Flat key=value config file");
    std::string search_in, search_json, search_csv;
    std::size_t search_min = 2, search_max = 20, search_step = 1;
    TrainFlags search_flags;
    search_cmd->add_option("--in", search_in, "Dataset CSV")->required();
    search_flags.add_plan_options(search_cmd);
    search_cmd->add_option("--min-hidden", search_min, "Smallest candidate");
    search_cmd->add_option("--max-hidden", search_max, "Largest candidate");
    search_cmd->add_option("--step", search_step, "Candidate stride");
    search_cmd->add_option("--repeat", search_flags.repeat, "Trials per candidate");
    search_cmd->add_option("--jobs", search_flags.jobs, "Concurrent trials");
    search_cmd->add_option("--out-json", search_json, "Result JSON path");
    search_cmd->add_option("--out-csv", search_csv, "Plot-data CSV path");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_args(std::move(args));
    } catch (const lc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (synth->parsed())
            return run_synth(synth_out, synth_config, synth_start, synth_end);
        if (ingest->parsed())
            return run_ingest(ingest_cons, ingest_weather, ingest_dir, ingest_start,
                              ingest_end, ingest_report, ingest_out);
        if (aggregate->parsed()) return run_aggregate(agg_in, agg_scale, agg_holidays, agg_out);
        if (train_cmd->parsed())
            return run_train(train_in, train_flags, train_model, train_metrics);
        if (predict_cmd->parsed()) return run_predict(pred_model, pred_in, pred_out);
        if (sweep_cmd->parsed()) return run_sweep(sweep_in, sweep_flags, sweep_json, sweep_csv);
        if (ablate_cmd->parsed())
            return run_ablate(ablate_in, ablate_flags, ablate_json, ablate_csv);
        if (search_cmd->parsed())
            return run_search_hidden(search_in, search_flags, search_min, search_max,
                                     search_step, search_json, search_csv);
    } catch (const lc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
