// Python bindings for the forecasting core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "loadcast/experiments.hpp"
#include "loadcast/io.hpp"
#include "loadcast/synth.hpp"

namespace py = pybind11;
using namespace loadcast;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const auto row = m.row(i);
        out[i].assign(row.begin(), row.end());
    }
    return out;
}

HourRange make_range(const std::string& start, const std::string& end) {
    return HourRange{parse_timestamp(start), parse_timestamp(end)};
}

}  // namespace

PYBIND11_MODULE(_loadcast, m) {
    m.doc() = "Multi-factor electricity consumption forecasting core";

    py::register_exception<Error>(m, "LoadcastError");

    // ---- time ----
    m.def("parse_timestamp", &parse_timestamp, py::arg("text"));
    m.def("format_timestamp", &format_timestamp, py::arg("hour_stamp"));
    m.def("hour_range", &make_range, py::arg("start"), py::arg("end"));
    m.def("expected_hour_count", &expected_hour_count, py::arg("range"));
    m.def(
        "is_weekend", [](const std::string& date) { return is_weekend(parse_date(date)); },
        py::arg("date"));

    py::class_<HourRange>(m, "HourRange")
        .def(py::init<HourStamp, HourStamp>(), py::arg("begin"), py::arg("end"))
        .def_readwrite("begin", &HourRange::begin)
        .def_readwrite("end", &HourRange::end)
        .def("count", &HourRange::count)
        .def("__repr__", [](const HourRange& r) {
            return "HourRange(" + format_timestamp(r.begin) + ", " + format_timestamp(r.end) +
                   ")";
        });

    // ---- calendar ----
    py::class_<HolidayCalendar>(m, "HolidayCalendar")
        .def(py::init<>())
        .def("add", [](HolidayCalendar& cal,
                       const std::string& date) { cal.dates.insert(parse_date(date)); })
        .def("contains",
             [](const HolidayCalendar& cal, const std::string& date) {
                 return cal.contains(parse_date(date));
             })
        .def("__len__", [](const HolidayCalendar& cal) { return cal.dates.size(); });
    m.def("load_holidays", &load_holidays, py::arg("path"));
    m.def("parse_holidays", &parse_holidays, py::arg("text"), py::arg("source_name"));

    // ---- matrix / nn ----
    py::class_<Matrix>(m, "Matrix")
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("rows"), py::arg("cols"),
             py::arg("value") = 0.0)
        .def_static("from_rows", &Matrix::from_rows, py::arg("rows"))
        .def_property_readonly("shape",
                               [](const Matrix& mm) { return std::pair{mm.rows, mm.cols}; })
        .def("tolist", &matrix_rows);

    py::class_<Topology>(m, "Topology")
        .def(py::init([](std::size_t n_in, std::size_t n_hidden, std::size_t n_out) {
                 Topology t{n_in, n_hidden, n_out};
                 t.validate();
                 return t;
             }),
             py::arg("n_in"), py::arg("n_hidden"), py::arg("n_out") = 1)
        .def_readonly("n_in", &Topology::n_in)
        .def_readonly("n_hidden", &Topology::n_hidden)
        .def_readonly("n_out", &Topology::n_out)
        .def("parameter_count", &Topology::parameter_count);

    py::class_<NetworkParameters>(m, "NetworkParameters")
        .def_readonly("topology", &NetworkParameters::topology)
        .def("to_json", [](const NetworkParameters& p) { return params_to_json(p).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return params_from_json(Json::parse(text));
        });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("max_epochs", &TrainConfig::max_epochs)
        .def_readwrite("patience", &TrainConfig::patience)
        .def_readwrite("seed", &TrainConfig::seed);

    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("epochs_run", &TrainReport::epochs_run)
        .def_readonly("train_loss_curve", &TrainReport::train_loss_curve)
        .def_readonly("val_loss_curve", &TrainReport::val_loss_curve)
        .def_readonly("final_params", &TrainReport::final_params)
        .def_readonly("best_val_loss", &TrainReport::best_val_loss);

    m.def("init_parameters", &init_parameters, py::arg("topology"), py::arg("seed"));
    m.def(
        "forward",
        [](const NetworkParameters& p, const std::vector<double>& x) {
            const ForwardResult r = forward(p, x);
            return std::pair{r.prediction, r.hidden};
        },
        py::arg("params"), py::arg("x"));
    m.def(
        "mse_loss",
        [](const std::vector<double>& pred, const std::vector<double>& target) {
            return mse_loss(pred, target);
        },
        py::arg("predictions"), py::arg("targets"));
    m.def(
        "train",
        [](const Matrix& train_x, const std::vector<double>& train_y, const Matrix& val_x,
           const std::vector<double>& val_y, const Topology& topology,
           const TrainConfig& config) {
            return train(Dataset{train_x, train_y}, Dataset{val_x, val_y}, topology, config);
        },
        py::arg("train_x"), py::arg("train_y"), py::arg("val_x"), py::arg("val_y"),
        py::arg("topology"), py::arg("config"));
    m.def("predict", &predict, py::arg("params"), py::arg("rows"));

    // ---- ingest ----
    py::enum_<Field>(m, "Field")
        .value("KWH", Field::Kwh)
        .value("TEMP_F", Field::TempF)
        .value("HUMIDITY_PCT", Field::HumidityPct);

    py::class_<CleanHourlySeries>(m, "CleanHourlySeries")
        .def_readonly("start", &CleanHourlySeries::start)
        .def("__len__", &CleanHourlySeries::size)
        .def_property_readonly("kwh",
                               [](const CleanHourlySeries& s) {
                                   std::vector<double> out;
                                   for (const auto& v : s.values) out.push_back(v.kwh);
                                   return out;
                               })
        .def_property_readonly("temp_f",
                               [](const CleanHourlySeries& s) {
                                   std::vector<double> out;
                                   for (const auto& v : s.values) out.push_back(v.temp_f);
                                   return out;
                               })
        .def_property_readonly("humidity_pct", [](const CleanHourlySeries& s) {
            std::vector<double> out;
            for (const auto& v : s.values) out.push_back(v.humidity_pct);
            return out;
        });

    py::class_<ContinuityReport>(m, "ContinuityReport")
        .def_readonly("expected_count", &ContinuityReport::expected_count)
        .def_readonly("actual_count", &ContinuityReport::actual_count)
        .def_property_readonly("point_gaps",
                               [](const ContinuityReport& r) {
                                   std::vector<std::string> out;
                                   for (const HourStamp t : r.point_gaps)
                                       out.push_back(format_timestamp(t));
                                   return out;
                               })
        .def_property_readonly("block_gaps",
                               [](const ContinuityReport& r) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const HourRange& b : r.block_gaps)
                                       out.emplace_back(format_timestamp(b.begin),
                                                        format_timestamp(b.end));
                                   return out;
                               })
        .def_property_readonly("sentinel_hits",
                               [](const ContinuityReport& r) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const SentinelHit& s : r.sentinel_hits)
                                       out.emplace_back(format_timestamp(s.t),
                                                        field_name(s.field));
                                   return out;
                               })
        .def("clean", &ContinuityReport::clean);

    py::class_<IngestResult>(m, "IngestResult")
        .def_readonly("series", &IngestResult::series)
        .def_readonly("report", &IngestResult::report);

    m.def("ingest_and_repair", &ingest_and_repair, py::arg("consumption_file"),
          py::arg("weather_file"), py::arg("range"));
    m.def("ingest_and_repair_text", &ingest_and_repair_text, py::arg("consumption_csv"),
          py::arg("weather_csv"), py::arg("range"));

    // ---- aggregate ----
    py::enum_<Scale>(m, "Scale")
        .value("HOURLY", Scale::Hourly)
        .value("DAILY", Scale::Daily)
        .value("WEEKLY", Scale::Weekly)
        .value("MONTHLY", Scale::Monthly);
    m.def("schema_columns", [](Scale s) { return schema_columns(s); }, py::arg("scale"));

    py::class_<ScaleDataset>(m, "ScaleDataset")
        .def_readonly("scale", &ScaleDataset::scale)
        .def_readonly("columns", &ScaleDataset::columns)
        .def_readonly("rows", &ScaleDataset::rows)
        .def_property_readonly("period_starts",
                               [](const ScaleDataset& ds) {
                                   std::vector<std::string> out;
                                   for (const HourStamp t : ds.period_starts)
                                       out.push_back(format_timestamp(t));
                                   return out;
                               })
        .def("__len__", &ScaleDataset::n_rows);

    m.def("build_dataset", &build_dataset, py::arg("scale"), py::arg("series"),
          py::arg("holidays"));

    // ---- features ----
    py::class_<FeatureSpec>(m, "FeatureSpec")
        .def(py::init([](Scale scale, std::size_t lag_count, bool include_context,
                         std::optional<std::set<std::string>> factor_mask) {
                 return FeatureSpec{scale, lag_count, include_context,
                                    std::move(factor_mask)};
             }),
             py::arg("scale"), py::arg("lag_count"), py::arg("include_context") = true,
             py::arg("factor_mask") = std::nullopt)
        .def_readwrite("scale", &FeatureSpec::scale)
        .def_readwrite("lag_count", &FeatureSpec::lag_count)
        .def_readwrite("include_context", &FeatureSpec::include_context)
        .def("included_context", &FeatureSpec::included_context)
        .def("feature_width", &FeatureSpec::feature_width);

    py::class_<DesignMatrix>(m, "DesignMatrix")
        .def_readonly("x", &DesignMatrix::x)
        .def_readonly("y", &DesignMatrix::y)
        .def_readonly("feature_names", &DesignMatrix::feature_names)
        .def("__len__", &DesignMatrix::n_samples);

    py::class_<NormParams>(m, "NormParams")
        .def_readonly("feature_minmax", &NormParams::feature_minmax)
        .def_readonly("target_minmax", &NormParams::target_minmax)
        .def_readonly("constant_features", &NormParams::constant_features);

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init<>())
        .def_readwrite("train_fraction", &SplitSpec::train_fraction)
        .def_readwrite("val_fraction", &SplitSpec::val_fraction)
        .def_readwrite("test_fraction", &SplitSpec::test_fraction)
        .def_readwrite("seed", &SplitSpec::seed);

    m.def("build_design_matrix", &build_design_matrix, py::arg("dataset"), py::arg("spec"));
    m.def("fit_normalizer", &fit_normalizer, py::arg("train_x"), py::arg("train_y"));
    m.def("apply_normalizer", &apply_normalizer, py::arg("params"), py::arg("x"),
          py::arg("y"));
    m.def("invert_target", &invert_target, py::arg("params"), py::arg("y_normalized"));
    m.def(
        "split",
        [](const DesignMatrix& dm, const SplitSpec& spec) {
            SplitResult r = split(dm, spec);
            return std::tuple{std::move(r.train), std::move(r.val), std::move(r.test)};
        },
        py::arg("matrix"), py::arg("spec"));

    // ---- experiments ----
    py::class_<TrialMetrics>(m, "TrialMetrics")
        .def_readonly("accuracy_pct", &TrialMetrics::accuracy_pct)
        .def_readonly("mse_kwh2", &TrialMetrics::mse_kwh2)
        .def_readonly("mse_norm", &TrialMetrics::mse_norm)
        .def_readonly("seed", &TrialMetrics::seed)
        .def("__repr__", [](const TrialMetrics& t) {
            return "TrialMetrics(accuracy_pct=" + std::to_string(t.accuracy_pct) +
                   ", mse_kwh2=" + std::to_string(t.mse_kwh2) + ")";
        });

    py::class_<ExperimentPlan>(m, "ExperimentPlan")
        .def(py::init<>())
        .def_readwrite("features", &ExperimentPlan::features)
        .def_readwrite("topology", &ExperimentPlan::topology)
        .def_readwrite("train", &ExperimentPlan::train)
        .def_readwrite("split", &ExperimentPlan::split)
        .def_readwrite("repeat_count", &ExperimentPlan::repeat_count);

    py::class_<RepeatedResult>(m, "RepeatedResult")
        .def_readonly("mean", &RepeatedResult::mean)
        .def_readonly("trials", &RepeatedResult::trials);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("lag_count", &SweepCell::lag_count)
        .def_readonly("context", &SweepCell::context)
        .def_readonly("result", &SweepCell::result);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("scale", &SweepResult::scale)
        .def_readonly("cells", &SweepResult::cells);

    py::class_<AblationEntry>(m, "AblationEntry")
        .def_readonly("factor", &AblationEntry::factor)
        .def_readonly("result", &AblationEntry::result)
        .def_readonly("accuracy_delta", &AblationEntry::accuracy_delta);
    py::class_<AblationResult>(m, "AblationResult")
        .def_readonly("baseline", &AblationResult::baseline)
        .def_readonly("drops", &AblationResult::drops);

    py::class_<FormulaCandidates>(m, "FormulaCandidates")
        .def_readonly("eq1_min_hidden", &FormulaCandidates::eq1_min_hidden)
        .def_readonly("eq2_lo", &FormulaCandidates::eq2_lo)
        .def_readonly("eq2_hi", &FormulaCandidates::eq2_hi)
        .def_readonly("eq3", &FormulaCandidates::eq3)
        .def_readonly("eq3_degenerate", &FormulaCandidates::eq3_degenerate)
        .def_readonly("eq4", &FormulaCandidates::eq4);

    py::class_<HiddenEntry>(m, "HiddenEntry")
        .def_readonly("n_hidden", &HiddenEntry::n_hidden)
        .def_readonly("result", &HiddenEntry::result)
        .def_readonly("violations", &HiddenEntry::violations);
    py::class_<HiddenSearchResult>(m, "HiddenSearchResult")
        .def_readonly("formula_candidates", &HiddenSearchResult::formula_candidates)
        .def_readonly("tried", &HiddenSearchResult::tried)
        .def_readonly("best_by_mse", &HiddenSearchResult::best_by_mse);

    m.def(
        "compute_metrics",
        [](const std::vector<double>& pred_kwh, const std::vector<double>& actual_kwh,
           const std::vector<double>& pred_norm, const std::vector<double>& actual_norm) {
            return compute_metrics(pred_kwh, actual_kwh, pred_norm, actual_norm);
        },
        py::arg("pred_kwh"), py::arg("actual_kwh"), py::arg("pred_norm"),
        py::arg("actual_norm"));
    m.def("run_trial", &run_trial, py::arg("plan"), py::arg("dataset"), py::arg("seed"));
    m.def("run_repeated", &run_repeated, py::arg("plan"), py::arg("dataset"),
          py::arg("jobs") = 1);
    m.def("lag_grid", [](Scale s) { return lag_grid(s); }, py::arg("scale"));
    m.def("lag_sweep", &lag_sweep, py::arg("scale"), py::arg("dataset"), py::arg("base_plan"),
          py::arg("jobs") = 1);
    m.def("factor_ablation", &factor_ablation, py::arg("scale"), py::arg("dataset"),
          py::arg("base_plan"), py::arg("jobs") = 1);
    m.def("hidden_formula_candidates", &hidden_formula_candidates, py::arg("n_in"),
          py::arg("n_out"), py::arg("k_samples"));
    m.def(
        "check_capacity",
        [](const Topology& topology, std::size_t n_train) {
            return check_capacity(topology, n_train);
        },
        py::arg("topology"), py::arg("n_train"));
    m.def("hidden_layer_search", &hidden_layer_search, py::arg("plan"), py::arg("dataset"),
          py::arg("candidates"), py::arg("jobs") = 1);

    // ---- synth ----
    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("range", &SynthConfig::range)
        .def_readwrite("base_kwh", &SynthConfig::base_kwh)
        .def_readwrite("temp_coeff", &SynthConfig::temp_coeff)
        .def_readwrite("weekend_coeff", &SynthConfig::weekend_coeff)
        .def_readwrite("holiday_coeff", &SynthConfig::holiday_coeff)
        .def_readwrite("daily_amplitude", &SynthConfig::daily_amplitude)
        .def_readwrite("seasonal_amplitude", &SynthConfig::seasonal_amplitude)
        .def_readwrite("noise_sd", &SynthConfig::noise_sd)
        .def_readwrite("seed", &SynthConfig::seed)
        .def_readwrite("gap_rate", &SynthConfig::gap_rate)
        .def_readwrite("sentinel_rate", &SynthConfig::sentinel_rate);

    py::class_<SynthOutput>(m, "SynthOutput")
        .def_readonly("consumption_csv", &SynthOutput::consumption_csv)
        .def_readonly("weather_csv", &SynthOutput::weather_csv)
        .def_readonly("holiday_file", &SynthOutput::holiday_file)
        .def_readonly("holidays", &SynthOutput::holidays)
        .def_readonly("ground_truth", &SynthOutput::ground_truth)
        .def_property_readonly("injected_gaps", [](const SynthOutput& o) {
            std::vector<std::string> out;
            for (const HourStamp t : o.injected_gaps) out.push_back(format_timestamp(t));
            return out;
        });

    m.def("generate", &generate, py::arg("config"));
}
