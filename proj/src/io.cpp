#include "loadcast/io.hpp"

#include "loadcast/text.hpp"

namespace loadcast {

namespace {

std::string csv_row(std::initializer_list<std::string> fields) {
    std::string line;
    for (const std::string& f : fields) {
        if (!line.empty()) line += ',';
        line += f;
    }
    return line + "\n";
}

}  // namespace

std::string write_clean_csv(const CleanHourlySeries& series) {
    std::string out = "timestamp,kwh,temp_f,humidity_pct\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const HourValues& v = series.values[i];
        out += csv_row({format_timestamp(series.stamp_at(i)), format_double(v.kwh),
                        format_double(v.temp_f), format_double(v.humidity_pct)});
    }
    return out;
}

CleanHourlySeries read_clean_csv_text(const std::string& csv, const std::string& source) {
    CleanHourlySeries series;
    bool header_seen = false;
    for_each_line(csv, [&](std::size_t line_no, std::string_view line) {
        const std::string where = source + ":" + std::to_string(line_no);
        if (trim(line).empty() || (!line.empty() && line.front() == '#')) return;
        if (!header_seen) {
            if (trim(line) != "timestamp,kwh,temp_f,humidity_pct")
                throw ParseError(where + ": bad clean-series header");
            header_seen = true;
            return;
        }
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 4) throw ParseError(where + ": expected 4 fields");
        const HourStamp t = parse_timestamp(trim(fields[0]));
        if (series.values.empty())
            series.start = t;
        else if (t != series.start + static_cast<HourStamp>(series.values.size()))
            throw DataError(where + ": series is not contiguous at " + format_timestamp(t));
        series.values.push_back(HourValues{parse_double_field(fields[1], where),
                                           parse_double_field(fields[2], where),
                                           parse_double_field(fields[3], where)});
    });
    if (series.values.empty()) throw DataError(source + ": empty clean series");
    return series;
}

CleanHourlySeries read_clean_csv(const std::filesystem::path& path) {
    return read_clean_csv_text(read_text_file(path), path.string());
}

std::string write_scale_csv(const ScaleDataset& dataset) {
    std::string out = "period_start";
    for (const std::string& col : dataset.columns) out += "," + col;
    out += "\n";
    for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
        out += format_timestamp(dataset.period_starts[i]);
        for (const double v : dataset.rows[i]) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

ScaleDataset read_scale_csv_text(const std::string& csv, const std::string& source) {
    ScaleDataset dataset;
    bool header_seen = false;
    for_each_line(csv, [&](std::size_t line_no, std::string_view line) {
        const std::string where = source + ":" + std::to_string(line_no);
        if (trim(line).empty() || (!line.empty() && line.front() == '#')) return;
        std::vector<std::string> fields = split(line, ',');
        if (!header_seen) {
            if (fields.empty() || trim(fields[0]) != "period_start")
                throw ParseError(where + ": expected a period_start column first");
            std::vector<std::string> cols;
            for (std::size_t i = 1; i < fields.size(); ++i) cols.push_back(trim(fields[i]));
            bool matched = false;
            for (const Scale s :
                 {Scale::Hourly, Scale::Daily, Scale::Weekly, Scale::Monthly}) {
                if (cols == schema_columns(s)) {
                    dataset.scale = s;
                    dataset.columns = cols;
                    matched = true;
                    break;
                }
            }
            if (!matched) throw ParseError(where + ": header matches no dataset schema");
            header_seen = true;
            return;
        }
        if (fields.size() != dataset.columns.size() + 1)
            throw ParseError(where + ": expected " +
                             std::to_string(dataset.columns.size() + 1) + " fields");
        dataset.period_starts.push_back(parse_timestamp(trim(fields[0])));
        std::vector<double> row;
        for (std::size_t i = 1; i < fields.size(); ++i)
            row.push_back(parse_double_field(fields[i], where));
        dataset.rows.push_back(std::move(row));
    });
    if (!header_seen) throw ParseError(source + ": empty dataset file");
    return dataset;
}

ScaleDataset read_scale_csv(const std::filesystem::path& path) {
    return read_scale_csv_text(read_text_file(path), path.string());
}

Json report_to_json(const ContinuityReport& report) {
    Json j;
    j["range"] = {{"start", format_timestamp(report.range.begin)},
                  {"end", format_timestamp(report.range.end)}};
    j["expected_count"] = report.expected_count;
    j["actual_count"] = report.actual_count;
    j["point_gaps"] = Json::array();
    for (const HourStamp t : report.point_gaps) j["point_gaps"].push_back(format_timestamp(t));
    j["block_gaps"] = Json::array();
    for (const HourRange& b : report.block_gaps)
        j["block_gaps"].push_back({{"start", format_timestamp(b.begin)},
                                   {"end", format_timestamp(b.end)},
                                   {"hours", b.count()}});
    j["sentinel_hits"] = Json::array();
    for (const SentinelHit& s : report.sentinel_hits)
        j["sentinel_hits"].push_back(
            {{"timestamp", format_timestamp(s.t)}, {"field", field_name(s.field)}});
    return j;
}

Json params_to_json(const NetworkParameters& params) {
    Json j;
    j["topology"] = {{"n_in", params.topology.n_in},
                     {"n_hidden", params.topology.n_hidden},
                     {"n_out", params.topology.n_out}};
    j["w_ih"] = params.w_ih.data;
    j["b_h"] = params.b_h;
    j["w_ho"] = params.w_ho.data;
    j["b_o"] = params.b_o;
    return j;
}

NetworkParameters params_from_json(const Json& j) {
    NetworkParameters p;
    p.topology.n_in = j.at("topology").at("n_in").get<std::size_t>();
    p.topology.n_hidden = j.at("topology").at("n_hidden").get<std::size_t>();
    p.topology.n_out = j.at("topology").at("n_out").get<std::size_t>();
    p.topology.validate();
    p.w_ih = Matrix(p.topology.n_hidden, p.topology.n_in);
    p.w_ih.data = j.at("w_ih").get<std::vector<double>>();
    p.b_h = j.at("b_h").get<std::vector<double>>();
    p.w_ho = Matrix(p.topology.n_out, p.topology.n_hidden);
    p.w_ho.data = j.at("w_ho").get<std::vector<double>>();
    p.b_o = j.at("b_o").get<std::vector<double>>();
    if (p.w_ih.data.size() != p.topology.n_hidden * p.topology.n_in ||
        p.b_h.size() != p.topology.n_hidden ||
        p.w_ho.data.size() != p.topology.n_out * p.topology.n_hidden ||
        p.b_o.size() != p.topology.n_out)
        throw DimensionError("network JSON: array sizes do not match the topology");
    return p;
}

Json norm_params_to_json(const NormParams& params) {
    Json j;
    std::vector<double> mins, maxs;
    for (const auto& [lo, hi] : params.feature_minmax) {
        mins.push_back(lo);
        maxs.push_back(hi);
    }
    j["feature_min"] = mins;
    j["feature_max"] = maxs;
    j["target_min"] = params.target_minmax.first;
    j["target_max"] = params.target_minmax.second;
    j["constant_features"] = params.constant_features;
    j["target_constant"] = params.target_constant;
    return j;
}

NormParams norm_params_from_json(const Json& j) {
    NormParams p;
    const auto mins = j.at("feature_min").get<std::vector<double>>();
    const auto maxs = j.at("feature_max").get<std::vector<double>>();
    if (mins.size() != maxs.size())
        throw DimensionError("norm params JSON: min/max lengths differ");
    for (std::size_t i = 0; i < mins.size(); ++i)
        p.feature_minmax.emplace_back(mins[i], maxs[i]);
    p.target_minmax = {j.at("target_min").get<double>(), j.at("target_max").get<double>()};
    p.constant_features = j.at("constant_features").get<std::vector<std::size_t>>();
    p.target_constant = j.at("target_constant").get<bool>();
    return p;
}

Json design_matrix_to_json(const DesignMatrix& dm) {
    Json j;
    j["feature_names"] = dm.feature_names;
    j["x"] = Json::array();
    for (std::size_t i = 0; i < dm.x.rows; ++i) {
        const auto row = dm.x.row(i);
        j["x"].push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["y"] = dm.y;
    j["period_starts"] = Json::array();
    for (const HourStamp t : dm.period_starts)
        j["period_starts"].push_back(format_timestamp(t));
    return j;
}

DesignMatrix design_matrix_from_json(const Json& j) {
    DesignMatrix dm;
    dm.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    dm.x = Matrix::from_rows(j.at("x").get<std::vector<std::vector<double>>>());
    dm.y = j.at("y").get<std::vector<double>>();
    for (const auto& t : j.at("period_starts"))
        dm.period_starts.push_back(parse_timestamp(t.get<std::string>()));
    if (dm.x.cols != dm.feature_names.size() || dm.y.size() != dm.x.rows ||
        dm.period_starts.size() != dm.x.rows)
        throw DimensionError("design matrix JSON: inconsistent sizes");
    return dm;
}

Json feature_spec_to_json(const FeatureSpec& spec) {
    Json j;
    j["scale"] = scale_name(spec.scale);
    j["lag_count"] = spec.lag_count;
    j["include_context"] = spec.include_context;
    if (spec.factor_mask.has_value())
        j["factor_mask"] = std::vector<std::string>(spec.factor_mask->begin(),
                                                    spec.factor_mask->end());
    else
        j["factor_mask"] = nullptr;
    return j;
}

FeatureSpec feature_spec_from_json(const Json& j) {
    FeatureSpec spec;
    spec.scale = parse_scale(j.at("scale").get<std::string>());
    spec.lag_count = j.at("lag_count").get<std::size_t>();
    spec.include_context = j.at("include_context").get<bool>();
    if (!j.at("factor_mask").is_null()) {
        const auto names = j.at("factor_mask").get<std::vector<std::string>>();
        spec.factor_mask = std::set<std::string>(names.begin(), names.end());
    }
    return spec;
}

Json metrics_to_json(const TrialMetrics& metrics) {
    return Json{{"accuracy_pct", metrics.accuracy_pct},
                {"mse_kwh2", metrics.mse_kwh2},
                {"mse_norm", metrics.mse_norm},
                {"seed", metrics.seed}};
}

Json repeated_to_json(const RepeatedResult& result) {
    Json j;
    j["mean"] = metrics_to_json(result.mean);
    j["trials"] = Json::array();
    for (const TrialMetrics& t : result.trials) j["trials"].push_back(metrics_to_json(t));
    return j;
}

Json formula_to_json(const FormulaCandidates& candidates) {
    Json j;
    j["eq1_min_hidden"] = candidates.eq1_min_hidden;
    j["eq2_range"] = {candidates.eq2_lo, candidates.eq2_hi};
    j["eq3"] = candidates.eq3;
    j["eq3_degenerate"] = candidates.eq3_degenerate;
    j["eq4"] = candidates.eq4;
    return j;
}

Json sweep_to_json(const SweepResult& result) {
    Json j;
    j["scale"] = scale_name(result.scale);
    j["cells"] = Json::array();
    for (const SweepCell& cell : result.cells) {
        Json c;
        c["lag_count"] = cell.lag_count;
        c["context"] = cell.context;
        c["result"] = repeated_to_json(cell.result);
        j["cells"].push_back(std::move(c));
    }
    return j;
}

Json ablation_to_json(const AblationResult& result) {
    Json j;
    j["baseline"] = repeated_to_json(result.baseline);
    j["drops"] = Json::array();
    for (const AblationEntry& d : result.drops) {
        Json e;
        e["factor"] = d.factor;
        e["accuracy_delta"] = d.accuracy_delta;
        e["result"] = repeated_to_json(d.result);
        j["drops"].push_back(std::move(e));
    }
    return j;
}

Json hidden_search_to_json(const HiddenSearchResult& result) {
    Json j;
    j["formula_candidates"] = formula_to_json(result.formula_candidates);
    j["tried"] = Json::array();
    for (const HiddenEntry& e : result.tried) {
        Json t;
        t["n_hidden"] = e.n_hidden;
        t["violations"] = e.violations;
        t["result"] = repeated_to_json(e.result);
        j["tried"].push_back(std::move(t));
    }
    j["best_by_mse"] = result.best_by_mse;
    return j;
}

namespace {

constexpr const char* kResultHeader =
    "grid_value,context,mean_accuracy,mean_mse_kwh2,mean_mse_norm,n_trials\n";

std::string result_row(const std::string& grid_value, const std::string& context,
                       const RepeatedResult& r) {
    return csv_row({grid_value, context, format_double(r.mean.accuracy_pct),
                    format_double(r.mean.mse_kwh2), format_double(r.mean.mse_norm),
                    std::to_string(r.trials.size())});
}

}  // namespace

std::string sweep_to_csv(const SweepResult& result) {
    std::string out = kResultHeader;
    for (const SweepCell& cell : result.cells)
        out += result_row(std::to_string(cell.lag_count), cell.context ? "on" : "off",
                          cell.result);
    return out;
}

std::string ablation_to_csv(const AblationResult& result) {
    std::string out = kResultHeader;
    out += result_row("baseline", "on", result.baseline);
    for (const AblationEntry& d : result.drops) out += result_row(d.factor, "on", d.result);
    return out;
}

std::string hidden_search_to_csv(const HiddenSearchResult& result) {
    std::string out = kResultHeader;
    for (const HiddenEntry& e : result.tried)
        out += result_row(std::to_string(e.n_hidden), "on", e.result);
    return out;
}

}  // namespace loadcast
