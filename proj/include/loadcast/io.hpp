#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "loadcast/aggregate.hpp"
#include "loadcast/experiments.hpp"
#include "loadcast/features.hpp"
#include "loadcast/ingest.hpp"
#include "loadcast/nn.hpp"

namespace loadcast {

// Insertion-ordered so serialized output is byte-stable.
using Json = nlohmann::ordered_json;

// Clean series CSV: header "timestamp,kwh,temp_f,humidity_pct". Readers skip
// leading '#' comment lines.
std::string write_clean_csv(const CleanHourlySeries& series);
CleanHourlySeries read_clean_csv_text(const std::string& csv, const std::string& source);
CleanHourlySeries read_clean_csv(const std::filesystem::path& path);

// ScaleDataset CSV: "period_start" followed by the schema columns in order.
std::string write_scale_csv(const ScaleDataset& dataset);
ScaleDataset read_scale_csv_text(const std::string& csv, const std::string& source);
ScaleDataset read_scale_csv(const std::filesystem::path& path);

Json report_to_json(const ContinuityReport& report);

// Topology plus row-major weight arrays.
Json params_to_json(const NetworkParameters& params);
NetworkParameters params_from_json(const Json& j);

Json norm_params_to_json(const NormParams& params);
NormParams norm_params_from_json(const Json& j);

// Reproducibility bundle: feature rows, targets, names, period starts.
Json design_matrix_to_json(const DesignMatrix& dm);
DesignMatrix design_matrix_from_json(const Json& j);

Json feature_spec_to_json(const FeatureSpec& spec);
FeatureSpec feature_spec_from_json(const Json& j);

Json metrics_to_json(const TrialMetrics& metrics);
Json repeated_to_json(const RepeatedResult& result);
Json formula_to_json(const FormulaCandidates& candidates);

Json sweep_to_json(const SweepResult& result);
Json ablation_to_json(const AblationResult& result);
Json hidden_search_to_json(const HiddenSearchResult& result);

// Shared plot-data layout:
// grid_value,context,mean_accuracy,mean_mse_kwh2,mean_mse_norm,n_trials
std::string sweep_to_csv(const SweepResult& result);
std::string ablation_to_csv(const AblationResult& result);
std::string hidden_search_to_csv(const HiddenSearchResult& result);

}  // namespace loadcast
