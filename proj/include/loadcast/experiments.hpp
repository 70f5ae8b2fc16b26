#pragma once

#include <span>
#include <string>
#include <vector>

#include "loadcast/features.hpp"
#include "loadcast/nn.hpp"

namespace loadcast {

struct TrialMetrics {
    double accuracy_pct = 0.0;  // clamped mean relative accuracy, in [0, 100]
    double mse_kwh2 = 0.0;      // on denormalized predictions
    double mse_norm = 0.0;      // in normalized target space
    std::uint64_t seed = 0;
};

struct ExperimentPlan {
    FeatureSpec features;
    Topology topology;
    TrainConfig train;
    SplitSpec split;
    std::size_t repeat_count = 10;
};

struct RepeatedResult {
    TrialMetrics mean;
    std::vector<TrialMetrics> trials;
};

struct SweepCell {
    std::size_t lag_count = 0;
    bool context = false;
    RepeatedResult result;
};

struct SweepResult {
    Scale scale = Scale::Daily;
    std::vector<SweepCell> cells;  // context-on cells first, grid order
};

struct AblationEntry {
    std::string factor;
    RepeatedResult result;
    double accuracy_delta = 0.0;  // drop mean accuracy minus baseline mean accuracy
};

struct AblationResult {
    RepeatedResult baseline;
    std::vector<AblationEntry> drops;
};

struct FormulaCandidates {
    std::size_t eq1_min_hidden = 0;  // smallest m with sum of C(m,i), i=0..n_in, > k
    std::size_t eq2_lo = 0;          // round(sqrt(n_in + n_out) + 1)
    std::size_t eq2_hi = 0;          // round(sqrt(n_in + n_out) + 10)
    std::size_t eq3 = 0;             // round(log2 n_in), clamped to >= 1
    bool eq3_degenerate = false;
    std::size_t eq4 = 0;             // 2 n_in + 1
};

struct HiddenEntry {
    std::size_t n_hidden = 0;
    RepeatedResult result;
    std::vector<std::string> violations;  // capacity conditions breached, if any
};

struct HiddenSearchResult {
    FormulaCandidates formula_candidates;
    std::vector<HiddenEntry> tried;
    std::size_t best_by_mse = 0;  // ties break toward fewer nodes
};

struct SplitSizes {
    std::size_t n_train = 0;
    std::size_t n_val = 0;
    std::size_t n_test = 0;
};

// The sizes split() would produce for n samples.
SplitSizes split_sizes(std::size_t n_samples, const SplitSpec& spec);

// accuracy = 100 * mean_i max(0, 1 - |pred_i - actual_i| / max(|actual_i|, 1e-6)).
TrialMetrics compute_metrics(std::span<const double> pred_kwh,
                             std::span<const double> actual_kwh,
                             std::span<const double> pred_norm,
                             std::span<const double> actual_norm);

// Everything a single training run produces, for model persistence.
struct TrainedModel {
    TrainReport report;
    NormParams norm;
    TrialMetrics test_metrics;
};

// build_design_matrix -> split -> fit/apply normalizer -> train -> predict on
// the test tail -> invert -> compute_metrics. `seed` drives both the
// validation draw and the weight initialization.
TrainedModel run_plan(const ExperimentPlan& plan, const ScaleDataset& dataset,
                      std::uint64_t seed);
TrialMetrics run_trial(const ExperimentPlan& plan, const ScaleDataset& dataset,
                       std::uint64_t seed);

// Trials use seeds plan.train.seed .. plan.train.seed + repeat_count - 1.
RepeatedResult run_repeated(const ExperimentPlan& plan, const ScaleDataset& dataset,
                            unsigned jobs = 1);

// Lag grids per scale: hourly {0,1,2,4,6,12,24}, daily {0,1,3,5,7,9,11,13},
// weekly {0,1,2,3,4,5}, monthly {0,1,2,3,4}.
const std::vector<std::size_t>& lag_grid(Scale scale);

// Full grid with context on, the grid minus 0 with context off; the topology
// input width is recomputed per cell.
SweepResult lag_sweep(Scale scale, const ScaleDataset& dataset, const ExperimentPlan& base_plan,
                      unsigned jobs = 1);

// Baseline with the full factor mask plus one run per included context column
// with that column dropped. Every run uses the same seed sequence.
AblationResult factor_ablation(Scale scale, const ScaleDataset& dataset,
                               const ExperimentPlan& base_plan, unsigned jobs = 1);

FormulaCandidates hidden_formula_candidates(std::size_t n_in, std::size_t n_out,
                                            std::size_t k_samples);

// Flags n_hidden >= n_train - 1 and parameter count >= n_train.
std::vector<std::string> check_capacity(const Topology& topology, std::size_t n_train);

// Lowest mean kWh^2 MSE; ties break toward fewer hidden nodes.
std::size_t best_hidden_by_mse(const std::vector<HiddenEntry>& tried);

// Violating candidates still run, carrying their warnings.
HiddenSearchResult hidden_layer_search(const ExperimentPlan& plan, const ScaleDataset& dataset,
                                       const std::vector<std::size_t>& candidates,
                                       unsigned jobs = 1);

}  // namespace loadcast
