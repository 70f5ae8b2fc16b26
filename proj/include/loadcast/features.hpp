#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loadcast/aggregate.hpp"
#include "loadcast/matrix.hpp"

namespace loadcast {

// Which inputs feed the network: `lag_count` trailing consumption values
// plus, optionally, the target period's context columns.
struct FeatureSpec {
    Scale scale = Scale::Daily;
    std::size_t lag_count = 0;
    bool include_context = true;
    // Context columns to keep; nullopt keeps all of them.
    std::optional<std::set<std::string>> factor_mask;

    // Resolved context column names, in schema order. Validates the mask.
    std::vector<std::string> included_context() const;
    std::size_t feature_width() const;
    void validate() const;
};

struct DesignMatrix {
    Matrix x;
    std::vector<double> y;  // kWh targets
    std::vector<std::string> feature_names;
    std::vector<HourStamp> period_starts;

    std::size_t n_samples() const { return x.rows; }
};

// Per-feature and target min/max, fitted on training rows only. Constant
// features (min == max) normalize to 0 and are listed for warning surfaces.
struct NormParams {
    std::vector<std::pair<double, double>> feature_minmax;
    std::pair<double, double> target_minmax{0.0, 0.0};
    std::vector<std::size_t> constant_features;
    bool target_constant = false;
};

struct SplitSpec {
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

struct SplitResult {
    DesignMatrix train;
    DesignMatrix val;
    DesignMatrix test;
};

DesignMatrix build_design_matrix(const ScaleDataset& dataset, const FeatureSpec& spec);

NormParams fit_normalizer(const Matrix& train_x, const std::vector<double>& train_y);

// x' = 2(x - min)/(max - min) - 1 per feature; same map for targets.
std::pair<Matrix, std::vector<double>> apply_normalizer(const NormParams& params,
                                                        const Matrix& x,
                                                        const std::vector<double>& y);

std::vector<double> invert_target(const NormParams& params,
                                  const std::vector<double>& y_normalized);

// Test rows are the chronological tail; validation rows are drawn uniformly
// (seeded) from the remainder; training rows are the rest.
SplitResult split(const DesignMatrix& matrix, const SplitSpec& spec);

}  // namespace loadcast
