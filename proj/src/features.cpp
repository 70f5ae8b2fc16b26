#include "loadcast/features.hpp"

#include <algorithm>
#include <cmath>

#include "loadcast/rng.hpp"

namespace loadcast {

std::vector<std::string> FeatureSpec::included_context() const {
    if (!include_context) return {};
    const std::vector<std::string>& cols = schema_columns(scale);
    std::vector<std::string> context(cols.begin() + 1, cols.end());
    if (!factor_mask.has_value()) return context;
    for (const std::string& name : *factor_mask)
        if (std::find(context.begin(), context.end(), name) == context.end())
            throw ConfigError("unknown factor name '" + name + "' for " + scale_name(scale) +
                              " scale");
    std::vector<std::string> kept;
    for (const std::string& name : context)
        if (factor_mask->count(name)) kept.push_back(name);
    return kept;
}

std::size_t FeatureSpec::feature_width() const { return lag_count + included_context().size(); }

void FeatureSpec::validate() const {
    if (feature_width() < 1)
        throw ConfigError("feature spec selects no inputs (no lags and no context columns)");
}

DesignMatrix build_design_matrix(const ScaleDataset& dataset, const FeatureSpec& spec) {
    spec.validate();
    if (dataset.scale != spec.scale)
        throw ConfigError(std::string("design matrix: dataset scale ") +
                          scale_name(dataset.scale) + " does not match spec scale " +
                          scale_name(spec.scale));
    const std::size_t n = dataset.n_rows();
    if (n <= spec.lag_count)
        throw DataError("insufficient history: " + std::to_string(n) + " rows for lag_count " +
                        std::to_string(spec.lag_count));

    const std::vector<std::string> context = spec.included_context();
    std::vector<std::size_t> context_idx;
    for (const std::string& name : context) {
        const auto it = std::find(dataset.columns.begin(), dataset.columns.end(), name);
        context_idx.push_back(static_cast<std::size_t>(it - dataset.columns.begin()));
    }

    DesignMatrix dm;
    const std::size_t n_samples = n - spec.lag_count;
    const std::size_t width = spec.lag_count + context.size();
    dm.x = Matrix(n_samples, width);
    dm.y.resize(n_samples);
    dm.period_starts.resize(n_samples);

    for (std::size_t j = 0; j < spec.lag_count; ++j)
        dm.feature_names.push_back("kwh_lag" + std::to_string(spec.lag_count - j));
    dm.feature_names.insert(dm.feature_names.end(), context.begin(), context.end());

    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::size_t t = i + spec.lag_count;
        auto row = dm.x.row(i);
        for (std::size_t j = 0; j < spec.lag_count; ++j)
            row[j] = dataset.rows[t - spec.lag_count + j][0];
        for (std::size_t j = 0; j < context_idx.size(); ++j)
            row[spec.lag_count + j] = dataset.rows[t][context_idx[j]];
        dm.y[i] = dataset.rows[t][0];
        dm.period_starts[i] = dataset.period_starts[t];
    }

    for (double v : dm.x.data)
        if (!std::isfinite(v)) throw DataError("design matrix contains a non-finite feature");
    for (double v : dm.y)
        if (!std::isfinite(v)) throw DataError("design matrix contains a non-finite target");
    return dm;
}

NormParams fit_normalizer(const Matrix& train_x, const std::vector<double>& train_y) {
    if (train_x.rows < 2) throw ConfigError("fit_normalizer: need at least 2 training samples");
    if (train_y.size() != train_x.rows)
        throw DimensionError("fit_normalizer: target length does not match row count");

    NormParams params;
    params.feature_minmax.resize(train_x.cols);
    for (std::size_t j = 0; j < train_x.cols; ++j) {
        double lo = train_x(0, j), hi = train_x(0, j);
        for (std::size_t i = 1; i < train_x.rows; ++i) {
            lo = std::min(lo, train_x(i, j));
            hi = std::max(hi, train_x(i, j));
        }
        params.feature_minmax[j] = {lo, hi};
        if (lo == hi) params.constant_features.push_back(j);
    }
    const auto [lo_it, hi_it] = std::minmax_element(train_y.begin(), train_y.end());
    params.target_minmax = {*lo_it, *hi_it};
    params.target_constant = *lo_it == *hi_it;
    return params;
}

namespace {

double norm_value(double v, double lo, double hi) {
    if (lo == hi) return 0.0;
    return 2.0 * (v - lo) / (hi - lo) - 1.0;
}

}  // namespace

std::pair<Matrix, std::vector<double>> apply_normalizer(const NormParams& params,
                                                        const Matrix& x,
                                                        const std::vector<double>& y) {
    if (x.cols != params.feature_minmax.size())
        throw DimensionError("apply_normalizer: width " + std::to_string(x.cols) +
                             " does not match fitted width " +
                             std::to_string(params.feature_minmax.size()));
    if (y.size() != x.rows)
        throw DimensionError("apply_normalizer: target length does not match row count");

    Matrix xn(x.rows, x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
        const auto [lo, hi] = params.feature_minmax[j];
        for (std::size_t i = 0; i < x.rows; ++i) xn(i, j) = norm_value(x(i, j), lo, hi);
    }
    std::vector<double> yn(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yn[i] = norm_value(y[i], params.target_minmax.first, params.target_minmax.second);
    return {std::move(xn), std::move(yn)};
}

std::vector<double> invert_target(const NormParams& params,
                                  const std::vector<double>& y_normalized) {
    const auto [lo, hi] = params.target_minmax;
    std::vector<double> out(y_normalized.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = params.target_constant ? lo : (y_normalized[i] + 1.0) * 0.5 * (hi - lo) + lo;
    return out;
}

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0) || !(val_fraction > 0.0) || !(test_fraction > 0.0))
        throw ConfigError("split: all fractions must be positive");
    if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
        throw ConfigError("split: fractions must sum to 1");
}

namespace {

DesignMatrix subset(const DesignMatrix& dm, const std::vector<std::size_t>& indices) {
    DesignMatrix out;
    out.feature_names = dm.feature_names;
    out.x = Matrix(indices.size(), dm.x.cols);
    out.y.resize(indices.size());
    out.period_starts.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = dm.x.row(indices[i]);
        std::copy(src.begin(), src.end(), out.x.row(i).begin());
        out.y[i] = dm.y[indices[i]];
        out.period_starts[i] = dm.period_starts[indices[i]];
    }
    return out;
}

}  // namespace

SplitResult split(const DesignMatrix& matrix, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = matrix.n_samples();
    const auto n_test = static_cast<std::size_t>(std::llround(n * spec.test_fraction));
    const auto n_val = static_cast<std::size_t>(std::llround(n * spec.val_fraction));
    if (n_test < 1 || n_val < 1 || n_test + n_val >= n)
        throw ConfigError("split: too few rows (" + std::to_string(n) +
                          ") for a nonempty train/val/test partition");
    const std::size_t n_rest = n - n_test;

    std::vector<std::size_t> rest(n_rest);
    for (std::size_t i = 0; i < n_rest; ++i) rest[i] = i;
    Rng rng(spec.seed);
    rng.shuffle(rest);

    std::vector<std::size_t> val_idx(rest.begin(), rest.begin() + n_val);
    std::vector<std::size_t> train_idx(rest.begin() + n_val, rest.end());
    std::sort(val_idx.begin(), val_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::vector<std::size_t> test_idx(n_test);
    for (std::size_t i = 0; i < n_test; ++i) test_idx[i] = n_rest + i;

    return SplitResult{subset(matrix, train_idx), subset(matrix, val_idx),
                       subset(matrix, test_idx)};
}

}  // namespace loadcast
