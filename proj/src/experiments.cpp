#include "loadcast/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace loadcast {

namespace {

// Runs fn(0..n-1), possibly on several threads; exceptions are rethrown on
// the calling thread. Output slots are indexed, so assembly order never
// depends on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Saturating sum of binomial coefficients C(m, i) for i = 0..min(m, n).
std::uint64_t binomial_prefix_sum(std::size_t m, std::size_t n, std::uint64_t cap) {
    std::uint64_t sum = 0;
    double coeff = 1.0;  // C(m, 0)
    for (std::size_t i = 0; i <= std::min(m, n); ++i) {
        if (i > 0) coeff = coeff * static_cast<double>(m - i + 1) / static_cast<double>(i);
        if (coeff >= static_cast<double>(cap) || sum >= cap) return cap;
        sum += static_cast<std::uint64_t>(coeff + 0.5);
        if (sum >= cap) return cap;
    }
    return sum;
}

std::size_t round_half_up(double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
}

}  // namespace

SplitSizes split_sizes(std::size_t n_samples, const SplitSpec& spec) {
    spec.validate();
    SplitSizes s;
    s.n_test = static_cast<std::size_t>(std::llround(n_samples * spec.test_fraction));
    s.n_val = static_cast<std::size_t>(std::llround(n_samples * spec.val_fraction));
    if (s.n_test < 1 || s.n_val < 1 || s.n_test + s.n_val >= n_samples)
        throw ConfigError("split: too few rows (" + std::to_string(n_samples) + ")");
    s.n_train = n_samples - s.n_test - s.n_val;
    return s;
}

TrialMetrics compute_metrics(std::span<const double> pred_kwh,
                             std::span<const double> actual_kwh,
                             std::span<const double> pred_norm,
                             std::span<const double> actual_norm) {
    if (pred_kwh.size() != actual_kwh.size() || pred_norm.size() != actual_norm.size() ||
        pred_kwh.size() != pred_norm.size())
        throw DimensionError("compute_metrics: length mismatch");
    if (pred_kwh.empty()) throw DimensionError("compute_metrics: empty input");

    constexpr double kEpsKwh = 1e-6;
    double acc_sum = 0.0;
    for (std::size_t i = 0; i < pred_kwh.size(); ++i) {
        const double rel =
            std::abs(pred_kwh[i] - actual_kwh[i]) / std::max(std::abs(actual_kwh[i]), kEpsKwh);
        acc_sum += std::max(0.0, 1.0 - rel);
    }

    TrialMetrics m;
    m.accuracy_pct = 100.0 * acc_sum / static_cast<double>(pred_kwh.size());
    m.mse_kwh2 = mse_loss(pred_kwh, actual_kwh);
    m.mse_norm = mse_loss(pred_norm, actual_norm);
    return m;
}

TrainedModel run_plan(const ExperimentPlan& plan, const ScaleDataset& dataset,
                      std::uint64_t seed) {
    const DesignMatrix dm = build_design_matrix(dataset, plan.features);
    if (plan.topology.n_in != dm.x.cols)
        throw DimensionError("plan topology n_in " + std::to_string(plan.topology.n_in) +
                             " does not match design-matrix width " +
                             std::to_string(dm.x.cols));

    SplitSpec split_spec = plan.split;
    split_spec.seed = seed;
    const SplitResult parts = split(dm, split_spec);

    TrainedModel model;
    model.norm = fit_normalizer(parts.train.x, parts.train.y);
    auto [train_x, train_y] = apply_normalizer(model.norm, parts.train.x, parts.train.y);
    auto [val_x, val_y] = apply_normalizer(model.norm, parts.val.x, parts.val.y);
    auto [test_x, test_y] = apply_normalizer(model.norm, parts.test.x, parts.test.y);

    TrainConfig config = plan.train;
    config.seed = seed;
    model.report = train(Dataset{std::move(train_x), std::move(train_y)},
                         Dataset{std::move(val_x), std::move(val_y)}, plan.topology, config);

    const std::vector<double> pred_norm = predict(model.report.final_params, test_x);
    const std::vector<double> pred_kwh = invert_target(model.norm, pred_norm);

    model.test_metrics = compute_metrics(pred_kwh, parts.test.y, pred_norm, test_y);
    model.test_metrics.seed = seed;
    return model;
}

TrialMetrics run_trial(const ExperimentPlan& plan, const ScaleDataset& dataset,
                       std::uint64_t seed) {
    return run_plan(plan, dataset, seed).test_metrics;
}

RepeatedResult run_repeated(const ExperimentPlan& plan, const ScaleDataset& dataset,
                            unsigned jobs) {
    if (plan.repeat_count < 1) throw ConfigError("run_repeated: repeat_count must be >= 1");

    RepeatedResult out;
    out.trials.resize(plan.repeat_count);
    parallel_for(plan.repeat_count, jobs, [&](std::size_t i) {
        out.trials[i] = run_trial(plan, dataset, plan.train.seed + i);
    });

    const auto n = static_cast<double>(plan.repeat_count);
    for (const TrialMetrics& t : out.trials) {
        out.mean.accuracy_pct += t.accuracy_pct / n;
        out.mean.mse_kwh2 += t.mse_kwh2 / n;
        out.mean.mse_norm += t.mse_norm / n;
    }
    out.mean.seed = plan.train.seed;
    return out;
}

const std::vector<std::size_t>& lag_grid(Scale scale) {
    static const std::vector<std::size_t> hourly = {0, 1, 2, 4, 6, 12, 24};
    static const std::vector<std::size_t> daily = {0, 1, 3, 5, 7, 9, 11, 13};
    static const std::vector<std::size_t> weekly = {0, 1, 2, 3, 4, 5};
    static const std::vector<std::size_t> monthly = {0, 1, 2, 3, 4};
    switch (scale) {
        case Scale::Hourly: return hourly;
        case Scale::Daily: return daily;
        case Scale::Weekly: return weekly;
        case Scale::Monthly: return monthly;
    }
    return hourly;
}

namespace {

ExperimentPlan cell_plan(const ExperimentPlan& base, Scale scale, std::size_t lag,
                         bool context) {
    ExperimentPlan plan = base;
    plan.features.scale = scale;
    plan.features.lag_count = lag;
    plan.features.include_context = context;
    plan.topology.n_in = plan.features.feature_width();
    return plan;
}

}  // namespace

SweepResult lag_sweep(Scale scale, const ScaleDataset& dataset, const ExperimentPlan& base_plan,
                      unsigned jobs) {
    if (dataset.scale != scale)
        throw ConfigError("lag_sweep: dataset scale does not match requested scale");

    SweepResult result;
    result.scale = scale;
    for (const std::size_t lag : lag_grid(scale)) {
        const ExperimentPlan plan = cell_plan(base_plan, scale, lag, true);
        result.cells.push_back(SweepCell{lag, true, run_repeated(plan, dataset, jobs)});
    }
    for (const std::size_t lag : lag_grid(scale)) {
        if (lag == 0) continue;  // no inputs at all without context
        const ExperimentPlan plan = cell_plan(base_plan, scale, lag, false);
        result.cells.push_back(SweepCell{lag, false, run_repeated(plan, dataset, jobs)});
    }
    return result;
}

AblationResult factor_ablation(Scale scale, const ScaleDataset& dataset,
                               const ExperimentPlan& base_plan, unsigned jobs) {
    if (dataset.scale != scale)
        throw ConfigError("factor_ablation: dataset scale does not match requested scale");
    if (!base_plan.features.include_context)
        throw ConfigError("factor_ablation: base plan must include context factors");

    ExperimentPlan baseline_plan = base_plan;
    baseline_plan.features.scale = scale;
    baseline_plan.topology.n_in = baseline_plan.features.feature_width();
    const std::vector<std::string> included = baseline_plan.features.included_context();

    AblationResult result;
    result.baseline = run_repeated(baseline_plan, dataset, jobs);
    for (const std::string& factor : included) {
        ExperimentPlan plan = baseline_plan;
        std::set<std::string> mask(included.begin(), included.end());
        mask.erase(factor);
        plan.features.factor_mask = std::move(mask);
        plan.topology.n_in = plan.features.feature_width();
        AblationEntry entry;
        entry.factor = factor;
        entry.result = run_repeated(plan, dataset, jobs);
        entry.accuracy_delta =
            entry.result.mean.accuracy_pct - result.baseline.mean.accuracy_pct;
        result.drops.push_back(std::move(entry));
    }
    return result;
}

FormulaCandidates hidden_formula_candidates(std::size_t n_in, std::size_t n_out,
                                            std::size_t k_samples) {
    if (n_in < 1 || n_out < 1 || k_samples < 1)
        throw ConfigError("hidden_formula_candidates: all arguments must be >= 1");

    FormulaCandidates out;
    const std::uint64_t cap = static_cast<std::uint64_t>(k_samples) + 1;
    for (std::size_t m = 1;; ++m) {
        if (binomial_prefix_sum(m, n_in, cap) > k_samples) {
            out.eq1_min_hidden = m;
            break;
        }
    }
    const double root = std::sqrt(static_cast<double>(n_in + n_out));
    out.eq2_lo = round_half_up(root + 1.0);
    out.eq2_hi = round_half_up(root + 10.0);
    const std::size_t raw3 = round_half_up(std::log2(static_cast<double>(n_in)));
    out.eq3_degenerate = raw3 < 1;
    out.eq3 = std::max<std::size_t>(raw3, 1);
    out.eq4 = 2 * n_in + 1;
    return out;
}

std::vector<std::string> check_capacity(const Topology& topology, std::size_t n_train) {
    std::vector<std::string> violations;
    const auto n = static_cast<long long>(n_train);
    if (static_cast<long long>(topology.n_hidden) >= n - 1)
        violations.push_back("hidden nodes (" + std::to_string(topology.n_hidden) +
                             ") must be fewer than training samples - 1 (" +
                             std::to_string(n - 1) + ")");
    const std::size_t params = topology.parameter_count();
    if (static_cast<long long>(params) >= n)
        violations.push_back("parameter count (" + std::to_string(params) +
                             ") must be below the training sample count (" +
                             std::to_string(n_train) + ")");
    return violations;
}

HiddenSearchResult hidden_layer_search(const ExperimentPlan& plan, const ScaleDataset& dataset,
                                       const std::vector<std::size_t>& candidates,
                                       unsigned jobs) {
    if (candidates.empty()) throw ConfigError("hidden_layer_search: no candidates");

    const std::size_t n_samples = dataset.n_rows() - plan.features.lag_count;
    const SplitSizes sizes = split_sizes(n_samples, plan.split);

    HiddenSearchResult result;
    result.formula_candidates =
        hidden_formula_candidates(plan.features.feature_width(), plan.topology.n_out,
                                  sizes.n_train);

    for (const std::size_t n_hidden : candidates) {
        ExperimentPlan candidate_plan = plan;
        candidate_plan.topology.n_hidden = n_hidden;
        candidate_plan.topology.n_in = candidate_plan.features.feature_width();
        HiddenEntry entry;
        entry.n_hidden = n_hidden;
        entry.violations = check_capacity(candidate_plan.topology, sizes.n_train);
        entry.result = run_repeated(candidate_plan, dataset, jobs);
        result.tried.push_back(std::move(entry));
    }

    result.best_by_mse = best_hidden_by_mse(result.tried);
    return result;
}

std::size_t best_hidden_by_mse(const std::vector<HiddenEntry>& tried) {
    if (tried.empty()) throw ConfigError("best_hidden_by_mse: empty table");
    const HiddenEntry* best = &tried.front();
    for (const HiddenEntry& entry : tried) {
        if (entry.result.mean.mse_kwh2 < best->result.mean.mse_kwh2 ||
            (entry.result.mean.mse_kwh2 == best->result.mean.mse_kwh2 &&
             entry.n_hidden < best->n_hidden))
            best = &entry;
    }
    return best->n_hidden;
}

}  // namespace loadcast
