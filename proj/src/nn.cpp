#include "loadcast/nn.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "loadcast/rng.hpp"

namespace loadcast {

void Topology::validate() const {
    if (n_in < 1 || n_hidden < 1 || n_out < 1)
        throw ConfigError("topology: all layer sizes must be >= 1");
    if (n_out != 1)
        throw ConfigError("topology: the output layer has exactly one node");
}

bool NetworkParameters::same_shape(const NetworkParameters& other) const {
    return w_ih.same_shape(other.w_ih) && b_h.size() == other.b_h.size() &&
           w_ho.same_shape(other.w_ho) && b_o.size() == other.b_o.size();
}

bool NetworkParameters::all_finite() const {
    auto finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    return finite(w_ih.data) && finite(b_h) && finite(w_ho.data) && finite(b_o);
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("train config: learning_rate must be > 0");
    if (max_epochs < 1) throw ConfigError("train config: max_epochs must be >= 1");
    if (patience < 1) throw ConfigError("train config: patience must be >= 1");
}

NetworkParameters init_parameters(const Topology& topology, std::uint64_t seed) {
    topology.validate();
    NetworkParameters p;
    p.topology = topology;
    p.w_ih = Matrix(topology.n_hidden, topology.n_in);
    p.b_h.resize(topology.n_hidden);
    p.w_ho = Matrix(topology.n_out, topology.n_hidden);
    p.b_o.resize(topology.n_out);

    Rng rng(seed);
    for (double& w : p.w_ih.data) w = rng.uniform(-0.5, 0.5);
    for (double& b : p.b_h) b = rng.uniform(-0.5, 0.5);
    for (double& w : p.w_ho.data) w = rng.uniform(-0.5, 0.5);
    for (double& b : p.b_o) b = rng.uniform(-0.5, 0.5);
    return p;
}

ForwardResult forward(const NetworkParameters& params, std::span<const double> x) {
    const Topology& t = params.topology;
    if (x.size() != t.n_in)
        throw DimensionError("forward: input width " + std::to_string(x.size()) +
                             " != n_in " + std::to_string(t.n_in));
    ForwardResult out;
    out.hidden.resize(t.n_hidden);
    for (std::size_t j = 0; j < t.n_hidden; ++j) {
        double z = params.b_h[j];
        const auto w = params.w_ih.row(j);
        for (std::size_t k = 0; k < t.n_in; ++k) z += w[k] * x[k];
        out.hidden[j] = std::tanh(z);
    }
    double pred = params.b_o[0];
    const auto wo = params.w_ho.row(0);
    for (std::size_t j = 0; j < t.n_hidden; ++j) pred += wo[j] * out.hidden[j];
    out.prediction = pred;
    return out;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size())
        throw DimensionError("mse_loss: length mismatch");
    if (predictions.empty()) throw DimensionError("mse_loss: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(predictions.size());
}

Gradients backward(const NetworkParameters& params, const Matrix& batch_x,
                   std::span<const double> batch_y) {
    const Topology& t = params.topology;
    if (batch_x.rows == 0) throw DimensionError("backward: empty batch");
    if (batch_x.cols != t.n_in || batch_y.size() != batch_x.rows)
        throw DimensionError("backward: batch shape does not match topology");

    Gradients g;
    g.topology = t;
    g.w_ih = Matrix(t.n_hidden, t.n_in);
    g.b_h.assign(t.n_hidden, 0.0);
    g.w_ho = Matrix(t.n_out, t.n_hidden);
    g.b_o.assign(t.n_out, 0.0);

    const double inv_n = 1.0 / static_cast<double>(batch_x.rows);
    std::vector<double> hidden(t.n_hidden);
    for (std::size_t r = 0; r < batch_x.rows; ++r) {
        const auto x = batch_x.row(r);
        for (std::size_t j = 0; j < t.n_hidden; ++j) {
            double z = params.b_h[j];
            const auto w = params.w_ih.row(j);
            for (std::size_t k = 0; k < t.n_in; ++k) z += w[k] * x[k];
            hidden[j] = std::tanh(z);
        }
        double pred = params.b_o[0];
        for (std::size_t j = 0; j < t.n_hidden; ++j) pred += params.w_ho(0, j) * hidden[j];

        // d(mean squared error)/d(prediction) for this row.
        const double dpred = 2.0 * (pred - batch_y[r]) * inv_n;
        g.b_o[0] += dpred;
        for (std::size_t j = 0; j < t.n_hidden; ++j) {
            g.w_ho(0, j) += dpred * hidden[j];
            const double dz = dpred * params.w_ho(0, j) * (1.0 - hidden[j] * hidden[j]);
            g.b_h[j] += dz;
            auto gw = g.w_ih.row(j);
            for (std::size_t k = 0; k < t.n_in; ++k) gw[k] += dz * x[k];
        }
    }
    return g;
}

NetworkParameters gd_step(const NetworkParameters& params, const Gradients& gradients,
                          double learning_rate) {
    if (!params.same_shape(gradients))
        throw DimensionError("gd_step: gradient shape does not match parameters");
    if (!(learning_rate > 0.0)) throw ConfigError("gd_step: learning_rate must be > 0");
    NetworkParameters out = params;
    for (std::size_t i = 0; i < out.w_ih.data.size(); ++i)
        out.w_ih.data[i] -= learning_rate * gradients.w_ih.data[i];
    for (std::size_t i = 0; i < out.b_h.size(); ++i)
        out.b_h[i] -= learning_rate * gradients.b_h[i];
    for (std::size_t i = 0; i < out.w_ho.data.size(); ++i)
        out.w_ho.data[i] -= learning_rate * gradients.w_ho.data[i];
    for (std::size_t i = 0; i < out.b_o.size(); ++i)
        out.b_o[i] -= learning_rate * gradients.b_o[i];
    return out;
}

TrainReport train(const Dataset& train_set, const Dataset& val_set, const Topology& topology,
                  const TrainConfig& config) {
    topology.validate();
    config.validate();
    if (train_set.x.rows == 0 || val_set.x.rows == 0)
        throw DataError("train: training and validation sets must be nonempty");
    if (train_set.x.cols != topology.n_in || val_set.x.cols != topology.n_in)
        throw DimensionError("train: feature width does not match topology n_in");
    if (train_set.y.size() != train_set.x.rows || val_set.y.size() != val_set.x.rows)
        throw DimensionError("train: target length does not match row count");

    NetworkParameters params = init_parameters(topology, config.seed);
    TrainReport report;
    report.final_params = params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t epochs_since_best = 0;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const Gradients grads = backward(params, train_set.x, train_set.y);
        params = gd_step(params, grads, config.learning_rate);

        const double train_loss = mse_loss(predict(params, train_set.x), train_set.y);
        const double val_loss = mse_loss(predict(params, val_set.x), val_set.y);
        report.train_loss_curve.push_back(train_loss);
        report.val_loss_curve.push_back(val_loss);
        report.epochs_run = epoch;

        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch),
                                  epoch);

        if (val_loss < best_val) {
            best_val = val_loss;
            report.final_params = params;
            epochs_since_best = 0;
        } else if (++epochs_since_best >= config.patience) {
            break;
        }
    }
    report.best_val_loss = best_val;
    return report;
}

std::vector<double> predict(const NetworkParameters& params, const Matrix& rows) {
    if (rows.rows > 0 && rows.cols != params.topology.n_in)
        throw DimensionError("predict: row width does not match topology n_in");
    std::vector<double> out;
    out.reserve(rows.rows);
    for (std::size_t r = 0; r < rows.rows; ++r)
        out.push_back(forward(params, rows.row(r)).prediction);
    return out;
}

}  // namespace loadcast
