#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "loadcast/matrix.hpp"

namespace loadcast {

// Layer sizes of the input -> hidden -> output network. The output layer is
// a single node carrying the predicted consumption value.
struct Topology {
    std::size_t n_in = 1;
    std::size_t n_hidden = 1;
    std::size_t n_out = 1;

    void validate() const;  // throws ConfigError

    // Total number of weights and biases.
    std::size_t parameter_count() const {
        return (n_in + 1) * n_hidden + (n_hidden + 1) * n_out;
    }
};

// Weights and biases. w_ih is n_hidden x n_in, w_ho is n_out x n_hidden.
struct NetworkParameters {
    Topology topology;
    Matrix w_ih;
    std::vector<double> b_h;
    Matrix w_ho;
    std::vector<double> b_o;

    bool same_shape(const NetworkParameters& other) const;
    bool all_finite() const;
};

// Gradients share the parameter layout.
using Gradients = NetworkParameters;

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t max_epochs = 1000;
    std::size_t patience = 25;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

struct TrainReport {
    std::size_t epochs_run = 0;
    std::vector<double> train_loss_curve;
    std::vector<double> val_loss_curve;
    NetworkParameters final_params;  // parameters achieving best_val_loss
    double best_val_loss = 0.0;
};

// Feature matrix plus aligned targets (normally already normalized).
struct Dataset {
    Matrix x;
    std::vector<double> y;
};

struct ForwardResult {
    double prediction = 0.0;
    std::vector<double> hidden;
};

// All entries drawn uniform on [-0.5, 0.5] from a deterministic stream;
// identical (topology, seed) pairs give identical parameters.
NetworkParameters init_parameters(const Topology& topology, std::uint64_t seed);

// Hidden layer: tanh squashing. Output: identity.
ForwardResult forward(const NetworkParameters& params, std::span<const double> x);

double mse_loss(std::span<const double> predictions, std::span<const double> targets);

// Exact analytic gradient of mse_loss over the batch.
Gradients backward(const NetworkParameters& params, const Matrix& batch_x,
                   std::span<const double> batch_y);

// p' = p - learning_rate * g, elementwise.
NetworkParameters gd_step(const NetworkParameters& params, const Gradients& gradients,
                          double learning_rate);

// Full-batch gradient descent, one step per epoch, early stop on `patience`
// consecutive epochs without validation improvement. Throws DivergenceError
// (with the epoch index) on a non-finite loss.
TrainReport train(const Dataset& train_set, const Dataset& val_set, const Topology& topology,
                  const TrainConfig& config);

std::vector<double> predict(const NetworkParameters& params, const Matrix& rows);

}  // namespace loadcast
