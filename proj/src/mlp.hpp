#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace chaos {

// Two-layer regressor: logistic-sigmoid hidden layer, identity output.
struct mlp_model {
  std::size_t nl = 0;       // input width
  std::size_t nh = 0;       // hidden width
  std::vector<double> w1;   // nh x nl, row-major
  std::vector<double> b1;   // nh
  std::vector<double> w2;   // nh
  double b2 = 0.0;
};

struct train_config {
  std::uint64_t seed = 1;
  std::size_t epochs = 300;
  double learning_rate = 1e-3;
  std::size_t batch_size = 200;
  double l2 = 0.1;       // decoupled weight decay, not applied to biases
  bool shuffle = true;
};

// Fan-balanced uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases;
// deterministic per seed.
mlp_model init_model(std::size_t nl, std::size_t nh, std::uint64_t seed);

double forward(const mlp_model& m, std::span<const double> window);

// Mini-batch Adam on mean-squared error; deterministic given the config.
// When epoch_loss is non-null it receives the mean training loss per epoch.
mlp_model train(const labeled_dataset& ds, std::size_t nh, const train_config& cfg,
                std::vector<double>* epoch_loss = nullptr);

// Compares analytic gradients of the batch MSE against central finite
// differences over every parameter; returns the largest scaled error.
double grad_check(const mlp_model& m, std::span<const std::vector<double>> inputs,
                  std::span<const double> targets, double fd_step = 1e-6);

// Replaces every first-layer weight of an nh=1 model by their mean; the
// remaining parameters stay frozen.
mlp_model simplify_equal_weights(const mlp_model& m);

// Text format: dimensions, activation identifiers, then weights row-major at
// 17 significant digits; round-trips bit-exactly.
std::string model_text(const mlp_model& m);
void save_model(const mlp_model& m, const std::string& path);
mlp_model load_model(const std::string& path);

}  // namespace chaos
