// Copyright 2026 The mimown Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Full-batch gradient descent with heavy-ball momentum on the quadratic cost
//
//   E = (1/S) sum_i (t_i - y_i)^2,
//
// updating output weights, dilations and translations. Gradients are
// analytic; the (order+1)-th Beta derivative supplies d psi / d a and
// d psi / d b.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mimown/matrix.hpp"
#include "mimown/network.hpp"

namespace mimown {

enum class InputMode {
  ExampleAsInput,   // auto-association: input = target = example
  UnitRandomInput,  // fixed seeded unit-norm random input, target = example
};

std::string_view to_string(InputMode mode);
InputMode input_mode_from_string(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  int max_epochs = 5000;
  double target_mse = 1e-4;
  InputMode input_mode = InputMode::ExampleAsInput;
  std::uint64_t seed = 0;
  double min_dilation = 2e-3;
  // false freezes every a_j and b_j (weight-only least squares).
  bool update_nodes = true;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct TrainReport {
  int epochs_run = 0;
  double final_mse = 0.0;
  std::vector<double> mse_history;
  bool converged = false;

  bool operator==(const TrainReport&) const = default;
};

struct Gradients {
  Matrix d_weights;  // N_w x S, one entry per (node, channel)
  std::vector<double> d_dilation;
  std::vector<double> d_translation;
};

struct Sample {
  std::vector<double> input;
  std::vector<double> target;
};

// (1/S) sum_i (t_i - y_i)^2 for given input and target.
double quadratic_cost(const MimoNetwork& net, std::span<const double> input,
                      std::span<const double> target);

// Gradient of quadratic_cost. d_weights is always per entry; in Shared mode
// the gradient of the shared alpha_j is the row sum.
Gradients gradients(const MimoNetwork& net, std::span<const double> input,
                    std::span<const double> target);

// Builds (input, target) pairs for the auto-associative or impulse-input
// scheme. Throws on an empty or ragged example list.
std::vector<Sample> make_samples(std::span<const std::vector<double>> examples,
                                 InputMode mode, std::uint64_t seed);

struct TrainResult {
  MimoNetwork net;
  TrainReport report;
};

// One epoch = one full-batch gradient (mean over samples), one momentum
// step, then the mean cost of the updated network is recorded. Stops as
// soon as that cost is <= target_mse, or after max_epochs.
TrainResult train_samples(MimoNetwork net, std::span<const Sample> samples,
                          const TrainConfig& config);

// train_samples on make_samples(examples, config.input_mode, config.seed).
TrainResult train(MimoNetwork net, std::span<const std::vector<double>> examples,
                  const TrainConfig& config);

// Central-difference check of gradients() over every trainable parameter
// (weights, dilations, translations). Returns
// max |analytic - numeric| / max(1e-8, |numeric|).
double finite_diff_check(const MimoNetwork& net, std::span<const double> input,
                         std::span<const double> target, double step);

// `epoch,mse` with a header row.
std::string mse_history_csv(const TrainReport& report);

}  // namespace mimown
