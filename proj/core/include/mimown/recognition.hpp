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

// One auto-associative MIMO wavelet network per acoustic unit; a test vector
// is assigned to the class whose network reconstructs it best.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mimown/features.hpp"
#include "mimown/network.hpp"
#include "mimown/training.hpp"

namespace mimown {

struct NetConfig {
  std::size_t n_w = 8;
  int order = 1;
  double p = 2.0;
  double q = 2.0;
  WeightMode weight_mode = WeightMode::Matrix;
  std::uint64_t seed = 0;

  bool operator==(const NetConfig&) const = default;
};

struct ClassModel {
  std::string label;
  MimoNetwork net;  // carries the class's own input scaler
  TrainReport train_report;
};

// Fits a per-channel scaler on the examples, initializes a network over
// [-1, 1] and trains it auto-associatively. Throws ValidationError on an
// empty set and DimensionError on ragged lengths.
ClassModel train_class(const std::string& label,
                       std::span<const FeatureVector> examples,
                       const NetConfig& net_config,
                       const TrainConfig& train_config);

// Groups labeled vectors by label and trains one model per label, in label
// order. Class trainings run on up to n_threads workers; results do not
// depend on n_threads.
std::vector<ClassModel> train_classes(std::span<const FeatureVector> examples,
                                      const NetConfig& net_config,
                                      const TrainConfig& train_config,
                                      unsigned n_threads = 1);

struct Prediction {
  std::string predicted;
  std::map<std::string, double> scores;  // label -> reconstruction error
};

// Picks the argmin of the scores; equal scores resolve to the
// lexicographically smaller label.
std::string argmin_label(const std::map<std::string, double>& scores);

Prediction classify(std::span<const ClassModel> models,
                    std::span<const double> x);

struct EvalItem {
  std::string true_label;
  std::string predicted;
  double score = 0.0;  // winning reconstruction error
};

struct EvalReport {
  double recognition_rate = 0.0;
  std::vector<std::string> labels;  // row/column order of confusion
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::map<std::string, double> per_class_rates;    // over true labels
  std::vector<EvalItem> items;
};

// Throws ValidationError on an empty test set or unlabeled vectors. Test
// labels absent from the registry still get a confusion row.
EvalReport evaluate(std::span<const ClassModel> models,
                    std::span<const FeatureVector> test_set);

// `true_label,predicted,score` with header.
std::string predictions_csv(const EvalReport& report);
// `label,rate` with header.
std::string rates_csv(const EvalReport& report);

}  // namespace mimown
