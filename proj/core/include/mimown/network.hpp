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

// Multi-input multi-output wavelet network. N_w Beta wavelet atoms are shared
// by S channels; channel i is the single-input single-output network
//
//   y_i = sum_j W(j, i) * psi_j(x_i),
//
// so the MIMO network is the superposition of S scalar networks that share
// their hidden layer. In Shared mode every column of W is the same vector
// alpha, which is system (I) literally.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mimown/beta_wavelet.hpp"
#include "mimown/matrix.hpp"

namespace mimown {

// One hidden unit.
using WaveletNode = WaveletSpec;

enum class WeightMode { Shared, Matrix };

std::string_view to_string(WeightMode mode);
WeightMode weight_mode_from_string(std::string_view name);

// Per-channel affine map of [min, max] onto [-1, 1]. Constant channels
// (min == max) map to 0.
class ChannelScaler {
 public:
  ChannelScaler() = default;
  ChannelScaler(std::vector<double> min, std::vector<double> max);

  // min = -1, max = 1 on every channel.
  static ChannelScaler identity(std::size_t s_dim);
  static ChannelScaler fit(std::span<const std::vector<double>> examples);

  std::size_t size() const noexcept { return min_.size(); }
  const std::vector<double>& min() const noexcept { return min_; }
  const std::vector<double>& max() const noexcept { return max_; }

  std::vector<double> apply(std::span<const double> x) const;

  bool operator==(const ChannelScaler&) const = default;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

class MimoNetwork {
 public:
  // weights must be nodes.size() x s_dim with at least one row and column;
  // in Shared mode all columns must be equal. The scaler defaults to the
  // identity over s_dim channels.
  MimoNetwork(std::vector<WaveletNode> nodes, Matrix weights, WeightMode mode);
  MimoNetwork(std::vector<WaveletNode> nodes, Matrix weights, WeightMode mode,
              ChannelScaler scaler);

  std::size_t n_w() const noexcept { return nodes_.size(); }
  std::size_t s_dim() const noexcept { return weights_.cols(); }
  WeightMode weight_mode() const noexcept { return mode_; }

  const std::vector<WaveletNode>& nodes() const noexcept { return nodes_; }
  const Matrix& weights() const noexcept { return weights_; }
  const ChannelScaler& scaler() const noexcept { return scaler_; }

  // Training-session mutators. set_weight in Shared mode writes the whole
  // row so the column invariant is kept.
  void set_node(std::size_t j, const WaveletNode& node) { nodes_.at(j) = node; }
  void set_weight(std::size_t j, std::size_t i, double value);
  void set_weights(Matrix weights);
  void set_scaler(ChannelScaler scaler);

  bool operator==(const MimoNetwork&) const = default;

 private:
  void check_invariants() const;

  std::vector<WaveletNode> nodes_;
  Matrix weights_;
  WeightMode mode_;
  ChannelScaler scaler_;
};

struct NetworkInit {
  std::size_t s_dim = 1;
  std::size_t n_w = 8;
  double range_lo = -1.0;
  double range_hi = 1.0;
  int order = 1;
  BetaParams mother{2.0, 2.0, -1.0, 1.0};
  WeightMode weight_mode = WeightMode::Matrix;
  std::uint64_t seed = 0;
};

// Translations are stratified over the input range (one stratum per node,
// jittered inside its middle half); dilations are log-uniform in
// [width / (2 n_w), width];
// weights are uniform in [-0.5, 0.5].
MimoNetwork init_network(const NetworkInit& init);

// y_i = sum_j W(j, i) psi_j(x_i). Throws DimensionError on length mismatch.
std::vector<double> forward(const MimoNetwork& net,
                            std::span<const double> input);

// (1/S) sum_i (x_i - forward(net, x)_i)^2.
double reconstruction_error(const MimoNetwork& net,
                            std::span<const double> input);

// Appends nodes with new weight rows uniform in [-scale, scale]; existing
// rows are untouched.
MimoNetwork grow_hidden_layer(const MimoNetwork& net,
                              std::span<const WaveletNode> new_nodes,
                              double init_weight_scale, std::uint64_t seed);

}  // namespace mimown
