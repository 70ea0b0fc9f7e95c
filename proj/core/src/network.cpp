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

#include "mimown/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {

std::string_view to_string(WeightMode mode) {
  return mode == WeightMode::Shared ? "shared" : "matrix";
}

WeightMode weight_mode_from_string(std::string_view name) {
  if (name == "shared") return WeightMode::Shared;
  if (name == "matrix") return WeightMode::Matrix;
  throw ValidationError("unknown weight mode '" + std::string(name) +
                        "' (expected shared or matrix)");
}

ChannelScaler::ChannelScaler(std::vector<double> min, std::vector<double> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) {
    throw DimensionError("ChannelScaler max", min_.size(), max_.size());
  }
  for (std::size_t i = 0; i < min_.size(); ++i) {
    if (!std::isfinite(min_[i]) || !std::isfinite(max_[i]) || min_[i] > max_[i]) {
      throw ValidationError("ChannelScaler: channel " + std::to_string(i) +
                            " needs finite min <= max");
    }
  }
}

ChannelScaler ChannelScaler::identity(std::size_t s_dim) {
  return ChannelScaler(std::vector<double>(s_dim, -1.0),
                       std::vector<double>(s_dim, 1.0));
}

ChannelScaler ChannelScaler::fit(std::span<const std::vector<double>> examples) {
  if (examples.empty()) throw ValidationError("ChannelScaler::fit: no examples");
  const std::size_t s = examples.front().size();
  std::vector<double> lo(examples.front());
  std::vector<double> hi(examples.front());
  for (const auto& x : examples) {
    if (x.size() != s) throw DimensionError("ChannelScaler::fit example", s, x.size());
    for (std::size_t i = 0; i < s; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  return ChannelScaler(std::move(lo), std::move(hi));
}

std::vector<double> ChannelScaler::apply(std::span<const double> x) const {
  if (x.size() != min_.size()) throw DimensionError("ChannelScaler::apply", min_.size(), x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double range = max_[i] - min_[i];
    out[i] = range > 0.0 ? 2.0 * (x[i] - min_[i]) / range - 1.0 : 0.0;
  }
  return out;
}

MimoNetwork::MimoNetwork(std::vector<WaveletNode> nodes, Matrix weights,
                         WeightMode mode)
    : MimoNetwork(std::move(nodes), weights, mode,
                  ChannelScaler::identity(weights.cols())) {}

MimoNetwork::MimoNetwork(std::vector<WaveletNode> nodes, Matrix weights,
                         WeightMode mode, ChannelScaler scaler)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      mode_(mode),
      scaler_(std::move(scaler)) {
  check_invariants();
}

void MimoNetwork::check_invariants() const {
  if (nodes_.empty()) throw ValidationError("MimoNetwork: needs at least one node");
  if (weights_.cols() == 0) throw ValidationError("MimoNetwork: needs at least one channel");
  if (weights_.rows() != nodes_.size()) {
    throw DimensionError("MimoNetwork weight rows", nodes_.size(), weights_.rows());
  }
  if (scaler_.size() != weights_.cols()) {
    throw DimensionError("MimoNetwork scaler", weights_.cols(), scaler_.size());
  }
  if (mode_ == WeightMode::Shared) {
    for (std::size_t j = 0; j < weights_.rows(); ++j) {
      const auto row = weights_.row(j);
      if (!std::all_of(row.begin(), row.end(), [&](double w) { return w == row[0]; })) {
        throw ValidationError("MimoNetwork: shared mode requires identical weight columns (row " +
                              std::to_string(j) + ")");
      }
    }
  }
}

void MimoNetwork::set_weight(std::size_t j, std::size_t i, double value) {
  if (mode_ == WeightMode::Shared) {
    for (double& w : weights_.row(j)) w = value;
  } else {
    weights_(j, i) = value;
  }
}

void MimoNetwork::set_weights(Matrix weights) {
  std::swap(weights_, weights);
  try {
    check_invariants();
  } catch (...) {
    std::swap(weights_, weights);
    throw;
  }
}

void MimoNetwork::set_scaler(ChannelScaler scaler) {
  if (scaler.size() != s_dim()) throw DimensionError("MimoNetwork scaler", s_dim(), scaler.size());
  scaler_ = std::move(scaler);
}

MimoNetwork init_network(const NetworkInit& init) {
  if (init.n_w < 1) throw ValidationError("init_network: n_w must be >= 1");
  if (init.s_dim < 1) throw ValidationError("init_network: s_dim must be >= 1");
  if (!std::isfinite(init.range_lo) || !std::isfinite(init.range_hi) ||
      !(init.range_hi > init.range_lo)) {
    throw ValidationError("init_network: input range must be a non-empty finite interval");
  }
  Rng rng(init.seed);
  const double width = init.range_hi - init.range_lo;
  const double stratum = width / static_cast<double>(init.n_w);
  const double log_a_min = std::log(width / (2.0 * static_cast<double>(init.n_w)));
  const double log_a_max = std::log(width);

  std::vector<WaveletNode> nodes;
  nodes.reserve(init.n_w);
  for (std::size_t j = 0; j < init.n_w; ++j) {
    const double b = init.range_lo + (static_cast<double>(j) + rng.uniform(0.25, 0.75)) * stratum;
    const double a = std::exp(rng.uniform(log_a_min, log_a_max));
    nodes.emplace_back(init.mother, init.order, a, b);
  }

  Matrix weights(init.n_w, init.s_dim);
  for (std::size_t j = 0; j < init.n_w; ++j) {
    if (init.weight_mode == WeightMode::Shared) {
      const double w = rng.uniform(-0.5, 0.5);
      for (double& v : weights.row(j)) v = w;
    } else {
      for (double& v : weights.row(j)) v = rng.uniform(-0.5, 0.5);
    }
  }
  return MimoNetwork(std::move(nodes), std::move(weights), init.weight_mode);
}

std::vector<double> forward(const MimoNetwork& net, std::span<const double> input) {
  if (input.size() != net.s_dim()) throw DimensionError("forward input", net.s_dim(), input.size());
  const auto& nodes = net.nodes();
  const Matrix& w = net.weights();
  std::vector<double> y(net.s_dim(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += w(j, i) * psi_eval(nodes[j], input[i]);
    y[i] = acc;
  }
  return y;
}

double reconstruction_error(const MimoNetwork& net, std::span<const double> input) {
  const auto y = forward(net, input);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = input[i] - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(y.size());
}

MimoNetwork grow_hidden_layer(const MimoNetwork& net,
                              std::span<const WaveletNode> new_nodes,
                              double init_weight_scale, std::uint64_t seed) {
  if (new_nodes.empty()) throw ValidationError("grow_hidden_layer: no new nodes");
  if (!(init_weight_scale >= 0.0) || !std::isfinite(init_weight_scale)) {
    throw ValidationError("grow_hidden_layer: init_weight_scale must be finite and >= 0");
  }
  Rng rng(seed);
  std::vector<WaveletNode> nodes = net.nodes();
  Matrix weights = net.weights();
  std::vector<double> row(net.s_dim());
  for (const auto& node : new_nodes) {
    nodes.push_back(node);
    if (net.weight_mode() == WeightMode::Shared) {
      std::fill(row.begin(), row.end(), init_weight_scale * rng.uniform(-1.0, 1.0));
    } else {
      for (double& v : row) v = init_weight_scale * rng.uniform(-1.0, 1.0);
    }
    weights.append_row(row);
  }
  return MimoNetwork(std::move(nodes), std::move(weights), net.weight_mode(), net.scaler());
}

}  // namespace mimown
