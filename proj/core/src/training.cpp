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

#include "mimown/training.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mimown/csv.hpp"
#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {

std::string_view to_string(InputMode mode) {
  return mode == InputMode::ExampleAsInput ? "example" : "unit_random";
}

InputMode input_mode_from_string(std::string_view name) {
  if (name == "example") return InputMode::ExampleAsInput;
  if (name == "unit_random") return InputMode::UnitRandomInput;
  throw ValidationError("unknown input mode '" + std::string(name) +
                        "' (expected example or unit_random)");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("TrainConfig: learning_rate must be finite and >= 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ValidationError("TrainConfig: momentum must be in [0, 1)");
  }
  if (max_epochs < 1) throw ValidationError("TrainConfig: max_epochs must be >= 1");
  if (!(target_mse >= 0.0)) throw ValidationError("TrainConfig: target_mse must be >= 0");
  if (!(min_dilation > 0.0) || !std::isfinite(min_dilation)) {
    throw ValidationError("TrainConfig: min_dilation must be finite and > 0");
  }
}

namespace {

void check_lengths(const MimoNetwork& net, std::span<const double> input,
                   std::span<const double> target) {
  if (input.size() != net.s_dim()) throw DimensionError("input", net.s_dim(), input.size());
  if (target.size() != net.s_dim()) throw DimensionError("target", net.s_dim(), target.size());
}

Gradients zero_gradients(const MimoNetwork& net) {
  return Gradients{Matrix(net.n_w(), net.s_dim()), std::vector<double>(net.n_w(), 0.0),
                   std::vector<double>(net.n_w(), 0.0)};
}

// Per (node, channel) atom value and its partials in a and b.
struct AtomCache {
  std::vector<double> psi;
  std::vector<double> d_a;
  std::vector<double> d_b;
};

// Overwrites g with the gradient of one sample and returns its cost.
double sample_gradient(const MimoNetwork& net, std::span<const double> input,
                       std::span<const double> target, Gradients& g, AtomCache& cache) {
  const std::size_t n_w = net.n_w();
  const std::size_t s = net.s_dim();
  const auto& nodes = net.nodes();
  const Matrix& w = net.weights();
  cache.psi.assign(n_w * s, 0.0);
  cache.d_a.assign(n_w * s, 0.0);
  cache.d_b.assign(n_w * s, 0.0);

  std::array<double, kMaxBetaDerivative + 1> beta{};
  for (std::size_t j = 0; j < n_w; ++j) {
    const WaveletNode& node = nodes[j];
    const int order = node.order();
    const double a = node.a();
    const double sqrt_a = std::sqrt(a);
    const double lo = node.support_lo();
    const double hi = node.support_hi();
    for (std::size_t i = 0; i < s; ++i) {
      const double x = input[i];
      if (!(x > lo && x < hi)) continue;
      const double u = (x - node.b()) / a;
      beta_derivatives(node.params(), order + 1, u, beta);
      const std::size_t at = j * s + i;
      // Same expression as psi_eval so the internal forward pass matches it bit for bit.
      cache.psi[at] = beta[order] / sqrt_a;
      cache.d_b[at] = -beta[order + 1] / (sqrt_a * a);
      cache.d_a[at] = (-0.5 * beta[order] - u * beta[order + 1]) / (sqrt_a * a);
    }
  }

  std::fill(g.d_weights.data().begin(), g.d_weights.data().end(), 0.0);
  std::fill(g.d_dilation.begin(), g.d_dilation.end(), 0.0);
  std::fill(g.d_translation.begin(), g.d_translation.end(), 0.0);
  double cost = 0.0;
  const double inv_s = 1.0 / static_cast<double>(s);
  for (std::size_t i = 0; i < s; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < n_w; ++j) y += w(j, i) * cache.psi[j * s + i];
    const double r = target[i] - y;
    cost += r * r;
    const double e = -2.0 * inv_s * r;
    if (e == 0.0) continue;
    for (std::size_t j = 0; j < n_w; ++j) {
      const std::size_t at = j * s + i;
      g.d_weights(j, i) += e * cache.psi[at];
      g.d_dilation[j] += e * w(j, i) * cache.d_a[at];
      g.d_translation[j] += e * w(j, i) * cache.d_b[at];
    }
  }
  return cost / static_cast<double>(s);
}

struct BatchResult {
  double mean_cost = 0.0;
  Gradients grads;
};

BatchResult evaluate_batch(const MimoNetwork& net, std::span<const Sample> samples,
                           AtomCache& cache) {
  BatchResult out{0.0, zero_gradients(net)};
  Gradients one = zero_gradients(net);
  const double scale = 1.0 / static_cast<double>(samples.size());
  // Per-sample gradients are reduced whole, in sample order, so a batch of
  // identical samples reproduces the single-sample gradient exactly.
  for (const auto& sample : samples) {
    out.mean_cost += sample_gradient(net, sample.input, sample.target, one, cache);
    auto dw = out.grads.d_weights.data();
    const auto odw = one.d_weights.data();
    for (std::size_t k = 0; k < dw.size(); ++k) dw[k] += scale * odw[k];
    for (std::size_t j = 0; j < one.d_dilation.size(); ++j) {
      out.grads.d_dilation[j] += scale * one.d_dilation[j];
      out.grads.d_translation[j] += scale * one.d_translation[j];
    }
  }
  out.mean_cost *= scale;
  return out;
}

}  // namespace

double quadratic_cost(const MimoNetwork& net, std::span<const double> input,
                      std::span<const double> target) {
  check_lengths(net, input, target);
  const auto y = forward(net, input);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = target[i] - y[i];
    sum += r * r;
  }
  return sum / static_cast<double>(y.size());
}

Gradients gradients(const MimoNetwork& net, std::span<const double> input,
                    std::span<const double> target) {
  check_lengths(net, input, target);
  Gradients g = zero_gradients(net);
  AtomCache cache;
  sample_gradient(net, input, target, g, cache);
  return g;
}

std::vector<Sample> make_samples(std::span<const std::vector<double>> examples,
                                 InputMode mode, std::uint64_t seed) {
  if (examples.empty()) throw ValidationError("training: empty example list");
  const std::size_t s = examples.front().size();
  if (s == 0) throw ValidationError("training: zero-length example");
  std::vector<Sample> samples;
  samples.reserve(examples.size());
  for (std::size_t m = 0; m < examples.size(); ++m) {
    const auto& ex = examples[m];
    if (ex.size() != s) throw DimensionError("training example " + std::to_string(m), s, ex.size());
    if (mode == InputMode::ExampleAsInput) {
      samples.push_back({ex, ex});
      continue;
    }
    Rng rng(derive_seed(seed, m));
    std::vector<double> input(s);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : input) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : input) v *= inv;
    samples.push_back({std::move(input), ex});
  }
  return samples;
}

TrainResult train_samples(MimoNetwork net, std::span<const Sample> samples,
                          const TrainConfig& config) {
  config.validate();
  if (samples.empty()) throw ValidationError("train: empty example list");
  for (std::size_t m = 0; m < samples.size(); ++m) {
    if (samples[m].input.size() != net.s_dim()) {
      throw DimensionError("train sample " + std::to_string(m) + " input", net.s_dim(),
                           samples[m].input.size());
    }
    if (samples[m].target.size() != net.s_dim()) {
      throw DimensionError("train sample " + std::to_string(m) + " target", net.s_dim(),
                           samples[m].target.size());
    }
  }

  const std::size_t n_w = net.n_w();
  const std::size_t s = net.s_dim();
  const bool shared = net.weight_mode() == WeightMode::Shared;
  const double lr = config.learning_rate;
  const double mu = config.momentum;

  Matrix vel_w(n_w, s);
  std::vector<double> vel_a(n_w, 0.0);
  std::vector<double> vel_b(n_w, 0.0);

  AtomCache cache;
  BatchResult batch = evaluate_batch(net, samples, cache);
  TrainReport report;
  report.mse_history.reserve(static_cast<std::size_t>(config.max_epochs));

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const Gradients& g = batch.grads;
    Matrix weights = net.weights();
    for (std::size_t j = 0; j < n_w; ++j) {
      if (shared) {
        double row_grad = 0.0;
        for (std::size_t i = 0; i < s; ++i) row_grad += g.d_weights(j, i);
        const double v = mu * vel_w(j, 0) - lr * row_grad;
        const double updated = weights(j, 0) + v;
        for (std::size_t i = 0; i < s; ++i) {
          vel_w(j, i) = v;
          weights(j, i) = updated;
        }
      } else {
        for (std::size_t i = 0; i < s; ++i) {
          vel_w(j, i) = mu * vel_w(j, i) - lr * g.d_weights(j, i);
          weights(j, i) += vel_w(j, i);
        }
      }
    }
    net.set_weights(std::move(weights));

    if (config.update_nodes) {
      for (std::size_t j = 0; j < n_w; ++j) {
        const WaveletNode& node = net.nodes()[j];
        vel_a[j] = mu * vel_a[j] - lr * g.d_dilation[j];
        vel_b[j] = mu * vel_b[j] - lr * g.d_translation[j];
        const double a = std::max(node.a() + vel_a[j], config.min_dilation);
        const double b = node.b() + vel_b[j];
        net.set_node(j, node.with_position(a, b));
      }
    }

    batch = evaluate_batch(net, samples, cache);
    report.mse_history.push_back(batch.mean_cost);
    report.epochs_run = epoch;
    if (batch.mean_cost <= config.target_mse) {
      report.converged = true;
      break;
    }
  }
  report.final_mse = report.mse_history.back();
  return {std::move(net), std::move(report)};
}

TrainResult train(MimoNetwork net, std::span<const std::vector<double>> examples,
                  const TrainConfig& config) {
  const auto samples = make_samples(examples, config.input_mode, config.seed);
  return train_samples(std::move(net), samples, config);
}

double finite_diff_check(const MimoNetwork& net, std::span<const double> input,
                         std::span<const double> target, double step) {
  if (!(step > 0.0)) throw ValidationError("finite_diff_check: step must be > 0");
  const Gradients analytic = gradients(net, input, target);
  double worst = 0.0;
  auto record = [&](double an, double num) {
    worst = std::max(worst, std::abs(an - num) / std::max(1e-8, std::abs(num)));
  };

  MimoNetwork probe = net;
  const bool shared = net.weight_mode() == WeightMode::Shared;
  for (std::size_t j = 0; j < net.n_w(); ++j) {
    const std::size_t n_cols = shared ? 1 : net.s_dim();
    for (std::size_t i = 0; i < n_cols; ++i) {
      const double w0 = net.weights()(j, i);
      probe.set_weight(j, i, w0 + step);
      const double plus = quadratic_cost(probe, input, target);
      probe.set_weight(j, i, w0 - step);
      const double minus = quadratic_cost(probe, input, target);
      probe.set_weight(j, i, w0);
      double an = analytic.d_weights(j, i);
      if (shared) {
        an = 0.0;
        for (std::size_t c = 0; c < net.s_dim(); ++c) an += analytic.d_weights(j, c);
      }
      record(an, (plus - minus) / (2.0 * step));
    }

    const WaveletNode& node = net.nodes()[j];
    probe.set_node(j, node.with_position(node.a() + step, node.b()));
    double plus = quadratic_cost(probe, input, target);
    probe.set_node(j, node.with_position(node.a() - step, node.b()));
    double minus = quadratic_cost(probe, input, target);
    record(analytic.d_dilation[j], (plus - minus) / (2.0 * step));

    probe.set_node(j, node.with_position(node.a(), node.b() + step));
    plus = quadratic_cost(probe, input, target);
    probe.set_node(j, node.with_position(node.a(), node.b() - step));
    minus = quadratic_cost(probe, input, target);
    record(analytic.d_translation[j], (plus - minus) / (2.0 * step));
    probe.set_node(j, node);
  }
  return worst;
}

std::string mse_history_csv(const TrainReport& report) {
  std::string out = "epoch,mse\n";
  for (std::size_t k = 0; k < report.mse_history.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    out += format_double(report.mse_history[k]);
    out += '\n';
  }
  return out;
}

}  // namespace mimown
