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

#include "mimown/recognition.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <string>

#include "mimown/csv.hpp"
#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {

namespace {

// FNV-1a; keys per-class random streams to the label, not to registry order.
std::uint64_t label_hash(const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ClassModel train_class(const std::string& label,
                       std::span<const FeatureVector> examples,
                       const NetConfig& net_config,
                       const TrainConfig& train_config) {
  if (examples.empty()) {
    throw ValidationError("train_class '" + label + "': no examples");
  }
  const std::size_t s = examples.front().values.size();
  if (s == 0) throw ValidationError("train_class '" + label + "': empty feature vector");
  std::vector<std::vector<double>> raw;
  raw.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.values.size() != s) {
      throw DimensionError("train_class '" + label + "' example", s, ex.values.size());
    }
    raw.push_back(ex.values);
  }

  ChannelScaler scaler = ChannelScaler::fit(raw);
  std::vector<std::vector<double>> scaled;
  scaled.reserve(raw.size());
  for (const auto& x : raw) scaled.push_back(scaler.apply(x));

  const std::uint64_t key = label_hash(label);
  NetworkInit init;
  init.s_dim = s;
  init.n_w = net_config.n_w;
  init.range_lo = -1.0;
  init.range_hi = 1.0;
  init.order = net_config.order;
  init.mother = BetaParams(net_config.p, net_config.q, -1.0, 1.0);
  init.weight_mode = net_config.weight_mode;
  init.seed = derive_seed(net_config.seed, key);

  TrainConfig config = train_config;
  config.input_mode = InputMode::ExampleAsInput;
  config.seed = derive_seed(train_config.seed, key);

  TrainResult result = train(init_network(init), scaled, config);
  result.net.set_scaler(std::move(scaler));
  return ClassModel{label, std::move(result.net), std::move(result.report)};
}

std::vector<ClassModel> train_classes(std::span<const FeatureVector> examples,
                                      const NetConfig& net_config,
                                      const TrainConfig& train_config,
                                      unsigned n_threads) {
  std::map<std::string, std::vector<FeatureVector>> by_label;
  for (const auto& ex : examples) {
    if (!ex.label) throw ValidationError("train_classes: unlabeled example");
    by_label[*ex.label].push_back(ex);
  }
  if (by_label.empty()) throw ValidationError("train_classes: no examples");

  std::vector<const std::pair<const std::string, std::vector<FeatureVector>>*> jobs;
  for (const auto& entry : by_label) jobs.push_back(&entry);

  std::vector<std::optional<ClassModel>> slots(jobs.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(jobs.size())));
  auto run_range = [&](std::size_t first) {
    for (std::size_t k = first; k < jobs.size(); k += workers) {
      slots[k] = train_class(jobs[k]->first, jobs[k]->second, net_config, train_config);
    }
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, run_range, static_cast<std::size_t>(w)));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<ClassModel> models;
  models.reserve(slots.size());
  for (auto& slot : slots) models.push_back(std::move(*slot));
  return models;
}

std::string argmin_label(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw ValidationError("argmin_label: no scores");
  // std::map iterates in lexicographic order, so strict < keeps the
  // smallest label among equal scores.
  auto best = scores.begin();
  for (auto it = scores.begin(); it != scores.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  return best->first;
}

Prediction classify(std::span<const ClassModel> models, std::span<const double> x) {
  if (models.empty()) throw ValidationError("classify: empty model registry");
  Prediction out;
  for (const auto& model : models) {
    if (x.size() != model.net.s_dim()) {
      throw DimensionError("classify input for model '" + model.label + "'", model.net.s_dim(),
                           x.size());
    }
    const auto scaled = model.net.scaler().apply(x);
    out.scores[model.label] = reconstruction_error(model.net, scaled);
  }
  out.predicted = argmin_label(out.scores);
  return out;
}

EvalReport evaluate(std::span<const ClassModel> models,
                    std::span<const FeatureVector> test_set) {
  if (test_set.empty()) throw ValidationError("evaluate: empty test set");
  std::set<std::string> label_set;
  for (const auto& m : models) label_set.insert(m.label);
  for (const auto& item : test_set) {
    if (!item.label) throw ValidationError("evaluate: unlabeled test vector");
    label_set.insert(*item.label);
  }

  EvalReport report;
  report.labels.assign(label_set.begin(), label_set.end());
  const std::size_t n_labels = report.labels.size();
  auto index_of = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(report.labels.begin(), report.labels.end(), label) -
        report.labels.begin());
  };
  report.confusion.assign(n_labels, std::vector<std::size_t>(n_labels, 0));

  std::size_t correct = 0;
  for (const auto& item : test_set) {
    const Prediction p = classify(models, item.values);
    report.items.push_back({*item.label, p.predicted, p.scores.at(p.predicted)});
    ++report.confusion[index_of(*item.label)][index_of(p.predicted)];
    if (p.predicted == *item.label) ++correct;
  }
  report.recognition_rate = static_cast<double>(correct) / static_cast<double>(test_set.size());

  for (std::size_t r = 0; r < n_labels; ++r) {
    std::size_t total = 0;
    for (std::size_t c = 0; c < n_labels; ++c) total += report.confusion[r][c];
    if (total == 0) continue;
    report.per_class_rates[report.labels[r]] =
        static_cast<double>(report.confusion[r][r]) / static_cast<double>(total);
  }
  return report;
}

std::string predictions_csv(const EvalReport& report) {
  std::string out = "true_label,predicted,score\n";
  for (const auto& item : report.items) {
    out += item.true_label + "," + item.predicted + "," + format_double(item.score) + "\n";
  }
  return out;
}

std::string rates_csv(const EvalReport& report) {
  std::string out = "label,rate\n";
  for (const auto& [label, rate] : report.per_class_rates) {
    out += label + "," + format_double(rate) + "\n";
  }
  return out;
}

}  // namespace mimown
