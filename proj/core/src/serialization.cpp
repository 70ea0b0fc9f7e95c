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

#include "mimown/serialization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "mimown/errors.hpp"

namespace mimown {

namespace fs = std::filesystem;

namespace {

constexpr const char* kRegistryFormat = "mimown-registry";
constexpr int kRegistryVersion = 1;

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw FormatError(std::string("json: missing field '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T get_field(const Json& doc, const char* key) {
  try {
    return require(doc, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("json: field '") + key + "': " + e.what());
  }
}

template <typename T>
void merge_field(const Json& doc, const char* key, T& value) {
  if (doc.is_object() && doc.contains(key)) value = get_field<T>(doc, key);
}

}  // namespace

Json network_to_json(const MimoNetwork& net) {
  Json nodes = Json::array();
  for (const auto& node : net.nodes()) {
    const BetaParams& bp = node.params();
    nodes.push_back({{"p", bp.p()},
                     {"q", bp.q()},
                     {"x0", bp.x0()},
                     {"x1", bp.x1()},
                     {"order", node.order()},
                     {"a", node.a()},
                     {"b", node.b()}});
  }
  const auto w = net.weights().data();
  return Json{{"s_dim", net.s_dim()},
              {"n_w", net.n_w()},
              {"weight_mode", std::string(to_string(net.weight_mode()))},
              {"scaler", {{"min", net.scaler().min()}, {"max", net.scaler().max()}}},
              {"nodes", std::move(nodes)},
              {"weights", std::vector<double>(w.begin(), w.end())}};
}

MimoNetwork network_from_json(const Json& doc) {
  const auto s_dim = get_field<std::size_t>(doc, "s_dim");
  const auto mode = weight_mode_from_string(get_field<std::string>(doc, "weight_mode"));
  const Json& scaler_doc = require(doc, "scaler");
  ChannelScaler scaler(get_field<std::vector<double>>(scaler_doc, "min"),
                       get_field<std::vector<double>>(scaler_doc, "max"));

  std::vector<WaveletNode> nodes;
  for (const auto& n : require(doc, "nodes")) {
    nodes.emplace_back(BetaParams(get_field<double>(n, "p"), get_field<double>(n, "q"),
                                  get_field<double>(n, "x0"), get_field<double>(n, "x1")),
                       get_field<int>(n, "order"), get_field<double>(n, "a"),
                       get_field<double>(n, "b"));
  }
  if (doc.contains("n_w") && get_field<std::size_t>(doc, "n_w") != nodes.size()) {
    throw FormatError("json: n_w does not match the node list");
  }
  auto weights = get_field<std::vector<double>>(doc, "weights");
  if (weights.size() != nodes.size() * s_dim) {
    throw DimensionError("network weights", nodes.size() * s_dim, weights.size());
  }
  const std::size_t n_w = nodes.size();
  return MimoNetwork(std::move(nodes), Matrix(n_w, s_dim, std::move(weights)), mode,
                     std::move(scaler));
}

Json train_report_to_json(const TrainReport& report) {
  return Json{{"epochs_run", report.epochs_run},
              {"final_mse", report.final_mse},
              {"converged", report.converged},
              {"mse_history", report.mse_history}};
}

TrainReport train_report_from_json(const Json& doc) {
  TrainReport r;
  r.epochs_run = get_field<int>(doc, "epochs_run");
  r.final_mse = get_field<double>(doc, "final_mse");
  r.converged = get_field<bool>(doc, "converged");
  r.mse_history = get_field<std::vector<double>>(doc, "mse_history");
  return r;
}

Json class_model_to_json(const ClassModel& model) {
  return Json{{"label", model.label},
              {"network", network_to_json(model.net)},
              {"train_report", train_report_to_json(model.train_report)}};
}

ClassModel class_model_from_json(const Json& doc) {
  return ClassModel{get_field<std::string>(doc, "label"), network_from_json(require(doc, "network")),
                    train_report_from_json(require(doc, "train_report"))};
}

Json eval_report_to_json(const EvalReport& report) {
  Json rates = Json::object();
  for (const auto& [label, rate] : report.per_class_rates) rates[label] = rate;
  return Json{{"recognition_rate", report.recognition_rate},
              {"n_items", report.items.size()},
              {"labels", report.labels},
              {"confusion", report.confusion},
              {"per_class_rates", std::move(rates)}};
}

Json mfcc_config_to_json(const MfccConfig& c) {
  return Json{{"frame_len_ms", c.frame_len_ms}, {"hop_ms", c.hop_ms},
              {"n_mels", c.n_mels},             {"n_coeffs", c.n_coeffs},
              {"pre_emphasis", c.pre_emphasis}, {"fmin_hz", c.fmin_hz},
              {"fmax_hz", c.fmax_hz}};
}

void merge_mfcc_config(const Json& doc, MfccConfig& c) {
  merge_field(doc, "frame_len_ms", c.frame_len_ms);
  merge_field(doc, "hop_ms", c.hop_ms);
  merge_field(doc, "n_mels", c.n_mels);
  merge_field(doc, "n_coeffs", c.n_coeffs);
  merge_field(doc, "pre_emphasis", c.pre_emphasis);
  merge_field(doc, "fmin_hz", c.fmin_hz);
  merge_field(doc, "fmax_hz", c.fmax_hz);
}

Json net_config_to_json(const NetConfig& c) {
  return Json{{"n_w", c.n_w},
              {"order", c.order},
              {"p", c.p},
              {"q", c.q},
              {"weight_mode", std::string(to_string(c.weight_mode))},
              {"seed", c.seed}};
}

void merge_net_config(const Json& doc, NetConfig& c) {
  merge_field(doc, "n_w", c.n_w);
  merge_field(doc, "order", c.order);
  merge_field(doc, "p", c.p);
  merge_field(doc, "q", c.q);
  if (doc.is_object() && doc.contains("weight_mode")) {
    c.weight_mode = weight_mode_from_string(get_field<std::string>(doc, "weight_mode"));
  }
  merge_field(doc, "seed", c.seed);
}

Json train_config_to_json(const TrainConfig& c) {
  return Json{{"learning_rate", c.learning_rate},
              {"momentum", c.momentum},
              {"max_epochs", c.max_epochs},
              {"target_mse", c.target_mse},
              {"input_mode", std::string(to_string(c.input_mode))},
              {"seed", c.seed},
              {"min_dilation", c.min_dilation},
              {"update_nodes", c.update_nodes}};
}

void merge_train_config(const Json& doc, TrainConfig& c) {
  merge_field(doc, "learning_rate", c.learning_rate);
  merge_field(doc, "momentum", c.momentum);
  merge_field(doc, "max_epochs", c.max_epochs);
  merge_field(doc, "target_mse", c.target_mse);
  if (doc.is_object() && doc.contains("input_mode")) {
    c.input_mode = input_mode_from_string(get_field<std::string>(doc, "input_mode"));
  }
  merge_field(doc, "seed", c.seed);
  merge_field(doc, "min_dilation", c.min_dilation);
  merge_field(doc, "update_nodes", c.update_nodes);
}

Json synth_config_to_json(const SynthConfig& c) {
  Json snr = std::isfinite(c.snr_db) ? Json(c.snr_db) : Json("inf");
  return Json{{"n_classes", c.n_classes},
              {"n_per_class", c.n_per_class},
              {"sample_rate", c.sample_rate},
              {"snr_db", std::move(snr)},
              {"duration_jitter", c.duration_jitter},
              {"duration_s", c.duration_s},
              {"seed", c.seed}};
}

void merge_synth_config(const Json& doc, SynthConfig& c) {
  merge_field(doc, "n_classes", c.n_classes);
  merge_field(doc, "n_per_class", c.n_per_class);
  merge_field(doc, "sample_rate", c.sample_rate);
  if (doc.is_object() && doc.contains("snr_db")) {
    const Json& v = doc.at("snr_db");
    if (v.is_string() && v.get<std::string>() == "inf") {
      c.snr_db = std::numeric_limits<double>::infinity();
    } else {
      c.snr_db = get_field<double>(doc, "snr_db");
    }
  }
  merge_field(doc, "duration_jitter", c.duration_jitter);
  merge_field(doc, "duration_s", c.duration_s);
  merge_field(doc, "seed", c.seed);
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json parse_json_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

Json manifest_to_json(const CorpusManifest& manifest) {
  Json entries = Json::array();
  for (const auto& e : manifest.entries) {
    Json item{{"file", e.file}, {"label", e.label}};
    if (!e.split.empty()) item["split"] = e.split;
    entries.push_back(std::move(item));
  }
  return Json{{"sample_rate", manifest.sample_rate}, {"entries", std::move(entries)}};
}

CorpusManifest manifest_from_json(const Json& doc) {
  CorpusManifest m;
  merge_field(doc, "sample_rate", m.sample_rate);
  for (const auto& e : require(doc, "entries")) {
    ManifestEntry entry{get_field<std::string>(e, "file"), get_field<std::string>(e, "label"), ""};
    merge_field(e, "split", entry.split);
    m.entries.push_back(std::move(entry));
  }
  return m;
}

CorpusManifest load_manifest(const fs::path& path) {
  return manifest_from_json(parse_json_file(path));
}

std::string model_file_name(const std::string& label) {
  std::string out;
  for (unsigned char ch : label) {
    if (std::isalnum(ch) || ch == '_' || ch == '-') {
      out += static_cast<char>(ch);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", ch);
      out += buf;
    }
  }
  if (out.empty()) out = "%";
  return out + ".json";
}

void save_registry(const fs::path& dir, const Registry& registry) {
  if (registry.models.empty()) throw ValidationError("save_registry: no models");
  const std::size_t s_dim = registry.models.front().net.s_dim();
  std::set<std::string> labels;
  for (const auto& m : registry.models) {
    if (m.net.s_dim() != s_dim) throw DimensionError("registry model '" + m.label + "'", s_dim, m.net.s_dim());
    if (!labels.insert(m.label).second) throw ValidationError("save_registry: duplicate label '" + m.label + "'");
  }

  fs::path staging = dir;
  staging += ".partial";
  fs::path previous = dir;
  previous += ".old";
  fs::remove_all(staging);
  fs::create_directories(staging);

  Json classes = Json::array();
  std::vector<const ClassModel*> ordered;
  for (const auto& m : registry.models) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](const ClassModel* a, const ClassModel* b) { return a->label < b->label; });
  for (const ClassModel* m : ordered) {
    const std::string file = model_file_name(m->label);
    write_file_atomic(staging / file, dump_json(class_model_to_json(*m)));
    classes.push_back({{"label", m->label}, {"file", file}});
  }
  const Json manifest{{"format", kRegistryFormat},
                      {"version", kRegistryVersion},
                      {"s_dim", s_dim},
                      {"n_segments", registry.n_segments},
                      {"mfcc", mfcc_config_to_json(registry.mfcc)},
                      {"classes", std::move(classes)}};
  write_file_atomic(staging / "manifest.json", dump_json(manifest));

  fs::remove_all(previous);
  if (fs::exists(dir)) fs::rename(dir, previous);
  fs::rename(staging, dir);
  fs::remove_all(previous);
}

Registry load_registry(const fs::path& dir) {
  const Json manifest = parse_json_file(dir / "manifest.json");
  if (get_field<std::string>(manifest, "format") != kRegistryFormat) {
    throw FormatError(dir.string() + ": not a model registry");
  }
  if (get_field<int>(manifest, "version") != kRegistryVersion) {
    throw FormatError(dir.string() + ": unsupported registry version");
  }
  Registry registry;
  merge_mfcc_config(require(manifest, "mfcc"), registry.mfcc);
  registry.n_segments = get_field<int>(manifest, "n_segments");
  const auto s_dim = get_field<std::size_t>(manifest, "s_dim");
  for (const auto& entry : require(manifest, "classes")) {
    ClassModel model = class_model_from_json(parse_json_file(dir / get_field<std::string>(entry, "file")));
    if (model.label != get_field<std::string>(entry, "label")) {
      throw FormatError(dir.string() + ": label mismatch for '" + model.label + "'");
    }
    if (model.net.s_dim() != s_dim) throw DimensionError("registry model '" + model.label + "'", s_dim, model.net.s_dim());
    registry.models.push_back(std::move(model));
  }
  std::sort(registry.models.begin(), registry.models.end(),
            [](const ClassModel& a, const ClassModel& b) { return a.label < b.label; });
  return registry;
}

}  // namespace mimown
