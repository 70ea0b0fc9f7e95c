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

// JSON and file persistence for networks, reports, configs, corpus
// manifests and model registries. Doubles are written in shortest
// round-trip form, so reading a document back reproduces every value
// exactly.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mimown/features.hpp"
#include "mimown/network.hpp"
#include "mimown/recognition.hpp"
#include "mimown/synth.hpp"
#include "mimown/training.hpp"

namespace mimown {

using Json = nlohmann::ordered_json;

Json network_to_json(const MimoNetwork& net);
MimoNetwork network_from_json(const Json& doc);

Json train_report_to_json(const TrainReport& report);
TrainReport train_report_from_json(const Json& doc);

Json class_model_to_json(const ClassModel& model);
ClassModel class_model_from_json(const Json& doc);

Json eval_report_to_json(const EvalReport& report);

Json mfcc_config_to_json(const MfccConfig& config);
// Missing fields keep the values already in `config`.
void merge_mfcc_config(const Json& doc, MfccConfig& config);
Json net_config_to_json(const NetConfig& config);
void merge_net_config(const Json& doc, NetConfig& config);
Json train_config_to_json(const TrainConfig& config);
void merge_train_config(const Json& doc, TrainConfig& config);
Json synth_config_to_json(const SynthConfig& config);
void merge_synth_config(const Json& doc, SynthConfig& config);

// Two-space indented, trailing newline.
std::string dump_json(const Json& doc);
Json parse_json_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
// Writes `<path>.tmp` then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// file -> label mapping of a corpus; `file` is relative to the manifest's
// directory unless absolute.
struct ManifestEntry {
  std::string file;
  std::string label;
  std::string split;  // "train", "test" or empty

  bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
  int sample_rate = 0;
  std::vector<ManifestEntry> entries;
};

Json manifest_to_json(const CorpusManifest& manifest);
CorpusManifest manifest_from_json(const Json& doc);
CorpusManifest load_manifest(const std::filesystem::path& path);

// A directory with manifest.json plus one <label>.json model per class.
// The feature front-end settings travel with the models so classification
// uses the same features as training.
struct Registry {
  MfccConfig mfcc;
  int n_segments = 4;
  std::vector<ClassModel> models;  // sorted by label
};

// Builds the directory under a temporary name and swaps it in; an existing
// registry at `dir` is replaced only after the new one is complete.
void save_registry(const std::filesystem::path& dir, const Registry& registry);
Registry load_registry(const std::filesystem::path& dir);

// File name used for a class label (non [A-Za-z0-9_-] bytes hex-escaped).
std::string model_file_name(const std::string& label);

}  // namespace mimown
