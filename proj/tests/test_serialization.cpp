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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <limits>
#include <set>

#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mimown_ser_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Awkward values: long mantissas, extreme exponents, negative zero.
MimoNetwork awkward_net(std::uint64_t seed, std::size_t s, std::size_t nw) {
  Rng rng(seed);
  std::vector<WaveletNode> nodes;
  for (std::size_t j = 0; j < nw; ++j) {
    nodes.emplace_back(BetaParams(rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0), -1.0 - rng.uniform(),
                                  1.0 + rng.uniform()),
                       1 + static_cast<int>(j % 3), std::exp(rng.uniform(-5, 2)), rng.uniform(-1, 1) / 3.0);
  }
  Matrix w(nw, s);
  for (double& v : w.data()) v = rng.normal() * std::pow(10.0, rng.uniform(-200, 200));
  w(0, 0) = -0.0;
  std::vector<double> lo(s), hi(s);
  for (std::size_t i = 0; i < s; ++i) {
    lo[i] = -rng.uniform(0, 50) / 7.0;
    hi[i] = lo[i] + rng.uniform(0.1, 80) / 3.0;
  }
  return MimoNetwork(std::move(nodes), std::move(w), WeightMode::Matrix, ChannelScaler(lo, hi));
}

TEST(NetworkJsonTest, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MimoNetwork net = awkward_net(seed, 7, 5);
    const MimoNetwork back = network_from_json(Json::parse(dump_json(network_to_json(net))));
    EXPECT_EQ(back, net);
    EXPECT_TRUE(std::signbit(back.weights()(0, 0)));
    Rng rng(seed + 100);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(7);
      for (double& v : x) v = rng.uniform(-1, 1);
      EXPECT_EQ(forward(back, x), forward(net, x));
    }
  }
}

TEST(NetworkJsonTest, DocumentShape) {
  NetworkInit init;
  init.s_dim = 3;
  init.n_w = 2;
  init.weight_mode = WeightMode::Shared;
  const Json doc = network_to_json(init_network(init));
  EXPECT_EQ(doc.at("s_dim"), 3);
  EXPECT_EQ(doc.at("weight_mode"), "shared");
  EXPECT_EQ(doc.at("scaler").at("min").size(), 3u);
  EXPECT_EQ(doc.at("scaler").at("max").size(), 3u);
  ASSERT_EQ(doc.at("nodes").size(), 2u);
  for (const char* key : {"p", "q", "x0", "x1", "order", "a", "b"}) EXPECT_TRUE(doc.at("nodes")[0].contains(key)) << key;
  EXPECT_EQ(doc.at("weights").size(), 6u);
  EXPECT_EQ(network_from_json(doc).weight_mode(), WeightMode::Shared);
}

TEST(NetworkJsonTest, MalformedDocuments) {
  const Json good = network_to_json(awkward_net(1, 2, 2));
  Json missing = good;
  missing.erase("nodes");
  EXPECT_THROW(network_from_json(missing), FormatError);
  Json short_weights = good;
  short_weights["weights"].erase(0);
  EXPECT_THROW(network_from_json(short_weights), DimensionError);
  Json bad_type = good;
  bad_type["s_dim"] = "two";
  EXPECT_THROW(network_from_json(bad_type), FormatError);
  Json bad_node = good;
  bad_node["nodes"][0]["a"] = -1.0;
  EXPECT_THROW(network_from_json(bad_node), ValidationError);
}

TEST(ClassModelJsonTest, RoundTrip) {
  ClassModel m{"word07", awkward_net(4, 3, 2), {}};
  m.train_report = {3, 0.25, {1.0, 0.5, 0.25}, false};
  const ClassModel back = class_model_from_json(Json::parse(dump_json(class_model_to_json(m))));
  EXPECT_EQ(back.label, m.label);
  EXPECT_EQ(back.net, m.net);
  EXPECT_EQ(back.train_report, m.train_report);
}

TEST(ConfigJsonTest, MergeOverridesOnlyGivenFields) {
  TrainConfig tc;
  merge_train_config(Json{{"learning_rate", 0.01}, {"max_epochs", 12}}, tc);
  EXPECT_EQ(tc.learning_rate, 0.01);
  EXPECT_EQ(tc.max_epochs, 12);
  EXPECT_EQ(tc.momentum, TrainConfig{}.momentum);

  TrainConfig round;
  merge_train_config(train_config_to_json(tc), round);
  EXPECT_EQ(round, tc);

  SynthConfig sc;
  sc.snr_db = std::numeric_limits<double>::infinity();
  SynthConfig sc_back;
  merge_synth_config(Json::parse(dump_json(synth_config_to_json(sc))), sc_back);
  EXPECT_EQ(sc_back, sc);

  MfccConfig mc;
  mc.n_mels = 40;
  MfccConfig mc_back;
  merge_mfcc_config(mfcc_config_to_json(mc), mc_back);
  EXPECT_EQ(mc_back, mc);

  NetConfig nc;
  nc.weight_mode = WeightMode::Shared;
  nc.n_w = 3;
  NetConfig nc_back;
  merge_net_config(net_config_to_json(nc), nc_back);
  EXPECT_EQ(nc_back, nc);
}

TEST(ManifestTest, RoundTripAndLoad) {
  CorpusManifest m;
  m.sample_rate = 16000;
  m.entries = {{"wav/a.wav", "a", "train"}, {"wav/b.wav", "b", "test"}, {"wav/c.wav", "c", ""}};
  const fs::path dir = scratch("manifest");
  write_file_atomic(dir / "manifest.json", dump_json(manifest_to_json(m)));
  const CorpusManifest back = load_manifest(dir / "manifest.json");
  EXPECT_EQ(back.sample_rate, 16000);
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_THROW(load_manifest(dir / "absent.json"), IoError);
  write_file_atomic(dir / "broken.json", "{\"entries\": [");
  EXPECT_THROW(load_manifest(dir / "broken.json"), FormatError);
  fs::remove_all(dir);
}

TEST(AtomicWriteTest, ReplacesContentWithoutLeftovers) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "out.txt", "first");
  write_file_atomic(dir / "out.txt", "second\n");
  EXPECT_EQ(read_text_file(dir / "out.txt"), "second\n");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  EXPECT_EQ(n, 1u);
  EXPECT_THROW(write_file_atomic(dir / "no" / "such" / "dir.txt", "x"), IoError);
  fs::remove_all(dir);
}

TEST(ModelFileNameTest, SafeAndInjective) {
  EXPECT_EQ(model_file_name("word00"), "word00.json");
  std::set<std::string> names;
  for (const std::string label : {"a/b", "a%2Fb", "a b", "", "%", "..", "A", "a"}) {
    const std::string name = model_file_name(label);
    EXPECT_EQ(name.find('/'), std::string::npos);
    EXPECT_NE(name, "..json");
    EXPECT_TRUE(names.insert(name).second) << label;
  }
}

Registry sample_registry() {
  Registry r;
  r.mfcc.n_coeffs = 12;
  r.n_segments = 3;
  for (const std::string label : {"word01", "word00", "ville/2"}) {
    r.models.push_back(ClassModel{label, awkward_net(label.size() * 31 + label.back(), 4, 3), {2, 0.5, {0.7, 0.5}, false}});
  }
  return r;
}

TEST(RegistryTest, SaveLoadRoundTrip) {
  const fs::path dir = scratch("registry") / "models";
  const Registry r = sample_registry();
  save_registry(dir, r);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const Json manifest = parse_json_file(dir / "manifest.json");
  EXPECT_EQ(manifest.at("format"), "mimown-registry");
  EXPECT_EQ(manifest.at("s_dim"), 4);

  const Registry back = load_registry(dir);
  EXPECT_EQ(back.mfcc, r.mfcc);
  EXPECT_EQ(back.n_segments, 3);
  ASSERT_EQ(back.models.size(), 3u);
  EXPECT_EQ(back.models[0].label, "ville/2");
  EXPECT_EQ(back.models[1].label, "word00");
  for (const auto& m : back.models) {
    const auto it = std::find_if(r.models.begin(), r.models.end(), [&](const ClassModel& o) { return o.label == m.label; });
    ASSERT_NE(it, r.models.end());
    EXPECT_EQ(m.net, it->net);
    EXPECT_EQ(m.train_report, it->train_report);
  }
  fs::remove_all(dir.parent_path());
}

TEST(RegistryTest, OverwriteReplacesWholeDirectory) {
  const fs::path dir = scratch("registry_over") / "models";
  Registry r = sample_registry();
  save_registry(dir, r);
  r.models.pop_back();
  save_registry(dir, r);
  EXPECT_EQ(load_registry(dir).models.size(), 2u);
  EXPECT_FALSE(fs::exists(dir.string() + ".partial"));
  EXPECT_FALSE(fs::exists(dir.string() + ".old"));
  fs::remove_all(dir.parent_path());
}

TEST(RegistryTest, Rejections) {
  const fs::path dir = scratch("registry_bad");
  Registry empty;
  EXPECT_THROW(save_registry(dir / "m", empty), ValidationError);
  Registry dup = sample_registry();
  dup.models.push_back(dup.models.front());
  EXPECT_THROW(save_registry(dir / "m", dup), ValidationError);
  Registry mixed = sample_registry();
  mixed.models.push_back(ClassModel{"odd", awkward_net(1, 5, 2), {}});
  EXPECT_THROW(save_registry(dir / "m", mixed), DimensionError);
  EXPECT_THROW(load_registry(dir / "nothing"), IoError);
  fs::create_directories(dir / "fake");
  write_file_atomic(dir / "fake" / "manifest.json", "{\"format\": \"other\", \"version\": 1}");
  EXPECT_THROW(load_registry(dir / "fake"), FormatError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mimown
