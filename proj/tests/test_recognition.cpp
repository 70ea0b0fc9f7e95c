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
#include <cmath>
#include <gtest/gtest.h>
#include <limits>

#include "mimown/errors.hpp"
#include "mimown/random.hpp"
#include "mimown/synth.hpp"

namespace mimown {
namespace {

std::vector<FeatureVector> clusters(std::uint64_t seed, int n_classes, int per_class, std::size_t dim) {
  Rng rng(seed);
  std::vector<FeatureVector> out;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<double> center(dim);
    for (double& v : center) v = rng.uniform(-3.0, 3.0);
    for (int k = 0; k < per_class; ++k) {
      FeatureVector fv;
      fv.label = "c" + std::to_string(c);
      for (double v : center) fv.values.push_back(v + 0.3 * rng.normal());
      out.push_back(std::move(fv));
    }
  }
  return out;
}

std::vector<FeatureVector> of_label(const std::vector<FeatureVector>& all, const std::string& label) {
  std::vector<FeatureVector> out;
  for (const auto& fv : all)
    if (fv.label == label) out.push_back(fv);
  return out;
}

TrainConfig quick_config(int epochs = 1500) {
  TrainConfig cfg;
  cfg.max_epochs = epochs;
  return cfg;
}

ClassModel constant_model(const std::string& label, std::size_t dim) {
  const WaveletNode node(BetaParams(2, 2, -1, 1), 1, 1.0, 0.0);
  return ClassModel{label, MimoNetwork({node}, Matrix(1, dim), WeightMode::Matrix), {}};
}

TEST(TrainClassTest, MemorizesSingleExample) {
  const auto data = clusters(1, 1, 1, 8);
  NetConfig net;
  net.n_w = 8;
  const ClassModel m = train_class("solo", data, net, quick_config());
  EXPECT_TRUE(m.train_report.converged);
  EXPECT_LE(m.train_report.final_mse, 1e-4);
}

TEST(TrainClassTest, DuplicatedExampleIsBitIdentical) {
  const auto data = clusters(2, 1, 1, 6);
  const std::vector<FeatureVector> twice = {data[0], data[0]};
  const ClassModel one = train_class("w", data, NetConfig{}, quick_config(300));
  const ClassModel two = train_class("w", twice, NetConfig{}, quick_config(300));
  EXPECT_EQ(one.net, two.net);
  EXPECT_EQ(one.train_report, two.train_report);
}

TEST(TrainClassTest, LabelPreservedVerbatim) {
  const auto data = clusters(3, 1, 3, 4);
  for (const std::string label : {"word00", "Ville de Tunis", "x/y,z", ""}) {
    EXPECT_EQ(train_class(label, data, NetConfig{}, quick_config(5)).label, label);
  }
}

TEST(TrainClassTest, ScalerFittedOnClassExamples) {
  const auto data = clusters(4, 1, 5, 3);
  const ClassModel m = train_class("w", data, NetConfig{}, quick_config(5));
  for (std::size_t i = 0; i < 3; ++i) {
    double lo = 1e300, hi = -1e300;
    for (const auto& fv : data) {
      lo = std::min(lo, fv.values[i]);
      hi = std::max(hi, fv.values[i]);
    }
    EXPECT_EQ(m.net.scaler().min()[i], lo);
    EXPECT_EQ(m.net.scaler().max()[i], hi);
  }
}

TEST(TrainClassTest, ErrorPaths) {
  EXPECT_THROW(train_class("w", std::vector<FeatureVector>{}, NetConfig{}, quick_config()), ValidationError);
  const std::vector<FeatureVector> ragged = {{{1.0, 2.0}, "w"}, {{1.0}, "w"}};
  EXPECT_THROW(train_class("w", ragged, NetConfig{}, quick_config()), DimensionError);
}

TEST(ClassifyTest, ArgminAndTieRule) {
  EXPECT_EQ(argmin_label({{"b", 0.2}, {"a", 0.3}, {"c", 0.25}}), "b");
  EXPECT_EQ(argmin_label({{"b", 0.2}, {"a", 0.2}, {"c", 0.2}}), "a");
  EXPECT_THROW(argmin_label({}), ValidationError);
}

TEST(ClassifyTest, ArgminInvariantUnderPositiveScaling) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<std::string, double> scores;
    for (int k = 0; k < 6; ++k) scores["l" + std::to_string(k)] = rng.uniform(0.0, 2.0);
    const double c = std::exp(rng.uniform(-20.0, 20.0));
    auto scaled = scores;
    for (auto& [label, s] : scaled) s *= c;
    EXPECT_EQ(argmin_label(scaled), argmin_label(scores));
  }
}

TEST(ClassifyTest, SingleModelAlwaysWins) {
  const std::vector<ClassModel> models = {constant_model("only", 3)};
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const std::vector<double> x = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    EXPECT_EQ(classify(models, x).predicted, "only");
  }
}

TEST(ClassifyTest, BitEqualScoresPickSmallerLabel) {
  const std::vector<ClassModel> models = {constant_model("zeta", 2), constant_model("alpha", 2),
                                          constant_model("mu", 2)};
  const Prediction p = classify(models, std::vector<double>{0.3, -0.2});
  EXPECT_EQ(p.scores.at("zeta"), p.scores.at("alpha"));
  EXPECT_EQ(p.predicted, "alpha");
}

TEST(ClassifyTest, DimensionMismatchAndEmptyRegistry) {
  const std::vector<ClassModel> models = {constant_model("a", 3)};
  EXPECT_THROW(classify(models, std::vector<double>{1.0, 2.0}), DimensionError);
  EXPECT_THROW(classify(std::vector<ClassModel>{}, std::vector<double>{1.0}), ValidationError);
}

class TrainedClustersTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new std::vector<FeatureVector>(clusters(5, 4, 5, 6));
    models_ = new std::vector<ClassModel>(train_classes(*data_, NetConfig{}, quick_config(), 2));
  }
  static void TearDownTestSuite() {
    delete data_;
    delete models_;
  }
  static std::vector<FeatureVector>* data_;
  static std::vector<ClassModel>* models_;
};
std::vector<FeatureVector>* TrainedClustersTest::data_ = nullptr;
std::vector<ClassModel>* TrainedClustersTest::models_ = nullptr;

TEST_F(TrainedClustersTest, ModelsSortedByLabel) {
  ASSERT_EQ(models_->size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ((*models_)[k].label, "c" + std::to_string(k));
}

TEST_F(TrainedClustersTest, OwnClassWinsOnTrainingData) {
  for (const auto& fv : *data_) {
    const Prediction p = classify(*models_, fv.values);
    const double own = p.scores.at(*fv.label);
    for (const auto& [label, score] : p.scores) {
      EXPECT_GE(score, 0.0);
      if (label != *fv.label) EXPECT_GT(score, own);
    }
    EXPECT_EQ(p.predicted, *fv.label);
  }
}

TEST_F(TrainedClustersTest, RegistryOrderIndependence) {
  auto permuted = *models_;
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    for (std::size_t k = permuted.size(); k > 1; --k) {
      std::swap(permuted[k - 1], permuted[static_cast<std::size_t>(rng.uniform() * k)]);
    }
    for (const auto& fv : *data_) {
      EXPECT_EQ(classify(permuted, fv.values).predicted, classify(*models_, fv.values).predicted);
    }
  }
}

TEST_F(TrainedClustersTest, EvaluateOnTrainingSetIsPerfect) {
  const EvalReport r = evaluate(*models_, *data_);
  EXPECT_EQ(r.recognition_rate, 1.0);
  std::size_t trace = 0, total = 0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < r.labels.size(); ++j) {
      row += r.confusion[i][j];
      total += r.confusion[i][j];
    }
    trace += r.confusion[i][i];
    EXPECT_EQ(row, of_label(*data_, r.labels[i]).size());
  }
  EXPECT_EQ(static_cast<double>(trace) / static_cast<double>(total), r.recognition_rate);
  for (const auto& [label, rate] : r.per_class_rates) EXPECT_EQ(rate, 1.0);
  EXPECT_EQ(r.items.size(), data_->size());
}

TEST_F(TrainedClustersTest, DisjointLabelsScoreZero) {
  auto relabeled = *data_;
  for (auto& fv : relabeled) fv.label = "unknown_" + *fv.label;
  const EvalReport r = evaluate(*models_, relabeled);
  EXPECT_EQ(r.recognition_rate, 0.0);
  EXPECT_EQ(r.labels.size(), 8u);
  std::size_t trace = 0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) trace += r.confusion[i][i];
  EXPECT_EQ(trace, 0u);
  EXPECT_THROW(evaluate(*models_, std::vector<FeatureVector>{}), ValidationError);
}

TEST_F(TrainedClustersTest, CsvExports) {
  const EvalReport r = evaluate(*models_, *data_);
  const std::string pred = predictions_csv(r);
  EXPECT_EQ(pred.substr(0, pred.find('\n')), "true_label,predicted,score");
  EXPECT_EQ(std::count(pred.begin(), pred.end(), '\n'), static_cast<long>(data_->size() + 1));
  const std::string rates = rates_csv(r);
  EXPECT_EQ(rates.substr(0, rates.find('\n')), "label,rate");
}

TEST(TrainClassesTest, ThreadCountDoesNotChangeModels) {
  const auto data = clusters(6, 3, 3, 5);
  const auto serial = train_classes(data, NetConfig{}, quick_config(200), 1);
  const auto parallel = train_classes(data, NetConfig{}, quick_config(200), 3);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].label, parallel[k].label);
    EXPECT_EQ(serial[k].net, parallel[k].net);
    EXPECT_EQ(serial[k].train_report, parallel[k].train_report);
  }
  std::vector<FeatureVector> unlabeled = {{{1.0}, std::nullopt}};
  EXPECT_THROW(train_classes(unlabeled, NetConfig{}, quick_config(), 1), ValidationError);
}

SynthConfig small_synth(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_classes = 3;
  cfg.n_per_class = 4;
  cfg.duration_s = 0.2;
  cfg.seed = seed;
  return cfg;
}

TEST(SynthTest, SameSeedSameCorpus) {
  const auto a = synth_corpus(small_synth(8));
  const auto b = synth_corpus(small_synth(8));
  ASSERT_EQ(a.size(), 12u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].label, b[k].label);
    EXPECT_EQ(a[k].clip.samples, b[k].clip.samples);
  }
  EXPECT_NE(synth_corpus(small_synth(9))[0].clip.samples, a[0].clip.samples);
}

TEST(SynthTest, NoiselessUnjitteredExamplesIdentical) {
  SynthConfig cfg = small_synth(1);
  cfg.snr_db = std::numeric_limits<double>::infinity();
  cfg.duration_jitter = 0.0;
  const auto corpus = synth_corpus(cfg);
  for (const auto& item : corpus) {
    const auto& first = *std::find_if(corpus.begin(), corpus.end(),
                                      [&](const LabeledClip& c) { return c.label == item.label; });
    EXPECT_EQ(item.clip.samples, first.clip.samples);
  }
  EXPECT_NE(corpus.front().clip.samples, corpus.back().clip.samples);
}

TEST(SynthTest, LabelsAndDurations) {
  const SynthConfig cfg = small_synth(2);
  const auto corpus = synth_corpus(cfg);
  for (const auto& item : corpus) {
    EXPECT_EQ(item.label.substr(0, 4), "word");
    EXPECT_EQ(item.clip.sample_rate, cfg.sample_rate);
    const double seconds = static_cast<double>(item.clip.samples.size()) / cfg.sample_rate;
    EXPECT_GE(seconds, cfg.duration_s * 0.9 - 1e-3);
    EXPECT_LE(seconds, cfg.duration_s * 1.1 + 1e-3);
    for (double s : item.clip.samples) ASSERT_LE(std::abs(s), 1.0);
  }
  EXPECT_EQ(class_label(3), "word03");
}

TEST(SynthTest, DisjointClassesHaveDistinctMeanFeatures) {
  const auto f0 = class_tone_frequencies(0);
  const auto f4 = class_tone_frequencies(4);
  for (double a : f0)
    for (double b : f4) ASSERT_NE(a, b);
  SynthConfig cfg = small_synth(3);
  cfg.n_classes = 5;
  const auto corpus = synth_corpus(cfg);
  std::map<std::string, std::vector<double>> mean;
  for (const auto& item : corpus) {
    const FeatureVector fv = extract_features(item.clip, MfccConfig{}, 4);
    auto& m = mean[item.label];
    m.resize(fv.values.size(), 0.0);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += fv.values[k] / cfg.n_per_class;
  }
  double dist2 = 0.0;
  for (std::size_t k = 0; k < mean["word00"].size(); ++k) {
    const double d = mean["word00"][k] - mean["word04"][k];
    dist2 += d * d;
  }
  EXPECT_GT(std::sqrt(dist2), 0.0);
}

TEST(SynthTest, Validation) {
  SynthConfig cfg;
  cfg.n_classes = 1;
  EXPECT_THROW(synth_corpus(cfg), ValidationError);
}

EvalReport pipeline(std::uint64_t seed) {
  const auto corpus = synth_corpus(small_synth(seed));
  std::vector<FeatureVector> train_set, test_set;
  for (const auto& item : corpus) {
    FeatureVector fv = extract_features(item.clip, MfccConfig{}, 4);
    fv.label = item.label;
    (item.index < 3 ? train_set : test_set).push_back(std::move(fv));
  }
  NetConfig net;
  net.seed = seed;
  TrainConfig tc = quick_config(300);
  tc.seed = seed;
  return evaluate(train_classes(train_set, net, tc, 2), test_set);
}

TEST(PipelineTest, EndToEndDeterminism) {
  const EvalReport a = pipeline(17);
  const EvalReport b = pipeline(17);
  EXPECT_EQ(predictions_csv(a), predictions_csv(b));
  EXPECT_EQ(rates_csv(a), rates_csv(b));
  EXPECT_EQ(a.confusion, b.confusion);
}

}  // namespace
}  // namespace mimown
