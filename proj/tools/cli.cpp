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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mimown/beta_wavelet.hpp"
#include "mimown/csv.hpp"
#include "mimown/errors.hpp"
#include "mimown/features.hpp"
#include "mimown/network.hpp"
#include "mimown/recognition.hpp"
#include "mimown/serialization.hpp"
#include "mimown/synth.hpp"
#include "mimown/training.hpp"
#include "mimown/wav.hpp"

namespace mimown::cli {

namespace {

namespace fs = std::filesystem;

// Resolved configuration of one run: defaults, then --config file, then
// flags. The run seed is copied into every stochastic component.
struct RunConfig {
  std::uint64_t seed = 42;
  std::string out_dir;
  std::string model_dir = "models";
  std::string manifest;
  std::string split;
  MfccConfig mfcc;
  NetConfig network;
  int n_segments = 4;
  TrainConfig train;
  SynthConfig synth;
  double train_fraction = 0.8;
  unsigned threads = 1;
};

template <typename T>
void take(const Json& doc, const char* key, T& value) {
  if (doc.is_object() && doc.contains(key)) value = doc.at(key).get<T>();
}

void merge_config_file(const Json& doc, RunConfig& rc) {
  if (!doc.is_object()) throw FormatError("config: top level must be an object");
  take(doc, "seed", rc.seed);
  take(doc, "out_dir", rc.out_dir);
  take(doc, "model_dir", rc.model_dir);
  take(doc, "manifest", rc.manifest);
  take(doc, "split", rc.split);
  take(doc, "threads", rc.threads);
  take(doc, "train_fraction", rc.train_fraction);
  if (doc.contains("mfcc")) merge_mfcc_config(doc.at("mfcc"), rc.mfcc);
  if (doc.contains("network")) {
    merge_net_config(doc.at("network"), rc.network);
    take(doc.at("network"), "n_segments", rc.n_segments);
  }
  if (doc.contains("train")) merge_train_config(doc.at("train"), rc.train);
  if (doc.contains("synth")) merge_synth_config(doc.at("synth"), rc.synth);
}

Json run_config_json(const RunConfig& rc, const std::string& command, Json args) {
  Json network = net_config_to_json(rc.network);
  network["n_segments"] = rc.n_segments;
  return Json{{"command", command},
              {"seed", rc.seed},
              {"out_dir", rc.out_dir},
              {"model_dir", rc.model_dir},
              {"manifest", rc.manifest},
              {"split", rc.split},
              {"threads", rc.threads},
              {"train_fraction", rc.train_fraction},
              {"mfcc", mfcc_config_to_json(rc.mfcc)},
              {"network", std::move(network)},
              {"train", train_config_to_json(rc.train)},
              {"synth", synth_config_to_json(rc.synth)},
              {"args", std::move(args)}};
}

// Flag values; unset optionals leave the file/default value alone.
struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  std::optional<std::size_t> n_w;
  std::optional<int> order;
  std::optional<double> p, q;
  std::optional<std::string> weight_mode;
  std::optional<int> n_segments;

  std::optional<double> learning_rate, momentum, target_mse, min_dilation;
  std::optional<int> max_epochs;

  std::optional<double> frame_len_ms, hop_ms, pre_emphasis, fmin_hz, fmax_hz;
  std::optional<int> n_mels, n_coeffs;

  std::optional<int> n_classes, n_per_class, sample_rate;
  std::optional<double> snr_db, jitter, duration_s, train_fraction;

  std::optional<std::string> manifest, split, model_dir;
  std::optional<unsigned> threads;
  bool update = false;

  // wavelet
  double x0 = -1.0, x1 = 1.0, a = 1.0, b = 0.0;
  int n_samples = 201;
  int n_grid = 100000;

  // approximate
  std::string function;
  int approx_samples = 101;

  // classify
  std::string wav;
};

template <typename T>
void apply(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

RunConfig resolve(const Flags& f, std::string default_out) {
  RunConfig rc;
  rc.out_dir = std::move(default_out);
  if (!f.config_path.empty()) merge_config_file(parse_json_file(f.config_path), rc);
  apply(f.seed, rc.seed);
  apply(f.out, rc.out_dir);
  apply(f.n_w, rc.network.n_w);
  apply(f.order, rc.network.order);
  apply(f.p, rc.network.p);
  apply(f.q, rc.network.q);
  if (f.weight_mode) rc.network.weight_mode = weight_mode_from_string(*f.weight_mode);
  apply(f.n_segments, rc.n_segments);
  apply(f.learning_rate, rc.train.learning_rate);
  apply(f.momentum, rc.train.momentum);
  apply(f.target_mse, rc.train.target_mse);
  apply(f.min_dilation, rc.train.min_dilation);
  apply(f.max_epochs, rc.train.max_epochs);
  apply(f.frame_len_ms, rc.mfcc.frame_len_ms);
  apply(f.hop_ms, rc.mfcc.hop_ms);
  apply(f.pre_emphasis, rc.mfcc.pre_emphasis);
  apply(f.fmin_hz, rc.mfcc.fmin_hz);
  apply(f.fmax_hz, rc.mfcc.fmax_hz);
  apply(f.n_mels, rc.mfcc.n_mels);
  apply(f.n_coeffs, rc.mfcc.n_coeffs);
  apply(f.n_classes, rc.synth.n_classes);
  apply(f.n_per_class, rc.synth.n_per_class);
  apply(f.sample_rate, rc.synth.sample_rate);
  apply(f.snr_db, rc.synth.snr_db);
  apply(f.jitter, rc.synth.duration_jitter);
  apply(f.duration_s, rc.synth.duration_s);
  apply(f.train_fraction, rc.train_fraction);
  apply(f.manifest, rc.manifest);
  apply(f.split, rc.split);
  apply(f.model_dir, rc.model_dir);
  apply(f.threads, rc.threads);

  rc.network.seed = rc.seed;
  rc.train.seed = rc.seed;
  rc.synth.seed = rc.seed;
  rc.mfcc.validate();
  rc.train.validate();
  if (rc.network.n_w < 1) throw ValidationError("network: n_w must be >= 1");
  if (rc.n_segments < 1) throw ValidationError("network: n_segments must be >= 1");
  if (!(rc.train_fraction > 0.0 && rc.train_fraction <= 1.0)) {
    throw ValidationError("train_fraction must be in (0, 1]");
  }
  return rc;
}

void write_run_json(const RunConfig& rc, const std::string& command, Json args) {
  fs::create_directories(rc.out_dir);
  write_file_atomic(fs::path(rc.out_dir) / "run.json",
                    dump_json(run_config_json(rc, command, std::move(args))));
}

BetaParams mother(const RunConfig& rc, double x0 = -1.0, double x1 = 1.0) {
  return BetaParams(rc.network.p, rc.network.q, x0, x1);
}

// --- wavelet ---------------------------------------------------------------

int cmd_wavelet(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "out");
  const WaveletSpec spec(mother(rc, f.x0, f.x1), rc.network.order, f.a, f.b);
  if (f.n_samples < 2) throw ValidationError("wavelet: --n-samples must be >= 2");

  std::string csv = "x,psi\n";
  const double lo = spec.support_lo();
  const double hi = spec.support_hi();
  for (int k = 0; k < f.n_samples; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / (f.n_samples - 1);
    csv += format_double(x) + "," + format_double(psi_eval(spec, x)) + "\n";
  }
  const AdmissibilityReport report = check_admissibility(spec, f.n_grid);

  fs::create_directories(rc.out_dir);
  write_file_atomic(fs::path(rc.out_dir) / "wavelet.csv", csv);
  write_run_json(rc, "wavelet",
                 Json{{"x0", f.x0}, {"x1", f.x1}, {"a", f.a}, {"b", f.b},
                      {"n_samples", f.n_samples}, {"n_grid", f.n_grid}});
  out << dump_json(Json{{"integral_abs", report.integral_abs},
                        {"c_psi_estimate", report.c_psi_estimate},
                        {"support_decay", report.support_decay}});
  return 0;
}

// --- approximate -----------------------------------------------------------

// Target atom of the beta_self task.
constexpr double kSelfDilation = 1.0;
constexpr double kSelfTranslation = 0.0;

int cmd_approximate(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "out");
  if (f.approx_samples < 2) throw ValidationError("approximate: --n-samples must be >= 2");

  const std::string& name = f.function;
  std::function<double(double)> target;
  std::optional<MimoNetwork> net;
  if (name == "sine") {
    target = [](double x) { return std::sin(std::numbers::pi * x); };
  } else if (name == "square_pulse") {
    target = [](double x) { return std::abs(x) < 0.5 ? 1.0 : 0.0; };
  } else if (name == "beta_self") {
    const WaveletSpec truth(mother(rc), rc.network.order, kSelfDilation, kSelfTranslation);
    target = [truth](double x) { return psi_eval(truth, x); };
    // One node at the true dilation/translation, weight 0.
    net.emplace(std::vector<WaveletNode>{truth}, Matrix(1, 1, 0.0), WeightMode::Matrix);
  } else {
    throw ValidationError("approximate: unknown function '" + name +
                          "' (expected sine, square_pulse or beta_self)");
  }
  if (!net) {
    NetworkInit init;
    init.s_dim = 1;
    init.n_w = rc.network.n_w;
    init.order = rc.network.order;
    init.mother = mother(rc);
    init.weight_mode = WeightMode::Matrix;
    init.seed = rc.seed;
    net = init_network(init);
  }

  std::vector<Sample> samples;
  for (int k = 0; k < f.approx_samples; ++k) {
    const double x = -1.0 + 2.0 * static_cast<double>(k) / (f.approx_samples - 1);
    samples.push_back({{x}, {target(x)}});
  }
  const TrainResult result = train_samples(*net, samples, rc.train);

  std::string fit = "x,f,f_hat\n";
  for (const auto& s : samples) {
    fit += format_double(s.input[0]) + "," + format_double(s.target[0]) + "," +
           format_double(forward(result.net, s.input)[0]) + "\n";
  }
  fs::create_directories(rc.out_dir);
  const fs::path dir(rc.out_dir);
  write_file_atomic(dir / "mse_history.csv", mse_history_csv(result.report));
  write_file_atomic(dir / "fit.csv", fit);
  write_file_atomic(dir / "network.json", dump_json(network_to_json(result.net)));
  write_file_atomic(dir / "report.json", dump_json(train_report_to_json(result.report)));
  write_run_json(rc, "approximate", Json{{"function", name}, {"n_samples", f.approx_samples}});
  out << dump_json(Json{{"function", name},
                        {"epochs_run", result.report.epochs_run},
                        {"final_mse", result.report.final_mse},
                        {"converged", result.report.converged}});
  return 0;
}

// --- synth -----------------------------------------------------------------

int cmd_synth(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "corpus");
  const auto corpus = synth_corpus(rc.synth);
  const fs::path dir(rc.out_dir);
  fs::create_directories(dir / "wav");

  const int n_train = std::max(
      1, static_cast<int>(std::lround(rc.train_fraction * rc.synth.n_per_class)));
  CorpusManifest manifest;
  manifest.sample_rate = rc.synth.sample_rate;
  for (const auto& item : corpus) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03d.wav", item.label.c_str(), item.index);
    const std::string rel = std::string("wav/") + name;
    const auto bytes = encode_wav(item.clip);
    write_file_atomic(dir / rel, std::string(bytes.begin(), bytes.end()));
    manifest.entries.push_back({rel, item.label, item.index < n_train ? "train" : "test"});
  }
  write_file_atomic(dir / "manifest.json", dump_json(manifest_to_json(manifest)));
  write_run_json(rc, "synth", Json::object());
  out << dump_json(Json{{"manifest", (dir / "manifest.json").string()},
                        {"n_files", manifest.entries.size()}});
  return 0;
}

// --- features / train / classify / evaluate ---------------------------------

std::vector<FeatureVector> manifest_features(const RunConfig& rc, const std::string& split) {
  if (rc.manifest.empty()) throw ValidationError("--manifest is required");
  const fs::path manifest_path(rc.manifest);
  const CorpusManifest manifest = load_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  std::vector<FeatureVector> rows;
  for (const auto& entry : manifest.entries) {
    if (split != "all" && entry.split != split) continue;
    const fs::path file = fs::path(entry.file).is_absolute() ? fs::path(entry.file) : base / entry.file;
    FeatureVector fv = extract_features(load_wav(file), rc.mfcc, rc.n_segments);
    fv.label = entry.label;
    rows.push_back(std::move(fv));
  }
  if (rows.empty()) {
    throw ValidationError("manifest '" + rc.manifest + "' has no entries in split '" + split + "'");
  }
  return rows;
}

int cmd_features(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "out");
  const std::string split = rc.split.empty() ? "all" : rc.split;
  const auto rows = manifest_features(rc, split);
  fs::create_directories(rc.out_dir);
  write_file_atomic(fs::path(rc.out_dir) / "features.csv", features_to_csv(rows));
  write_run_json(rc, "features", Json{{"resolved_split", split}});
  out << dump_json(Json{{"rows", rows.size()}, {"dim", rows.front().values.size()}});
  return 0;
}

int cmd_train(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "");
  if (rc.out_dir.empty()) rc.out_dir = rc.model_dir;
  const std::string split = rc.split.empty() ? "train" : rc.split;
  const auto rows = manifest_features(rc, split);

  Registry registry;
  registry.mfcc = rc.mfcc;
  registry.n_segments = rc.n_segments;
  std::vector<ClassModel> trained = train_classes(rows, rc.network, rc.train, rc.threads);

  if (f.update && fs::exists(fs::path(rc.model_dir) / "manifest.json")) {
    Registry existing = load_registry(rc.model_dir);
    if (!(existing.mfcc == rc.mfcc) || existing.n_segments != rc.n_segments) {
      throw ValidationError("train --update: feature settings differ from registry '" +
                            rc.model_dir + "'");
    }
    std::map<std::string, ClassModel> merged;
    for (auto& m : existing.models) merged.insert_or_assign(m.label, std::move(m));
    for (auto& m : trained) merged.insert_or_assign(m.label, std::move(m));
    trained.clear();
    for (auto& [label, m] : merged) trained.push_back(std::move(m));
  }
  registry.models = std::move(trained);
  save_registry(rc.model_dir, registry);
  write_run_json(rc, "train", Json{{"resolved_split", split}, {"update", f.update}});

  Json summary = Json::array();
  for (const auto& m : registry.models) {
    summary.push_back({{"label", m.label},
                       {"epochs_run", m.train_report.epochs_run},
                       {"final_mse", m.train_report.final_mse},
                       {"converged", m.train_report.converged}});
  }
  out << dump_json(Json{{"model_dir", rc.model_dir}, {"classes", std::move(summary)}});
  return 0;
}

int cmd_classify(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "out");
  if (f.wav.empty()) throw ValidationError("classify: --wav is required");
  const Registry registry = load_registry(rc.model_dir);
  rc.mfcc = registry.mfcc;
  rc.n_segments = registry.n_segments;
  const FeatureVector fv = extract_features(load_wav(f.wav), registry.mfcc, registry.n_segments);
  const Prediction p = classify(registry.models, fv.values);

  Json scores = Json::object();
  for (const auto& [label, score] : p.scores) scores[label] = score;
  const Json result{{"file", f.wav}, {"predicted", p.predicted}, {"scores", std::move(scores)}};
  fs::create_directories(rc.out_dir);
  write_file_atomic(fs::path(rc.out_dir) / "prediction.json", dump_json(result));
  write_run_json(rc, "classify", Json{{"wav", f.wav}});
  out << dump_json(result);
  return 0;
}

int cmd_evaluate(const Flags& f, std::ostream& out) {
  RunConfig rc = resolve(f, "out");
  const Registry registry = load_registry(rc.model_dir);
  rc.mfcc = registry.mfcc;
  rc.n_segments = registry.n_segments;
  const std::string split = rc.split.empty() ? "test" : rc.split;
  const auto rows = manifest_features(rc, split);
  const EvalReport report = evaluate(registry.models, rows);

  const fs::path dir(rc.out_dir);
  fs::create_directories(dir);
  write_file_atomic(dir / "eval_report.json", dump_json(eval_report_to_json(report)));
  write_file_atomic(dir / "predictions.csv", predictions_csv(report));
  write_file_atomic(dir / "rates.csv", rates_csv(report));
  write_run_json(rc, "evaluate", Json{{"resolved_split", split}});
  out << dump_json(Json{{"recognition_rate", report.recognition_rate},
                        {"n_items", report.items.size()}});
  return 0;
}

std::string one_line(std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return msg;
}

void add_network_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n-w", f.n_w, "Hidden wavelet nodes");
  cmd->add_option("--order", f.order, "Derivative order of the mother wavelet");
  cmd->add_option("--p", f.p, "Beta exponent p");
  cmd->add_option("--q", f.q, "Beta exponent q");
  cmd->add_option("--weight-mode", f.weight_mode, "shared or matrix");
}

void add_train_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--learning-rate", f.learning_rate);
  cmd->add_option("--momentum", f.momentum);
  cmd->add_option("--max-epochs", f.max_epochs);
  cmd->add_option("--target-mse", f.target_mse);
  cmd->add_option("--min-dilation", f.min_dilation);
}

void add_feature_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--frame-len-ms", f.frame_len_ms);
  cmd->add_option("--hop-ms", f.hop_ms);
  cmd->add_option("--n-mels", f.n_mels);
  cmd->add_option("--n-coeffs", f.n_coeffs);
  cmd->add_option("--pre-emphasis", f.pre_emphasis);
  cmd->add_option("--fmin", f.fmin_hz);
  cmd->add_option("--fmax", f.fmax_hz);
  cmd->add_option("--n-segments", f.n_segments, "Time segments per word vector");
  cmd->add_option("--manifest", f.manifest, "Corpus manifest JSON");
  cmd->add_option("--split", f.split, "train, test or all");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Beta wavelet networks for isolated-word modeling", "mimown"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "JSON run configuration");
  app.add_option("--seed", f.seed, "Seed for every stochastic component");
  app.add_option("--out", f.out, "Output directory");

  auto* wavelet = app.add_subcommand("wavelet", "Sample a Beta wavelet atom as x,psi CSV");
  add_network_flags(wavelet, f);
  wavelet->add_option("--x0", f.x0);
  wavelet->add_option("--x1", f.x1);
  wavelet->add_option("--a", f.a, "Dilation");
  wavelet->add_option("--b", f.b, "Translation");
  wavelet->add_option("--n-samples", f.n_samples);
  wavelet->add_option("--n-grid", f.n_grid, "Quadrature points for the zero-integral check");

  auto* approximate = app.add_subcommand("approximate", "Fit a 1-D function with a wavelet network");
  approximate->add_option("function", f.function, "sine, square_pulse or beta_self")->required();
  add_network_flags(approximate, f);
  add_train_flags(approximate, f);
  approximate->add_option("--n-samples", f.approx_samples);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic isolated-word corpus");
  synth->add_option("--n-classes", f.n_classes);
  synth->add_option("--n-per-class", f.n_per_class);
  synth->add_option("--sample-rate", f.sample_rate);
  synth->add_option("--snr-db", f.snr_db);
  synth->add_option("--jitter", f.jitter, "Relative duration jitter");
  synth->add_option("--duration", f.duration_s, "Nominal word duration in seconds");
  synth->add_option("--train-fraction", f.train_fraction);

  auto* features = app.add_subcommand("features", "Extract MFCC word vectors to CSV");
  add_feature_flags(features, f);

  auto* train = app.add_subcommand("train", "Train one network per class into a registry");
  add_feature_flags(train, f);
  add_network_flags(train, f);
  add_train_flags(train, f);
  train->add_option("--model-dir", f.model_dir);
  train->add_option("--threads", f.threads);
  train->add_flag("--update", f.update, "Keep existing classes, add or replace trained ones");

  auto* classify_cmd = app.add_subcommand("classify", "Classify one WAV file");
  classify_cmd->add_option("--model-dir", f.model_dir);
  classify_cmd->add_option("--wav", f.wav)->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a registry on a manifest split");
  evaluate_cmd->add_option("--model-dir", f.model_dir);
  evaluate_cmd->add_option("--manifest", f.manifest);
  evaluate_cmd->add_option("--split", f.split);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*wavelet) return cmd_wavelet(f, out);
    if (*approximate) return cmd_approximate(f, out);
    if (*synth) return cmd_synth(f, out);
    if (*features) return cmd_features(f, out);
    if (*train) return cmd_train(f, out);
    if (*classify_cmd) return cmd_classify(f, out);
    if (*evaluate_cmd) return cmd_evaluate(f, out);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}

}  // namespace mimown::cli
