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

#include "mimown/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {

namespace {

constexpr double kToneAmplitudes[] = {1.0, 0.5, 0.25};
constexpr double kPeakLevel = 0.5;

// Relative frequency sweep over the word, cycling through falling, flat and
// rising contours.
double class_glide(int class_index) {
  return 0.15 * static_cast<double>(class_index % 3 - 1);
}

}  // namespace

void SynthConfig::validate() const {
  if (n_classes < 2) throw ValidationError("synth: n_classes must be >= 2");
  if (n_per_class < 1) throw ValidationError("synth: n_per_class must be >= 1");
  if (sample_rate < 8000) throw ValidationError("synth: sample_rate must be >= 8000 Hz");
  if (!(duration_s > 0.0)) throw ValidationError("synth: duration_s must be > 0");
  if (!(duration_jitter >= 0.0 && duration_jitter < 1.0)) {
    throw ValidationError("synth: duration_jitter must be in [0, 1)");
  }
  if (std::isnan(snr_db)) throw ValidationError("synth: snr_db is NaN");
  const auto top = class_tone_frequencies(n_classes - 1);
  for (double f : top) {
    if (f * (1.0 + std::abs(class_glide(n_classes - 1))) >= 0.5 * sample_rate) {
      throw ValidationError("synth: too many classes for sample_rate " +
                            std::to_string(sample_rate));
    }
  }
}

std::vector<double> class_tone_frequencies(int class_index) {
  const double c = static_cast<double>(class_index);
  return {300.0 + 130.0 * c, 1300.0 + 230.0 * c, 3100.0 + 370.0 * c};
}

std::string class_label(int class_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "word%02d", class_index);
  return buf;
}

std::vector<LabeledClip> synth_corpus(const SynthConfig& config) {
  config.validate();
  std::vector<LabeledClip> corpus;
  corpus.reserve(static_cast<std::size_t>(config.n_classes * config.n_per_class));
  const double sr = static_cast<double>(config.sample_rate);
  double amplitude_sum = 0.0;
  for (double a : kToneAmplitudes) amplitude_sum += a;

  for (int c = 0; c < config.n_classes; ++c) {
    const auto freqs = class_tone_frequencies(c);
    const double glide = class_glide(c);
    for (int k = 0; k < config.n_per_class; ++k) {
      Rng rng(derive_seed(config.seed,
                          static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(config.n_per_class) +
                              static_cast<std::uint64_t>(k)));
      const double stretch = config.duration_jitter > 0.0
                                 ? 1.0 + rng.uniform(-config.duration_jitter, config.duration_jitter)
                                 : 1.0;
      const double duration = config.duration_s * stretch;
      const auto n = static_cast<std::size_t>(std::lround(duration * sr));

      AudioClip clip;
      clip.sample_rate = config.sample_rate;
      clip.samples.resize(n);
      double power = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double time = static_cast<double>(t) / sr;
        const double progress = time / duration;
        // Instantaneous frequency f * (1 + glide * (progress - 1/2)).
        const double warped = time + glide * duration * (0.5 * progress * progress - 0.5 * progress);
        double v = 0.0;
        for (std::size_t m = 0; m < freqs.size(); ++m) {
          v += kToneAmplitudes[m] * std::sin(2.0 * std::numbers::pi * freqs[m] * warped);
        }
        const double envelope = std::sin(std::numbers::pi * progress);
        v *= kPeakLevel * envelope / amplitude_sum;
        clip.samples[t] = v;
        power += v * v;
      }
      if (std::isfinite(config.snr_db)) {
        const double rms = std::sqrt(power / static_cast<double>(n));
        const double sigma = rms / std::pow(10.0, config.snr_db / 20.0);
        for (double& v : clip.samples) v += sigma * rng.normal();
      }
      corpus.push_back({class_label(c), k, std::move(clip)});
    }
  }
  return corpus;
}

}  // namespace mimown
