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

// Synthetic isolated-word corpus. Each class is a fixed template of three
// gliding tones under an attack/decay envelope; examples add seeded white
// noise at a set SNR and jitter the duration.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mimown/wav.hpp"

namespace mimown {

struct SynthConfig {
  int n_classes = 5;
  int n_per_class = 20;
  int sample_rate = 16000;
  double snr_db = 20.0;          // +infinity disables noise
  double duration_jitter = 0.1;  // relative, uniform in [-j, j]
  double duration_s = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const SynthConfig&) const = default;
};

struct LabeledClip {
  std::string label;
  int index = 0;  // position within its class
  AudioClip clip;
};

// Tone frequencies (Hz) of a class template.
std::vector<double> class_tone_frequencies(int class_index);
std::string class_label(int class_index);

// n_classes * n_per_class clips ordered by class then index.
std::vector<LabeledClip> synth_corpus(const SynthConfig& config);

}  // namespace mimown
