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

// MFCC front end: pre-emphasis, framing, Hamming window, radix-2 magnitude
// spectrum, triangular mel filterbank (HTK mel scale), log with floor, and
// orthonormal DCT-II. Variable-length words are reduced to a fixed-length
// vector by averaging frames over contiguous time segments.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mimown/matrix.hpp"
#include "mimown/wav.hpp"

namespace mimown {

inline constexpr double kLogEnergyFloor = 1e-10;

struct MfccConfig {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  int n_mels = 26;
  int n_coeffs = 13;
  double pre_emphasis = 0.97;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;  // <= 0 means sample_rate / 2

  // Checks the sample-rate independent invariants.
  void validate() const;
  // Upper band edge resolved against a sample rate; validates the band.
  double resolved_fmax(int sample_rate) const;

  std::size_t frame_length(int sample_rate) const;
  std::size_t hop_length(int sample_rate) const;

  bool operator==(const MfccConfig&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  std::optional<std::string> label;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Center frequencies (Hz) of the n_mels filters.
std::vector<double> mel_centers(int n_mels, double fmin_hz, double fmax_hz);

// n_mels x (n_fft/2 + 1) triangular weights over FFT bin frequencies.
Matrix mel_filterbank(int n_mels, std::size_t n_fft, int sample_rate,
                      double fmin_hz, double fmax_hz);

std::vector<double> hamming_window(std::size_t n);

// y[0] = x[0]; y[t] = x[t] - coeff * x[t-1].
std::vector<double> pre_emphasize(std::span<const double> x, double coeff);

// 1 + floor((n_samples - frame_len) / hop), or 0 when the clip is shorter
// than one frame.
std::size_t frame_count(std::size_t n_samples, std::size_t frame_len,
                        std::size_t hop);

std::vector<double> dct2_orthonormal(std::span<const double> x);
std::vector<double> idct2_orthonormal(std::span<const double> c);

// Log mel energies per frame, n_frames x n_mels (the pre-DCT stage).
Matrix log_mel_energies(const AudioClip& clip, const MfccConfig& config);

// n_frames x n_coeffs. Throws ValidationError when the clip is shorter than
// one frame.
Matrix mfcc(const AudioClip& clip, const MfccConfig& config);

// Averages frames over n_segments near-equal contiguous blocks and
// concatenates the block means. Fewer frames than segments: the last frame
// is repeated to fill.
FeatureVector fixed_length_embedding(const Matrix& frames, int n_segments);

// clip -> mfcc -> fixed_length_embedding.
FeatureVector extract_features(const AudioClip& clip, const MfccConfig& config,
                               int n_segments);

// `label,v1,...,vS` rows, no header. Throws DimensionError on ragged input.
std::string features_to_csv(std::span<const FeatureVector> rows);
std::vector<FeatureVector> features_from_csv(const std::string& text);

}  // namespace mimown
