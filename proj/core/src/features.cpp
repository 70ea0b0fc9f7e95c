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

#include "mimown/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "mimown/csv.hpp"
#include "mimown/errors.hpp"
#include "mimown/fft.hpp"

namespace mimown {

void MfccConfig::validate() const {
  if (!(frame_len_ms > 0.0)) {
    throw ValidationError("MfccConfig: frame_len_ms must be > 0");
  }
  if (!(hop_ms > 0.0) || hop_ms > frame_len_ms) {
    throw ValidationError("MfccConfig: need 0 < hop_ms <= frame_len_ms");
  }
  if (n_mels < 1 || n_coeffs < 1 || n_coeffs > n_mels) {
    throw ValidationError("MfccConfig: need 1 <= n_coeffs <= n_mels (n_coeffs=" +
                          std::to_string(n_coeffs) +
                          ", n_mels=" + std::to_string(n_mels) + ")");
  }
  if (!(fmin_hz >= 0.0)) throw ValidationError("MfccConfig: fmin_hz must be >= 0");
  if (!std::isfinite(pre_emphasis)) {
    throw ValidationError("MfccConfig: pre_emphasis must be finite");
  }
}

double MfccConfig::resolved_fmax(int sample_rate) const {
  const double nyquist = 0.5 * sample_rate;
  const double fmax = fmax_hz > 0.0 ? fmax_hz : nyquist;
  if (!(fmin_hz < fmax) || fmax > nyquist) {
    throw ValidationError("MfccConfig: need 0 <= fmin < fmax <= sample_rate/2 (fmin=" +
                          std::to_string(fmin_hz) + ", fmax=" + std::to_string(fmax) +
                          ", sample_rate=" + std::to_string(sample_rate) + ")");
  }
  return fmax;
}

std::size_t MfccConfig::frame_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(frame_len_ms * sample_rate / 1000.0));
}

std::size_t MfccConfig::hop_length(int sample_rate) const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0)));
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

namespace {

// n_mels + 2 filter edge frequencies, equally spaced in mel.
std::vector<double> mel_edges(int n_mels, double fmin_hz, double fmax_hz) {
  const double lo = hz_to_mel(fmin_hz);
  const double hi = hz_to_mel(fmax_hz);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges[k] = mel_to_hz(lo + (hi - lo) * static_cast<double>(k) / (n_mels + 1));
  }
  return edges;
}

}  // namespace

std::vector<double> mel_centers(int n_mels, double fmin_hz, double fmax_hz) {
  const auto edges = mel_edges(n_mels, fmin_hz, fmax_hz);
  return {edges.begin() + 1, edges.end() - 1};
}

Matrix mel_filterbank(int n_mels, std::size_t n_fft, int sample_rate,
                      double fmin_hz, double fmax_hz) {
  const auto edges = mel_edges(n_mels, fmin_hz, fmax_hz);
  const std::size_t n_bins = n_fft / 2 + 1;
  Matrix fb(static_cast<std::size_t>(n_mels), n_bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m];
    const double center = edges[m + 1];
    const double hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      double w = 0.0;
      if (f > lo && f <= center) {
        w = (f - lo) / (center - lo);
      } else if (f > center && f < hi) {
        w = (hi - f) / (hi - center);
      }
      fb(static_cast<std::size_t>(m), k) = w;
    }
  }
  return fb;
}

std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

std::vector<double> pre_emphasize(std::span<const double> x, double coeff) {
  std::vector<double> y(x.size());
  if (x.empty()) return y;
  y[0] = x[0];
  for (std::size_t t = 1; t < x.size(); ++t) y[t] = x[t] - coeff * x[t - 1];
  return y;
}

std::size_t frame_count(std::size_t n_samples, std::size_t frame_len,
                        std::size_t hop) {
  if (frame_len == 0 || hop == 0 || n_samples < frame_len) return 0;
  return 1 + (n_samples - frame_len) / hop;
}

std::vector<double> dct2_orthonormal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                             (2.0 * static_cast<double>(i) + 1.0) /
                             (2.0 * static_cast<double>(n)));
    }
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    c[k] = scale * sum;
  }
  return c;
}

std::vector<double> idct2_orthonormal(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
      sum += scale * c[k] *
             std::cos(std::numbers::pi * static_cast<double>(k) *
                      (2.0 * static_cast<double>(i) + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    x[i] = sum;
  }
  return x;
}

Matrix log_mel_energies(const AudioClip& clip, const MfccConfig& config) {
  clip.validate();
  config.validate();
  const double fmax = config.resolved_fmax(clip.sample_rate);
  const std::size_t frame_len = config.frame_length(clip.sample_rate);
  const std::size_t hop = config.hop_length(clip.sample_rate);
  const std::size_t n_frames = frame_count(clip.samples.size(), frame_len, hop);
  if (frame_len == 0 || n_frames == 0) {
    throw ValidationError("mfcc: clip of " + std::to_string(clip.samples.size()) +
                          " samples is shorter than one frame (" +
                          std::to_string(frame_len) + " samples)");
  }

  const std::size_t n_fft = next_pow2(frame_len);
  const Matrix fb = mel_filterbank(config.n_mels, n_fft, clip.sample_rate,
                                   config.fmin_hz, fmax);
  const auto window = hamming_window(frame_len);
  const auto emphasized = pre_emphasize(clip.samples, config.pre_emphasis);

  Matrix out(n_frames, static_cast<std::size_t>(config.n_mels));
  std::vector<double> frame(frame_len);
  std::vector<double> magnitude(n_fft / 2 + 1);
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < frame_len; ++i) {
      frame[i] = emphasized[f * hop + i] * window[i];
    }
    const auto spectrum = fft_real(frame, n_fft);
    for (std::size_t k = 0; k < magnitude.size(); ++k) magnitude[k] = std::abs(spectrum[k]);
    for (std::size_t m = 0; m < fb.rows(); ++m) {
      double energy = 0.0;
      const auto weights = fb.row(m);
      for (std::size_t k = 0; k < magnitude.size(); ++k) energy += weights[k] * magnitude[k];
      out(f, m) = std::log(std::max(energy, kLogEnergyFloor));
    }
  }
  return out;
}

Matrix mfcc(const AudioClip& clip, const MfccConfig& config) {
  const Matrix energies = log_mel_energies(clip, config);
  const auto n_coeffs = static_cast<std::size_t>(config.n_coeffs);
  Matrix out(energies.rows(), n_coeffs);
  for (std::size_t f = 0; f < energies.rows(); ++f) {
    const auto c = dct2_orthonormal(energies.row(f));
    std::copy_n(c.begin(), n_coeffs, out.row(f).begin());
  }
  return out;
}

FeatureVector fixed_length_embedding(const Matrix& frames, int n_segments) {
  if (frames.rows() == 0 || frames.cols() == 0) {
    throw ValidationError("fixed_length_embedding: empty frame matrix");
  }
  if (n_segments < 1) {
    throw ValidationError("fixed_length_embedding: n_segments must be >= 1");
  }
  const auto segments = static_cast<std::size_t>(n_segments);
  const std::size_t dim = frames.cols();
  const std::size_t n = std::max(frames.rows(), segments);
  // Frame index after padding short words with their last frame.
  auto source_row = [&](std::size_t t) { return std::min(t, frames.rows() - 1); };

  FeatureVector out;
  out.values.assign(segments * dim, 0.0);
  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t begin = s * n / segments;
    const std::size_t end = (s + 1) * n / segments;
    const auto block = std::span(out.values).subspan(s * dim, dim);
    for (std::size_t t = begin; t < end; ++t) {
      const auto row = frames.row(source_row(t));
      for (std::size_t d = 0; d < dim; ++d) block[d] += row[d];
    }
    const double count = static_cast<double>(end - begin);
    for (double& v : block) v /= count;
  }
  return out;
}

FeatureVector extract_features(const AudioClip& clip, const MfccConfig& config,
                               int n_segments) {
  return fixed_length_embedding(mfcc(clip, config), n_segments);
}

std::string features_to_csv(std::span<const FeatureVector> rows) {
  std::string out;
  if (rows.empty()) return out;
  const std::size_t dim = rows.front().values.size();
  for (const auto& row : rows) {
    if (row.values.size() != dim) throw DimensionError("features_to_csv row", dim, row.values.size());
    const std::string label = row.label.value_or("");
    if (label.find_first_of(",\r\n") != std::string::npos) {
      throw ValidationError("features_to_csv: label '" + label + "' contains a separator");
    }
    out += label;
    for (double v : row.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureVector> features_from_csv(const std::string& text) {
  std::vector<FeatureVector> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    FeatureVector row;
    if (!fields[0].empty()) row.label = std::string(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        const std::string field(fields[i]);
        row.values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw FormatError("features csv line " + std::to_string(line_no) +
                          ": bad number in column " + std::to_string(i + 1));
      }
    }
    if (!rows.empty() && row.values.size() != rows.front().values.size()) {
      throw DimensionError("features csv line " + std::to_string(line_no),
                           rows.front().values.size(), row.values.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mimown
