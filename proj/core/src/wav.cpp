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

#include "mimown/wav.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "mimown/errors.hpp"

namespace mimown {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(at));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

void AudioClip::validate() const {
  if (sample_rate <= 0) {
    throw ValidationError("AudioClip: sample_rate must be > 0, got " +
                          std::to_string(sample_rate));
  }
  if (samples.empty()) throw ValidationError("AudioClip: no samples");
}

AudioClip parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw FormatError("wav: truncated RIFF header");
  if (!tag_is(bytes, 0, "RIFF")) throw FormatError("wav: missing RIFF tag");
  if (!tag_is(bytes, 8, "WAVE")) throw FormatError("wav: RIFF form type is not WAVE");

  struct Format {
    std::uint16_t audio_format;
    std::uint16_t channels;
    std::uint32_t sample_rate;
    std::uint16_t bits_per_sample;
  };
  std::optional<Format> fmt;
  std::optional<std::span<const std::uint8_t>> data;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      throw FormatError("wav: chunk '" +
                        std::string(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                    bytes.begin() + static_cast<std::ptrdiff_t>(pos) + 4) +
                        "' truncated");
    }
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw FormatError("wav: fmt chunk shorter than 16 bytes");
      fmt = Format{read_u16(bytes, body), read_u16(bytes, body + 2),
                   read_u32(bytes, body + 4), read_u16(bytes, body + 14)};
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1u);
  }
  if (pos < bytes.size() && !data) throw FormatError("wav: truncated chunk header");
  if (!fmt) throw FormatError("wav: missing fmt chunk");
  if (!data) throw FormatError("wav: missing data chunk");

  if (fmt->audio_format != 1) {
    throw FormatError("wav: unsupported audio_format " +
                      std::to_string(fmt->audio_format) + " (only PCM = 1)");
  }
  if (fmt->channels != 1) {
    throw FormatError("wav: unsupported channels " + std::to_string(fmt->channels) +
                      " (only mono)");
  }
  if (fmt->bits_per_sample != 16) {
    throw FormatError("wav: unsupported bits_per_sample " +
                      std::to_string(fmt->bits_per_sample) + " (only 16)");
  }
  if (fmt->sample_rate == 0 || fmt->sample_rate > 0x7FFFFFFFu) {
    throw FormatError("wav: invalid sample_rate " + std::to_string(fmt->sample_rate));
  }
  if (data->size() % 2 != 0) throw FormatError("wav: data chunk has odd length");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt->sample_rate);
  clip.samples.resize(data->size() / 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(read_u16(*data, 2 * i));
    clip.samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return clip;
}

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  clip.validate();
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = 2 * n;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    const double code = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
  }
  return out;
}

void save_wav(const std::filesystem::path& path, const AudioClip& clip) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

}  // namespace mimown
