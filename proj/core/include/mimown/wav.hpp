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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mimown {

struct AudioClip {
  std::vector<double> samples;  // nominally in [-1, 1]
  int sample_rate = 0;          // Hz

  // Throws ValidationError on sample_rate <= 0 or no samples.
  void validate() const;
};

// Decodes a RIFF/WAVE byte image: PCM (format tag 1), mono, 16-bit.
// Samples are scaled by 1/32768. Throws FormatError naming the offending
// header field on anything else, and on truncated input.
AudioClip parse_wav(std::span<const std::uint8_t> bytes);

// Reads and decodes a file; IoError if it cannot be opened.
AudioClip load_wav(const std::filesystem::path& path);

// Encodes as 16-bit PCM mono. Samples are rounded to the nearest code and
// clipped to [-32768, 32767].
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void save_wav(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace mimown
