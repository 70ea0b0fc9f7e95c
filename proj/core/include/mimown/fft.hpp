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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mimown {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 decimation-in-time FFT, forward sign
// convention X[k] = sum_n x[n] exp(-2*pi*i*k*n/N). data.size() must be a
// power of two (ValidationError otherwise).
void fft_inplace(std::span<std::complex<double>> data);

// FFT of a real signal zero-padded (or truncated) to n_fft points.
std::vector<std::complex<double>> fft_real(std::span<const double> signal,
                                           std::size_t n_fft);

}  // namespace mimown
