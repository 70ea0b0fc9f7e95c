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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mimown/beta_wavelet.hpp"
#include "mimown/features.hpp"
#include "mimown/fft.hpp"
#include "mimown/network.hpp"
#include "mimown/random.hpp"
#include "mimown/training.hpp"

namespace {

using namespace mimown;

void BM_BetaDerivative(benchmark::State& state) {
  const BetaParams bp(2.0, 3.0, -1.0, 1.0);
  const int order = static_cast<int>(state.range(0));
  double x = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(beta_derivative(bp, order, x));
    x = x > 0.9 ? -0.9 : x + 1e-3;
  }
}
BENCHMARK(BM_BetaDerivative)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

MimoNetwork bench_net(std::size_t s, std::size_t nw) {
  NetworkInit init;
  init.s_dim = s;
  init.n_w = nw;
  init.seed = 1;
  return init_network(init);
}

std::vector<double> bench_input(std::size_t s) {
  Rng rng(2);
  std::vector<double> x(s);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

void BM_Forward(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  const MimoNetwork net = bench_net(s, 8);
  const auto x = bench_input(s);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
}
BENCHMARK(BM_Forward)->Arg(13)->Arg(52);

void BM_Gradients(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  const MimoNetwork net = bench_net(s, 8);
  const auto x = bench_input(s);
  for (auto _ : state) benchmark::DoNotOptimize(gradients(net, x, x));
}
BENCHMARK(BM_Gradients)->Arg(13)->Arg(52);

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = bench_input(n);
  for (auto _ : state) benchmark::DoNotOptimize(fft_real(x, n));
}
BENCHMARK(BM_Fft)->Arg(512)->Arg(4096);

void BM_Mfcc(benchmark::State& state) {
  AudioClip clip;
  clip.sample_rate = 16000;
  for (int t = 0; t < 8000; ++t) clip.samples.push_back(0.3 * std::sin(2.0 * std::numbers::pi * 440.0 * t / 16000));
  const MfccConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(mfcc(clip, cfg));
}
BENCHMARK(BM_Mfcc);

}  // namespace

BENCHMARK_MAIN();
