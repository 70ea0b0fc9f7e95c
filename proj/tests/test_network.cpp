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

#include "mimown/network.hpp"

#include <gtest/gtest.h>

#include "mimown/errors.hpp"
#include "mimown/random.hpp"

namespace mimown {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

MimoNetwork random_net(std::uint64_t seed, std::size_t s_dim, std::size_t n_w,
                       WeightMode mode = WeightMode::Matrix) {
  NetworkInit init;
  init.s_dim = s_dim;
  init.n_w = n_w;
  init.weight_mode = mode;
  init.seed = seed;
  return init_network(init);
}

TEST(InitNetworkTest, SameSeedSameNetwork) {
  EXPECT_EQ(random_net(42, 13, 8), random_net(42, 13, 8));
  EXPECT_FALSE(random_net(42, 13, 8) == random_net(43, 13, 8));
}

TEST(InitNetworkTest, SingleNodeInvariants) {
  const MimoNetwork net = random_net(7, 1, 1);
  ASSERT_EQ(net.n_w(), 1u);
  ASSERT_EQ(net.s_dim(), 1u);
  EXPECT_GE(net.nodes()[0].b(), -1.0);
  EXPECT_LE(net.nodes()[0].b(), 1.0);
  EXPECT_GT(net.nodes()[0].a(), 0.0);
}

TEST(InitNetworkTest, PlacementAndDilationRanges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MimoNetwork net = random_net(seed, 5, 8);
    for (std::size_t j = 0; j < 8; ++j) {
      const auto& node = net.nodes()[j];
      // One translation per stratum.
      EXPECT_GE(node.b(), -1.0 + j * 0.25);
      EXPECT_LE(node.b(), -1.0 + (j + 1) * 0.25);
      EXPECT_GE(node.a(), 2.0 / 16.0);
      EXPECT_LE(node.a(), 2.0);
    }
    for (double w : net.weights().data()) {
      EXPECT_GE(w, -0.5);
      EXPECT_LE(w, 0.5);
    }
  }
}

TEST(InitNetworkTest, SharedModeColumnsEqual) {
  for (std::size_t s : {1u, 2u, 13u}) {
    const MimoNetwork net = random_net(3, s, 6, WeightMode::Shared);
    for (std::size_t j = 0; j < net.n_w(); ++j)
      for (std::size_t i = 1; i < s; ++i) EXPECT_EQ(net.weights()(j, i), net.weights()(j, 0));
  }
}

TEST(InitNetworkTest, Rejections) {
  NetworkInit init;
  init.range_hi = init.range_lo;
  EXPECT_THROW(init_network(init), ValidationError);
  init = NetworkInit{};
  init.n_w = 0;
  EXPECT_THROW(init_network(init), ValidationError);
  init = NetworkInit{};
  init.s_dim = 0;
  EXPECT_THROW(init_network(init), ValidationError);
}

TEST(MimoNetworkTest, ConstructorChecksShapeAndSharedColumns) {
  const WaveletNode node(BetaParams(2, 2, -1, 1), 1, 1.0, 0.0);
  EXPECT_THROW(MimoNetwork({node}, Matrix(2, 3), WeightMode::Matrix), DimensionError);
  EXPECT_THROW(MimoNetwork({node}, Matrix(1, 2, std::vector<double>{1.0, 2.0}), WeightMode::Shared),
               ValidationError);
  MimoNetwork shared({node}, Matrix(1, 3), WeightMode::Shared);
  shared.set_weight(0, 1, 0.7);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(shared.weights()(0, i), 0.7);
}

TEST(ForwardTest, ZeroWeightsGiveZero) {
  MimoNetwork net = random_net(1, 4, 5);
  net.set_weights(Matrix(5, 4));
  Rng rng(2);
  const auto y = forward(net, random_vector(rng, 4));
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(ForwardTest, DerivativeOfParabolaExample) {
  const WaveletNode node(BetaParams(1, 1, -1, 1), 1, 1.0, 0.0);
  const MimoNetwork net({node}, Matrix(1, 2, std::vector<double>{1.0, 1.0}), WeightMode::Matrix);
  const auto y = forward(net, std::vector<double>{0.5, 0.0});
  EXPECT_NEAR(y[0], -1.0, 1e-12);
  EXPECT_NEAR(y[1], 0.0, 1e-12);
}

TEST(ForwardTest, LengthMismatchNamesBothLengths) {
  const MimoNetwork net = random_net(1, 4, 2);
  try {
    forward(net, std::vector<double>(3, 0.0));
    FAIL();
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('4'), std::string::npos) << msg;
    EXPECT_NE(msg.find('3'), std::string::npos) << msg;
  }
}

TEST(ForwardTest, LinearInWeights) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    MimoNetwork net = random_net(trial, 6, 7);
    const Matrix w1 = random_matrix(rng, 7, 6);
    const Matrix w2 = random_matrix(rng, 7, 6);
    Matrix sum(7, 6);
    for (std::size_t k = 0; k < sum.data().size(); ++k) sum.data()[k] = w1.data()[k] + w2.data()[k];
    const auto x = random_vector(rng, 6);
    net.set_weights(w1);
    const auto y1 = forward(net, x);
    net.set_weights(w2);
    const auto y2 = forward(net, x);
    net.set_weights(sum);
    const auto y = forward(net, x);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(y[i], y1[i] + y2[i], 1e-12);
  }
}

TEST(ForwardTest, ChannelIndependence) {
  Rng rng(5);
  const MimoNetwork net = random_net(9, 5, 6);
  const auto x = random_vector(rng, 5);
  const auto y = forward(net, x);
  for (std::size_t k = 0; k < 5; ++k) {
    auto perturbed = x;
    perturbed[k] += 0.3;
    const auto yp = forward(net, perturbed);
    for (std::size_t i = 0; i < 5; ++i) {
      if (i != k) EXPECT_EQ(yp[i], y[i]);
    }
  }
}

TEST(ForwardTest, SharedMatchesDuplicatedMatrix) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const MimoNetwork shared = random_net(trial, 4, 5, WeightMode::Shared);
    const MimoNetwork matrix(shared.nodes(), shared.weights(), WeightMode::Matrix);
    const auto x = random_vector(rng, 4);
    EXPECT_EQ(forward(shared, x), forward(matrix, x));
  }
}

TEST(ForwardTest, SuperpositionOfSingleChannelNets) {
  Rng rng(21);
  const MimoNetwork net = random_net(4, 6, 5);
  const auto x = random_vector(rng, 6);
  const auto y = forward(net, x);
  for (std::size_t i = 0; i < 6; ++i) {
    Matrix col(5, 1);
    for (std::size_t j = 0; j < 5; ++j) col(j, 0) = net.weights()(j, i);
    const MimoNetwork single(net.nodes(), col, WeightMode::Matrix);
    EXPECT_EQ(forward(single, std::vector<double>{x[i]})[0], y[i]);
  }
}

TEST(ReconstructionErrorTest, Examples) {
  MimoNetwork net = random_net(1, 5, 3);
  net.set_weights(Matrix(3, 5));
  EXPECT_EQ(reconstruction_error(net, std::vector<double>(5, 0.0)), 0.0);
  EXPECT_EQ(reconstruction_error(net, std::vector<double>(5, 1.0)), 1.0);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const MimoNetwork r = random_net(trial, 5, 4);
    EXPECT_GE(reconstruction_error(r, random_vector(rng, 5, -3, 3)), 0.0);
  }
}

TEST(GrowTest, ZeroScaleLeavesOutputUnchanged) {
  Rng rng(6);
  const MimoNetwork net = random_net(2, 4, 3);
  const std::vector<WaveletNode> extra = {WaveletNode(BetaParams(2, 3, -1, 1), 2, 0.4, 0.1),
                                          WaveletNode(BetaParams(2, 2, -1, 1), 1, 0.7, -0.3)};
  const MimoNetwork grown = grow_hidden_layer(net, extra, 0.0, 99);
  ASSERT_EQ(grown.n_w(), 5u);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_vector(rng, 4);
    EXPECT_EQ(forward(grown, x), forward(net, x));
  }
}

TEST(GrowTest, SuperpositionOfOldAndNew) {
  Rng rng(7);
  const MimoNetwork net = random_net(2, 4, 3);
  const std::vector<WaveletNode> extra = {WaveletNode(BetaParams(2, 3, -1, 1), 2, 0.9, 0.1)};
  const MimoNetwork grown = grow_hidden_layer(net, extra, 0.5, 99);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(grown.weights()(j, i), net.weights()(j, i));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_vector(rng, 4);
    const auto old_y = forward(net, x);
    const auto y = forward(grown, x);
    for (std::size_t i = 0; i < 4; ++i) {
      const double w = grown.weights()(3, i);
      EXPECT_LE(std::abs(w), 0.5);
      EXPECT_NEAR(y[i], old_y[i] + w * psi_eval(extra[0], x[i]), 1e-12);
    }
  }
}

TEST(GrowTest, GrowTwiceKeepsOriginalRows) {
  const MimoNetwork net = random_net(2, 3, 4, WeightMode::Shared);
  const std::vector<WaveletNode> k1(2, WaveletNode(BetaParams(2, 2, -1, 1), 1, 0.5, 0.0));
  const std::vector<WaveletNode> k2(3, WaveletNode(BetaParams(2, 2, -1, 1), 1, 0.2, 0.5));
  const MimoNetwork grown = grow_hidden_layer(grow_hidden_layer(net, k1, 0.3, 1), k2, 0.3, 2);
  ASSERT_EQ(grown.n_w(), 9u);
  EXPECT_EQ(grown.weight_mode(), WeightMode::Shared);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(grown.weights()(j, i), net.weights()(j, i));
  EXPECT_THROW(grow_hidden_layer(net, {}, 0.1, 0), ValidationError);
}

TEST(ChannelScalerTest, FitMapsRangeOntoUnitInterval) {
  const std::vector<std::vector<double>> examples = {{0.0, 5.0, 2.0}, {10.0, -5.0, 2.0}, {4.0, 0.0, 2.0}};
  const ChannelScaler scaler = ChannelScaler::fit(examples);
  EXPECT_EQ(scaler.apply(examples[0]), (std::vector<double>{-1.0, 1.0, 0.0}));
  EXPECT_EQ(scaler.apply(examples[1]), (std::vector<double>{1.0, -1.0, 0.0}));
  EXPECT_NEAR(scaler.apply(examples[2])[0], -0.2, 1e-15);
  const auto id = ChannelScaler::identity(3).apply(examples[2]);
  EXPECT_EQ(id, examples[2]);
}

TEST(WeightModeTest, StringRoundTrip) {
  for (auto m : {WeightMode::Shared, WeightMode::Matrix}) EXPECT_EQ(weight_mode_from_string(to_string(m)), m);
  EXPECT_THROW(weight_mode_from_string("diagonal"), ValidationError);
}

}  // namespace
}  // namespace mimown
