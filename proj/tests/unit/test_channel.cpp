// Copyright 2026 The qttt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qttt/channel.hpp"

namespace qttt::channel {
namespace {

using circuits::AnsatzKind;
using circuits::EmbeddingKind;
using engines::Engine;
using engines::EngineSpec;
using engines::OutputMethod;

EngineSpec est8(EmbeddingKind e = EmbeddingKind::HEE, std::uint64_t seed = 1) {
  return EngineSpec::hybrid(OutputMethod::Estimator, 8, e, AnsatzKind::RealAmplitudes, seed);
}

std::vector<game::Board> sample_boards() {
  std::vector<game::Board> out;
  for (const char* s : {"....O....X", ".........O", "O........X", "OX.......O", "O.X.X...OO",
                        "XO..O....X"}) {
    out.push_back(game::Board::from_string(s));
  }
  return out;
}

TEST(Sigma, Values) {
  EXPECT_EQ(noise_sigma(0.0), 0.0);
  EXPECT_EQ(noise_sigma(100.0), 99.0);
  EXPECT_EQ(noise_sigma(10.0), std::pow(10.0, 0.2) - 1.0);
  EXPECT_NEAR(noise_sigma(10.0), 0.5849, 1e-4);
  EXPECT_EQ(noise_sigma(50.0, 0.4), 99.0);
  EXPECT_THROW(noise_sigma(-1.0), std::invalid_argument);
}

TEST(Sigma, IncreasingAndConvex) {
  double prev = noise_sigma(0.0), prev_step = 0.0;
  for (double d = 0.5; d <= 120.0; d += 0.5) {
    const double s = noise_sigma(d);
    ASSERT_GT(s, prev);
    ASSERT_GE(s - prev, prev_step);
    prev_step = s - prev;
    prev = s;
  }
}

TEST(Channel, ModelTwoHasHalfTheNoiseGates) {
  const Engine e(est8());
  for (double d : {0.0, 1.0, 100.0}) {
    const Engine m1 = wrap_with_channel(e, {1, d}, 3);
    const Engine m2 = wrap_with_channel(e, {2, d}, 3);
    EXPECT_EQ(m1.noise_gate_count(), 2 * m2.noise_gate_count());
    EXPECT_EQ(m2.noise_gate_count(), 3 * 8);
    const auto base = e.quantum_circuit()->gates.size();
    EXPECT_EQ(m1.quantum_circuit()->gates.size() - base, 2 * (m2.quantum_circuit()->gates.size() - base));
  }
  EXPECT_EQ(noise_insertion({1, 5.0}).layer_count(), 2);
  EXPECT_EQ(noise_insertion({2, 5.0}).layer_count(), 1);
}

TEST(Channel, ZeroDistanceIsIdentity) {
  for (auto emb : {EmbeddingKind::ZFeatureMap, EmbeddingKind::ZZFeatureMap, EmbeddingKind::TPE}) {
    const Engine e(est8(emb));
    for (int model : {1, 2}) {
      const Engine w = wrap_with_channel(e, {model, 0.0}, 11);
      for (const auto& b : sample_boards()) EXPECT_EQ(w.evaluate(b), e.evaluate(b));
    }
  }
}

TEST(Channel, NoisyOutputsReproducePerSeed) {
  const Engine e(est8());
  const Engine a = wrap_with_channel(e, {1, 10.0}, 5);
  const Engine b = wrap_with_channel(e, {1, 10.0}, 5);
  const auto board = game::Board::from_string("O...X....O");
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.evaluate(board), b.evaluate(board));
  EXPECT_NE(a.evaluate(board), e.evaluate(board));
}

TEST(Channel, RejectsClassicalEnginesAndBadConfigs) {
  const Engine c(EngineSpec::classical(engines::ClassicalSize::Weaker));
  EXPECT_THROW(wrap_with_channel(c, {1, 1.0}, 0), NoQuantumLayer);
  EXPECT_THROW((ChannelConfig{3, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{1, -2.0}).validate(), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{1, 1.0, 0.0}).validate(), std::invalid_argument);
  EXPECT_EQ(parse_pattern("b"), Pattern::B);
  EXPECT_THROW(parse_pattern("D"), std::invalid_argument);
}

rl::TrainConfig short_training() {
  rl::TrainConfig t;
  t.episodes = 30;
  t.seed = 4;
  return t;
}

arena::MatchConfig short_match() {
  arena::MatchConfig m;
  m.games_per_pair = 500;
  m.seed = 6;
  return m;
}

TEST(Patterns, PatternAIsThePlainPipeline) {
  const auto res = run_pattern_experiment(est8(), {1, 100.0, kDefaultAttenuation, Pattern::A},
                                          short_training(), short_match(), 7);
  Engine e(est8());
  rl::train(e, short_training());
  const auto plain = arena::evaluate_vs_random({e.spec().key(), arena::greedy_policy(e)}, short_match());
  EXPECT_EQ(res.trace, plain.trace);
  EXPECT_EQ(res.final_rating, plain.final_rating());
}

TEST(Patterns, PatternBAtZeroDistanceEqualsPatternA) {
  for (int model : {1, 2}) {
    const auto a = run_pattern_experiment(est8(), {model, 0.0, kDefaultAttenuation, Pattern::A},
                                          short_training(), short_match(), 7);
    const auto b = run_pattern_experiment(est8(), {model, 0.0, kDefaultAttenuation, Pattern::B},
                                          short_training(), short_match(), 7);
    const auto c = run_pattern_experiment(est8(), {model, 0.0, kDefaultAttenuation, Pattern::C},
                                          short_training(), short_match(), 7);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.trace, c.trace);
  }
}

TEST(Sweep, SigmaPointwiseAndZeroDistanceIsNoiseless) {
  const Engine e(est8());
  const std::vector<double> ds{0.0, 0.01, 1.0, 10.0};
  const auto pts = distance_sweep(e, 2, ds, short_match(), 3);
  ASSERT_EQ(pts.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(pts[i].sigma, noise_sigma(ds[i]));
    EXPECT_EQ(pts[i].pattern, Pattern::B);
    EXPECT_EQ(pts[i].model, 2);
  }
  const auto plain = arena::evaluate_vs_random({e.spec().key(), arena::greedy_policy(e)}, short_match());
  EXPECT_EQ(pts[0].final_rating, plain.final_rating());
  std::ostringstream out;
  write_sweep_csv(out, pts);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "model,pattern,distance_km,sigma,final_rating,seed");
}

TEST(Sweep, LogDistances) {
  const auto d = log_distances(0.01, 10.0, 4);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d.front(), 0.01);
  EXPECT_EQ(d.back(), 10.0);
  EXPECT_NEAR(d[1], 0.1, 1e-12);
  EXPECT_NEAR(d[2], 1.0, 1e-12);
  EXPECT_THROW(log_distances(0.0, 1.0, 3), std::invalid_argument);
}

TEST(MutualInformation, Examples) {
  std::vector<int> x, y, z;
  for (int i = 0; i < 4000; ++i) {
    x.push_back(i % 4);
    y.push_back(i % 4);
    z.push_back((i / 4) % 2);
  }
  EXPECT_NEAR(mutual_information(x, y), 2.0, 1e-9);
  EXPECT_NEAR(mutual_information(x, z), 0.0, 1e-9);
  EXPECT_THROW(mutual_information(x, std::vector<int>(3)), ShapeMismatch);
}

// Board index vs two quantum-layer outputs, each binned into quarters of
// [-1, 1].
double board_output_information(const Engine& e, int repeats) {
  const auto boards = sample_boards();
  const auto bin = [](double v) { return std::clamp(static_cast<int>(std::floor((v + 1.0) * 2.0)), 0, 3); };
  std::vector<int> xs, ys;
  for (int r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < boards.size(); ++i) {
      xs.push_back(static_cast<int>(i));
      const auto q = e.evaluate(boards[i]);
      ys.push_back(bin(q[0]) * 4 + bin(q[4]));
    }
  }
  return mutual_information(xs, ys);
}

TEST(MutualInformation, SaturatesAtLongDistance) {
  Engine e(EngineSpec::qnn(EmbeddingKind::TPE, AnsatzKind::RealAmplitudes, 2));
  for (auto block : e.parameter_blocks()) std::fill(block.begin(), block.end(), 0.0);
  EXPECT_GT(board_output_information(e, 20), 0.5);
  // Single-shot readout: the outcome law is linear in the state, so it sees
  // only the noise-averaged (fully mixed) state.
  for (int model : {1, 2}) {
    Engine far = wrap_with_channel(e, {model, 100.0}, 9);
    far.set_measurement({false, 1});
    EXPECT_LT(board_output_information(far, 2000), 0.02) << "model " << model;
    Engine near = wrap_with_channel(e, {model, 0.0}, 9);
    near.set_measurement({false, 1});
    EXPECT_GT(board_output_information(near, 2000), 0.05) << "model " << model;
  }
}

}  // namespace
}  // namespace qttt::channel
