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

#include <map>
#include <set>

#include "engine_table.hpp"
#include "finite_diff.hpp"
#include "qttt/checkpoint.hpp"
#include "qttt/engine.hpp"

namespace qttt::engines {
namespace {

using circuits::AnsatzKind;
using circuits::EmbeddingKind;

TEST(Specs, CensusOf54) {
  const auto specs = all_engine_specs();
  ASSERT_EQ(specs.size(), 54u);
  std::map<Family, int> by_family;
  std::set<std::string> keys;
  for (const auto& s : specs) {
    ++by_family[s.family];
    keys.insert(s.key());
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(EngineSpec::parse(s.key()), s);
  }
  EXPECT_EQ(keys.size(), 54u);
  EXPECT_EQ(by_family[Family::Classical], 2);
  EXPECT_EQ(by_family[Family::QuantumOnly], 12);
  EXPECT_EQ(by_family[Family::Hybrid], 40);
}

TEST(Specs, RejectsUnsupportedCombinations) {
  for (const char* bad : {"hnn-smp-8-tpe-qcnn", "hnn-est-9-tpe-realamplitudes", "qnn-8-tpe-realamplitudes",
                          "qcnn-9-hee", "ccnn-medium", "hnn-xyz-8-tpe-realamplitudes", ""}) {
    EXPECT_THROW(EngineSpec::parse(bad), InvalidSpec) << bad;
  }
}

TEST(Specs, ParameterCountsMatchReferenceTable) {
  for (const auto& row : reference::kEngineTable) {
    const Engine e(EngineSpec::parse(row.key));
    EXPECT_EQ(static_cast<long>(e.quantum_param_count()), row.quantum) << row.key;
    if (row.key.starts_with(reference::kClassicalCountOutlier)) {
      EXPECT_EQ(e.classical_param_count(), 160u + 65536u * 9u + 9u) << row.key;
    } else {
      EXPECT_EQ(static_cast<long>(e.classical_param_count()), row.classical) << row.key;
    }
  }
}

TEST(Engine, OutputsNineFiniteValues) {
  Rng rng(3);
  for (const auto& s : all_engine_specs(5)) {
    if (s.qubits > 16) continue;  // 18-qubit rows are covered by the acceptance suite
    const Engine e(s);
    const auto q = e.evaluate(game::Board::from_string("O...X....O"));
    for (double v : q) EXPECT_TRUE(std::isfinite(v)) << s.key();
    EXPECT_EQ(q.size(), 9u);
  }
}

TEST(Engine, ZeroParameterQnnReadsAllOnes) {
  Engine e(EngineSpec::qnn(EmbeddingKind::TPE, AnsatzKind::RealAmplitudes));
  for (auto block : e.parameter_blocks()) std::fill(block.begin(), block.end(), 0.0);
  for (double v : e.evaluate(game::Board::empty())) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Engine, InitIsDeterministicPerSeed) {
  const Engine a(EngineSpec::hybrid(OutputMethod::Estimator, 8, EmbeddingKind::HEE,
                                    AnsatzKind::RealAmplitudes, 7));
  const Engine b(a.spec());
  const Engine c(EngineSpec::hybrid(OutputMethod::Estimator, 8, EmbeddingKind::HEE,
                                    AnsatzKind::RealAmplitudes, 8));
  const auto board = game::Board::from_string("X...O...OX");
  EXPECT_EQ(a.evaluate(board), b.evaluate(board));
  EXPECT_NE(a.evaluate(board), c.evaluate(board));
}

TEST(SelectMove, GreedyMasksOccupiedCells) {
  const double v[9] = {9, 8, 7, 6, 5, 4, 3, 2, 1};
  EXPECT_EQ(argmax_legal(v, game::Board::from_string("OX.......O")), 2);
  const double ties[9] = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  EXPECT_EQ(argmax_legal(ties, game::Board::from_string("O........X")), 1);
  const Engine e(EngineSpec::classical(ClassicalSize::Weaker, 1));
  Rng rng(4);
  const auto b = game::Board::from_string("OXO.X.O..X");
  for (double eps : {0.0, 0.5, 1.0}) {
    for (int i = 0; i < 200; ++i) {
      const int m = select_move(e, b, eps, rng);
      ASSERT_EQ(b.cells[m], game::Cell::Empty);
    }
  }
  EXPECT_THROW(select_move(e, game::Board::from_string("OXOXOXXOXO"), 0.0, rng), NoLegalMoves);
}

// d/dw of sum_k g_k * out_k by central differences on a sample of weights.
void check_backward(Engine& e, const game::Board& board, int samples, double tol) {
  Rng rng(17);
  std::array<double, 9> g{};
  for (auto& v : g) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  ForwardCache cache;
  e.forward(board, cache);
  const auto grads = e.backward(cache, g);
  auto blocks = e.parameter_blocks();
  ASSERT_EQ(grads.size(), blocks.size());
  const auto f = [&] {
    const auto out = e.evaluate(board);
    double s = 0;
    for (int k = 0; k < 9; ++k) s += g[k] * out[k];
    return s;
  };
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    ASSERT_EQ(grads[b].size(), blocks[b].size());
    std::uniform_int_distribution<std::size_t> pick(0, blocks[b].size() - 1);
    const int n = std::min<int>(samples, static_cast<int>(blocks[b].size()));
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = blocks[b].size() <= static_cast<std::size_t>(samples) ? i : pick(rng);
      const double fd = oracle::central_diff(blocks[b][idx], f, 1e-5);
      ASSERT_LT(oracle::rel_err(grads[b][idx], fd, 1e-4), 1e-3)
          << e.spec().key() << " block " << b << " index " << idx;
    }
  }
}

TEST(EngineBackward, MatchesFiniteDifferences) {
  const auto board = game::Board::from_string("O.X.O...XX");
  for (const char* key : {"ccnn-weaker", "ccnn-stronger", "qnn-9-zzfeaturemap-efficientsu2",
                          "qnn-9-hee-realamplitudes", "hnn-est-8-hee-realamplitudes",
                          "hnn-est-8-zfeaturemap-qcnn", "hnn-est-8-zzfeaturemap-efficientsu2",
                          "hnn-smp-8-tpe-realamplitudes"}) {
    Engine e(EngineSpec::parse(key, 21));
    check_backward(e, board, 12, 1e-3);
  }
}

TEST(Checkpoint, RoundTripIsExact) {
  for (const char* key : {"ccnn-weaker", "hnn-est-8-hee-qcnn", "qnn-9-tpe-efficientsu2"}) {
    const Engine e(EngineSpec::parse(key, 99));
    const auto doc = checkpoint_save(e, {{"episodes", 5}});
    const Engine back = checkpoint_load(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back.spec(), e.spec());
    const auto a = e.parameter_blocks();
    const auto b = back.parameter_blocks();
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(std::equal(a[i].begin(), a[i].end(), b[i].begin(), b[i].end())) << key;
    }
    EXPECT_EQ(doc["training"]["episodes"], 5);
    EXPECT_EQ(doc["architecture"]["quantum_params"], e.quantum_param_count());
  }
}

TEST(Checkpoint, Errors) {
  const Engine e(EngineSpec::classical(ClassicalSize::Weaker, 2));
  auto doc = checkpoint_save(e);
  EXPECT_THROW(checkpoint_load(doc, EngineSpec::classical(ClassicalSize::Stronger)), SpecMismatch);
  auto short_weights = doc;
  short_weights["weights"][0].erase(0);
  EXPECT_THROW(checkpoint_load(short_weights), CorruptCheckpoint);
  auto wrong_format = doc;
  wrong_format["format"] = "other";
  EXPECT_THROW(checkpoint_load(wrong_format), CorruptCheckpoint);
  auto bad_spec = doc;
  bad_spec["spec"] = "ccnn-giant";
  EXPECT_THROW(checkpoint_load(bad_spec), CorruptCheckpoint);
  auto missing = doc;
  missing.erase("weights");
  EXPECT_THROW(checkpoint_load(missing), CorruptCheckpoint);
  EXPECT_THROW(load_checkpoint_file("/nonexistent/x.json"), IoError);
}

TEST(Noise, ZeroSigmaIsBitExact) {
  const Engine clean(EngineSpec::hybrid(OutputMethod::Estimator, 8, EmbeddingKind::TPE,
                                        AnsatzKind::RealAmplitudes, 3));
  Engine noisy = clean;
  noisy.set_noise(NoiseInsertion{0.0, true, true}, 5);
  for (const char* s : {"....O....X", "OX.......O", "OXOX.....O"}) {
    const auto b = game::Board::from_string(s);
    EXPECT_EQ(clean.evaluate(b), noisy.evaluate(b));
  }
}

TEST(Noise, GateCountsAndReseeding) {
  Engine e(EngineSpec::hybrid(OutputMethod::Estimator, 8, EmbeddingKind::HEE,
                              AnsatzKind::RealAmplitudes, 3));
  const auto base = e.quantum_circuit()->gates.size();
  e.set_noise(NoiseInsertion{0.5, true, true}, 1);
  EXPECT_EQ(e.noise_gate_count(), 48);
  EXPECT_EQ(e.quantum_circuit()->gates.size(), base + 48);
  const auto b = game::Board::from_string("O...X....O");
  const auto first = e.evaluate(b);
  EXPECT_NE(first, e.evaluate(b));
  e.reseed_stochastic(1);
  EXPECT_EQ(first, e.evaluate(b));
  e.set_noise(NoiseInsertion{0.5, true, false}, 1);
  EXPECT_EQ(e.noise_gate_count(), 24);
  EXPECT_EQ(e.quantum_circuit()->gates.size(), base + 24);
  EXPECT_EQ(e.quantum_metrics(), Engine(e.spec()).quantum_metrics());
  e.set_noise(std::nullopt, 0);
  EXPECT_EQ(e.quantum_circuit()->gates.size(), base);
  Engine c(EngineSpec::classical(ClassicalSize::Weaker));
  EXPECT_THROW(c.set_noise(NoiseInsertion{}, 0), NoQuantumLayer);
}

TEST(Measurement, ShotModeIsUnbiasedAndSeeded) {
  Engine e(EngineSpec::qnn(EmbeddingKind::HEE, AnsatzKind::RealAmplitudes, 4));
  const auto b = game::Board::from_string("O...X....O");
  const auto exact = e.evaluate(b);
  e.set_measurement({false, 4096});
  e.reseed_stochastic(10);
  const auto shots = e.evaluate(b);
  e.reseed_stochastic(10);
  EXPECT_EQ(shots, e.evaluate(b));
  for (int k = 0; k < 9; ++k) EXPECT_LT(std::abs(shots[k] - exact[k]), 5.0 * 2.0 / 64.0);
}

}  // namespace
}  // namespace qttt::engines
