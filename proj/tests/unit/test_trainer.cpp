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

#include <cmath>
#include <functional>
#include <sstream>

#include "minimax_oracle.hpp"
#include "qttt/trainer.hpp"

namespace qttt::rl {
namespace {

using engines::ClassicalSize;
using engines::Engine;
using engines::EngineSpec;

// Weaker CNN whose every output reads v on every board.
Engine constant_engine(double v) {
  Engine e(EngineSpec::classical(ClassicalSize::Weaker));
  auto blocks = e.parameter_blocks();
  for (auto b : blocks) std::fill(b.begin(), b.end(), 0.0);
  std::fill(blocks.back().begin(), blocks.back().end(), std::atanh(v));
  return e;
}

std::vector<std::vector<double>> snapshot(const Engine& e) {
  std::vector<std::vector<double>> out;
  for (auto b : e.parameter_blocks()) out.emplace_back(b.begin(), b.end());
  return out;
}

TEST(QTarget, Examples) {
  const Engine e = constant_engine(0.5);
  Transition win{game::Board::from_string("OO.XX....O"), 2, kWinReward, std::nullopt, game::Player::O};
  EXPECT_EQ(q_target(win, e, 0.9), 1.0);
  Transition draw = win;
  draw.reward = kDrawReward;
  EXPECT_EQ(q_target(draw, e, 0.9), 0.0);
  Transition mid{game::Board::empty(), 4, 0.0, game::Board::from_string("X...O....O"),
                 game::Player::O};
  EXPECT_NEAR(q_target(mid, e, 0.9), 0.45, 1e-12);
}

TEST(QTarget, MaxRunsOverLegalCellsOnly) {
  Engine e = constant_engine(0.0);
  auto bias = e.parameter_blocks().back();
  bias[0] = std::atanh(0.9);   // occupied below
  bias[5] = std::atanh(-0.2);
  for (int c : {1, 2, 3, 6, 7, 8}) bias[c] = std::atanh(-0.5);
  Transition t{game::Board::empty(), 0, 0.0, game::Board::from_string("O...X....O"),
               game::Player::O};
  EXPECT_NEAR(q_target(t, e, 1.0 / 2), -0.1, 1e-12);
}

TEST(SelfPlay, RandomGamesAreLegalWithTerminalRewards) {
  const Engine e(EngineSpec::classical(ClassicalSize::Weaker, 3));
  Rng rng(8);
  int draws = 0, decided = 0;
  for (int g = 0; g < 300; ++g) {
    const Episode ep = self_play_episode(e, 1.0, rng);
    ASSERT_GE(ep.moves.size(), 5u);
    ASSERT_LE(ep.moves.size(), 9u);
    ASSERT_NE(ep.result, game::Outcome::Ongoing);
    ASSERT_EQ(ep.o_seat.size() + ep.x_seat.size(), ep.moves.size());
    game::Board b = game::Board::empty();
    for (int m : ep.moves) b = game::apply_move(b, m);
    ASSERT_EQ(game::outcome(b), ep.result);
    for (const auto* seat : {&ep.o_seat, &ep.x_seat}) {
      for (std::size_t i = 0; i < seat->size(); ++i) {
        const Transition& t = (*seat)[i];
        ASSERT_EQ(t.state.to_move, t.perspective);
        ASSERT_EQ(t.state.cells[t.action], game::Cell::Empty);
        const bool last = i + 1 == seat->size();
        ASSERT_EQ(t.next.has_value(), !last);
        if (!last) {
          ASSERT_EQ(t.reward, 0.0);
          ASSERT_EQ(t.next->to_move, t.perspective);
          ASSERT_EQ(*t.next, (*seat)[i + 1].state);
        } else {
          const int s = game::score_for(ep.result, t.perspective);
          ASSERT_EQ(t.reward, static_cast<double>(s));
        }
      }
    }
    if (ep.result == game::Outcome::Draw) {
      ++draws;
      EXPECT_EQ(ep.o_seat.back().reward, 0.0);
      EXPECT_EQ(ep.x_seat.back().reward, 0.0);
    } else {
      ++decided;
      EXPECT_EQ(ep.o_seat.back().reward + ep.x_seat.back().reward, 0.0);
    }
    const auto chrono = ep.chronological();
    for (std::size_t i = 0; i < chrono.size(); ++i) ASSERT_EQ(chrono[i].action, ep.moves[i]);
  }
  EXPECT_GT(draws, 0);
  EXPECT_GT(decided, 0);
}

TEST(Gradient, OnlySelectedOutputContributes) {
  const Engine e(EngineSpec::classical(ClassicalSize::Weaker, 4));
  const Transition t{game::Board::from_string("O...X....O"), 6, 0.0, std::nullopt, game::Player::O};
  std::vector<std::vector<double>> grads;
  transition_gradient(e, t, 1.0, nn::HuberParams{}, grads);
  const auto& bias = grads.back();
  for (int k = 0; k < 9; ++k) {
    if (k == t.action) {
      EXPECT_NE(bias[k], 0.0);
    } else {
      EXPECT_EQ(bias[k], 0.0);
    }
  }
  engines::ForwardCache cache;
  const auto q = e.forward(t.state, cache);
  std::array<double, 9> g{};
  g[t.action] = nn::huber(q[t.action], 1.0, {}).grad;
  EXPECT_EQ(grads, e.backward(cache, g));
}

TEST(Train, ZeroEpisodesLeavesWeights) {
  Engine e(EngineSpec::classical(ClassicalSize::Weaker, 5));
  const auto before = snapshot(e);
  TrainConfig cfg;
  cfg.episodes = 0;
  EXPECT_TRUE(train(e, cfg).episodes.empty());
  EXPECT_EQ(snapshot(e), before);
}

TEST(Train, DeterministicPerSeed) {
  TrainConfig cfg;
  cfg.episodes = 40;
  cfg.seed = 12;
  for (const char* key : {"ccnn-weaker", "hnn-est-8-tpe-realamplitudes"}) {
    Engine a(EngineSpec::parse(key, 1)), b(EngineSpec::parse(key, 1));
    const auto la = train(a, cfg);
    const auto lb = train(b, cfg);
    EXPECT_EQ(snapshot(a), snapshot(b)) << key;
    EXPECT_NE(snapshot(a), snapshot(Engine(EngineSpec::parse(key, 1)))) << key;
    std::ostringstream ca, cb;
    la.write_csv(ca);
    lb.write_csv(cb);
    EXPECT_EQ(ca.str(), cb.str());
  }
}

TEST(Train, LogCsvAndEarlyStop) {
  Engine e(EngineSpec::classical(ClassicalSize::Weaker, 5));
  TrainConfig cfg;
  cfg.episodes = 10;
  const auto log = train(e, cfg, [](const EpisodeLog& l) { return l.episode < 6; });
  EXPECT_EQ(log.episodes.size(), 7u);
  std::ostringstream out;
  log.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "episode,epsilon,mean_loss,result_o,result_x");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const char o = line[line.size() - 3], x = line.back();
    EXPECT_TRUE((o == 'W' && x == 'L') || (o == 'L' && x == 'W') || (o == 'D' && x == 'D')) << line;
  }
  EXPECT_EQ(rows, 7);
}

TEST(Epsilon, NonIncreasingAndFloored) {
  const EpsilonSchedule s;
  double prev = 2.0;
  for (long long ep = 0; ep < 20000; ++ep) {
    const double e = s.at(ep);
    ASSERT_LE(e, prev);
    ASSERT_GE(e, s.min);
    prev = e;
  }
  EXPECT_EQ(s.at(0), 1.0);
  EXPECT_EQ(s.at(19999), 0.05);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.epsilon.min = 0.5;
  c.epsilon.start = 0.2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.epsilon.decay = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.episodes = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

// Every line where the opponent picks any value-preserving move.
bool never_loses_to_optimal(const TabularQ& q, game::Player seat) {
  std::function<bool(const game::Board&)> walk = [&](const game::Board& b) {
    const game::Outcome o = game::outcome(b);
    if (o != game::Outcome::Ongoing) return game::score_for(o, seat) >= 0;
    if (b.to_move == seat) return walk(game::apply_move(b, q.greedy(b)));
    oracle::Pos p;
    for (int i = 0; i < 9; ++i) p.c[i] = ".OX"[static_cast<int>(b.cells[i])];
    p.turn = b.to_move == game::Player::O ? 'O' : 'X';
    const int target = oracle::value(p);
    for (int m : game::legal_moves(b)) {
      oracle::Pos r = p;
      r.c[m] = p.turn;
      r.turn = p.turn == 'O' ? 'X' : 'O';
      if (oracle::value(r) == target && !walk(game::apply_move(b, m))) return false;
    }
    return true;
  };
  return walk(game::Board::empty());
}

TEST(TabularQ, ConvergesAgainstRandomAndOptimalPlay) {
  // Same start and floor as the network runs, stretched so that every
  // reachable position gets visited.
  TabularQ q;
  Rng rng(1);
  EpsilonSchedule schedule;
  schedule.decay = 0.99995;
  q.train(100000, 0.9, schedule, rng);
  EXPECT_LE(q.table_size(), 5478u);
  Rng eval(2);
  const double rate = non_loss_rate_vs_random([&](const game::Board& b) { return q.greedy(b); },
                                              10000, eval);
  EXPECT_GE(rate, 0.99);
  EXPECT_TRUE(never_loses_to_optimal(q, game::Player::O));
  EXPECT_TRUE(never_loses_to_optimal(q, game::Player::X));
}

}  // namespace
}  // namespace qttt::rl
