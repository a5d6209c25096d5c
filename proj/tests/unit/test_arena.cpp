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
#include <set>
#include <sstream>

#include "minimax_oracle.hpp"
#include "qttt/arena.hpp"

namespace qttt::arena {
namespace {

// Independent form of the logistic expectation.
double logistic(double ra, double rb) { return 1.0 / (1.0 + std::exp((rb - ra) * std::log(10.0) / 400.0)); }

Policy perfect_policy() {
  return [](const game::Board& b, Rng&) { return game::optimal_moves(b).front(); };
}

Policy first_free_policy() {
  return [](const game::Board& b, Rng&) { return game::legal_moves(b).front(); };
}

TEST(Elo, ExpectedScoreExamples) {
  EXPECT_EQ(expected_score(1500, 1500), 0.5);
  EXPECT_NEAR(expected_score(1500, 1570), logistic(1500, 1570), 1e-12);
  EXPECT_NEAR(expected_score(1500, 1570), 0.400603, 1e-6);
  EXPECT_NEAR(1.0 - expected_score(1500, 1570), 0.6, 0.001);
  for (double d = -800; d <= 800; d += 10) {
    EXPECT_NEAR(expected_score(1500 + d, 1500) + expected_score(1500, 1500 + d), 1.0, 1e-15);
    EXPECT_LT(expected_score(1500 + d, 1500), expected_score(1500 + d + 1, 1500));
  }
}

TEST(Elo, UpdateExamples) {
  EXPECT_DOUBLE_EQ(update_rating(1500, {60, 40, 0}, 0.5, 32), 1820.0);
  EXPECT_EQ(update_rating(1500, {0, 0, 100}, 0.3, 32), 1500.0);
  EXPECT_DOUBLE_EQ(update_rating(1500, {60, 40, 0}, 0.5, 32, EloForm::Mean), 1503.2);
  EXPECT_EQ(parse_elo_form(to_string(EloForm::Mean)), EloForm::Mean);
  EXPECT_THROW(parse_elo_form("glicko"), std::invalid_argument);
}

TEST(Elo, ZeroSumAndDrawNeutralOnRandomBlocks) {
  Rng rng(1);
  std::uniform_real_distribution<double> r(800, 2200);
  std::uniform_int_distribution<int> split(0, 100);
  for (EloForm form : {EloForm::Counts, EloForm::Mean}) {
    for (int i = 0; i < 100000; ++i) {
      const double ra = r(rng), rb = r(rng);
      const int wa = split(rng), wb = std::uniform_int_distribution<int>(0, 100 - wa)(rng);
      const BlockResult block{wa, wb, 100 - wa - wb};
      const double da = update_rating(ra, block, expected_score(ra, rb), 32, form) - ra;
      const double db = update_rating(rb, block.swapped(), expected_score(rb, ra), 32, form) - rb;
      ASSERT_NEAR(da + db, 0.0, 1e-9);
      const BlockResult no_draws{wa, wb, 0};
      ASSERT_EQ(update_rating(ra, block, expected_score(ra, rb), 32, form),
                update_rating(ra, no_draws, expected_score(ra, rb), 32, form));
    }
  }
}

TEST(RatingTable, ApplyBlockUsesPreBlockRatings) {
  RatingTable t;
  t.add("a");
  t.add("b");
  t.apply_block("a", "b", {70, 10, 20});
  EXPECT_DOUBLE_EQ(t.rating("a"), 1500 + 32 * (70 - 80 * 0.5));
  EXPECT_DOUBLE_EQ(t.rating("b"), 1500 + 32 * (10 - 80 * 0.5));
  EXPECT_EQ(t.entry("a").history.size(), 1u);
  EXPECT_EQ(t.entry("a").history[0].games, 100);
  EXPECT_THROW(t.add("a"), std::invalid_argument);
  EXPECT_THROW(t.rating("zz"), std::out_of_range);
  std::ostringstream out;
  t.write_final_csv(out);
  EXPECT_EQ(out.str(), "engine_id,games_played,rating\na,100,2460\nb,100,540\n");
}

TEST(RoundRobin, ThreeEnginesGiveThreeBlocks) {
  const std::vector<Competitor> cs{{"perfect", perfect_policy()},
                                   {"first", first_free_policy()},
                                   {"random", random_policy()}};
  MatchConfig cfg;
  cfg.seed = 3;
  GameLog log;
  const RatingTable t = round_robin(cs, cfg, &log);
  EXPECT_EQ(log.size(), 300u);
  std::set<long long> blocks;
  for (const auto& r : log.records()) blocks.insert(r.block);
  EXPECT_EQ(blocks, (std::set<long long>{0, 1, 2}));
  double total = 0;
  for (const auto& id : t.ids()) {
    EXPECT_EQ(t.entry(id).games, 200);
    EXPECT_EQ(t.entry(id).history.size(), 2u);
    total += t.rating(id);
  }
  EXPECT_NEAR(total, 3 * kInitialRating, 1e-9);
  EXPECT_GT(t.rating("perfect"), t.rating("random"));
}

TEST(RoundRobin, SeatsAlternateWithinABlock) {
  MatchConfig cfg;
  GameLog log;
  round_robin({{"p", perfect_policy()}, {"r", random_policy()}}, cfg, &log);
  for (const auto& r : log.records()) {
    EXPECT_EQ(r.a_seat, r.game % 2 == 0 ? game::Player::O : game::Player::X);
    game::Board b = game::Board::empty();
    for (int m : r.moves) b = game::apply_move(b, m);
    EXPECT_EQ(game::outcome(b), r.result);
  }
}

TEST(RoundRobin, IdenticalPerfectPlayersStayFlat) {
  MatchConfig cfg;
  cfg.games_per_pair = 300;
  const RatingTable t = round_robin({{"a", perfect_policy()}, {"b", perfect_policy()}}, cfg);
  for (const auto& id : t.ids()) {
    for (const auto& s : t.entry(id).history) EXPECT_EQ(s.rating, kInitialRating);
  }
}

TEST(RoundRobin, ReplayFromLogIsBitExact) {
  const std::vector<Competitor> cs{{"perfect", perfect_policy()},
                                   {"first", first_free_policy()},
                                   {"r1", random_policy()},
                                   {"r2", random_policy()}};
  MatchConfig cfg;
  cfg.games_per_pair = 200;
  cfg.seed = 9;
  GameLog log;
  const RatingTable live = round_robin(cs, cfg, &log);
  std::stringstream nd;
  log.write_ndjson(nd);
  const GameLog back = GameLog::read_ndjson(nd);
  ASSERT_EQ(back.size(), log.size());
  const RatingTable replay = replay_ratings(back);
  for (const auto& id : live.ids()) {
    EXPECT_EQ(live.rating(id), replay.rating(id)) << id;
    EXPECT_EQ(live.entry(id).history.size(), replay.entry(id).history.size());
  }
  GameLog again;
  round_robin(cs, cfg, &again);
  std::stringstream nd2;
  again.write_ndjson(nd2);
  EXPECT_EQ(nd.str(), nd2.str());
}

TEST(VsRandom, PerfectPlayerRisesEveryBlock) {
  MatchConfig cfg;
  cfg.games_per_pair = 10000;
  cfg.seed = 4;
  const auto res = evaluate_vs_random({"perfect", perfect_policy()}, cfg);
  ASSERT_EQ(res.trace.size(), 100u);
  EXPECT_EQ(res.totals.wins_b, 0);
  double prev = kInitialRating;
  for (double r : res.trace) {
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_EQ(res.table.entry(kRandomId).history.size(), 100u);
  const auto again = evaluate_vs_random({"perfect", perfect_policy()}, cfg);
  EXPECT_EQ(res.trace, again.trace);
}

// Recount the decisive tallies from the persisted moves and recompute the
// ratings with the logistic written out independently.
TEST(VsRandom, UpdatesAgreeWithRecountedLog) {
  MatchConfig cfg;
  cfg.games_per_pair = 500;
  cfg.seed = 5;
  GameLog log;
  const auto res = evaluate_vs_random({"first", first_free_policy()}, cfg, &log);
  double ra = 1500, rr = 1500;
  for (long long b = 0; b < 5; ++b) {
    int wins = 0, losses = 0;
    for (const auto& g : log.records()) {
      if (g.block != b) continue;
      oracle::Pos p;
      for (int m : g.moves) {
        p.c[m] = p.turn;
        p.turn = p.turn == 'O' ? 'X' : 'O';
      }
      const char w = oracle::winner(p);
      const char mine = g.a_seat == game::Player::O ? 'O' : 'X';
      if (w == mine) ++wins;
      if (w && w != mine) ++losses;
    }
    const double e = logistic(ra, rr);
    const double na = ra + 32 * (wins - (wins + losses) * e);
    const double nr = rr + 32 * (losses - (wins + losses) * (1 - e));
    ra = na;
    rr = nr;
    EXPECT_NEAR(res.trace[b], ra, 1e-9);
  }
  EXPECT_NEAR(res.table.rating(kRandomId), rr, 1e-9);
}

TEST(MatchConfig, Validation) {
  MatchConfig c;
  EXPECT_NO_THROW(c.validate());
  c.games_per_pair = 150;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.k = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(round_robin({{"a", random_policy()}}, MatchConfig{}), std::invalid_argument);
}

TEST(GameLog, RejectsMalformedRecords) {
  std::istringstream bad_seat(R"({"pair":["a","b"],"block":0,"game":0,"seat":"Z","moves":[],"result":"draw"})");
  EXPECT_THROW(GameLog::read_ndjson(bad_seat), std::invalid_argument);
  std::istringstream bad_result(R"({"pair":["a","b"],"block":0,"game":0,"seat":"O","moves":[],"result":"tie"})");
  EXPECT_THROW(GameLog::read_ndjson(bad_result), std::invalid_argument);
}

}  // namespace
}  // namespace qttt::arena
