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

// Elo ratings and the matches that feed them.
//
//   W_AB = 1 / (10^((R_B - R_A) / 400) + 1)
//   R'_A = R_A + K * (N_wins - N_games * W_AB)
//
// N_games counts decisive games only. Ratings move once per block of games,
// with W frozen at the ratings held when the block started.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qttt/common.hpp"
#include "qttt/engine.hpp"
#include "qttt/game.hpp"

namespace qttt::arena {

inline constexpr double kInitialRating = 1500.0;
inline constexpr double kDefaultK = 32.0;
inline constexpr int kBlockGames = 100;

double expected_score(double rating_a, double rating_b);

struct BlockResult {
  int wins_a = 0;
  int wins_b = 0;
  int draws = 0;

  int games() const { return wins_a + wins_b + draws; }
  int decisive() const { return wins_a + wins_b; }
  BlockResult swapped() const { return {wins_b, wins_a, draws}; }
};

// Counts: K * (N_wins - N_games * W), the form above.
// Mean:   K * (N_wins / N_games - W), one game's worth of movement per block.
enum class EloForm { Counts, Mean };

std::string to_string(EloForm f);
// Throws std::invalid_argument.
EloForm parse_elo_form(const std::string& s);

// New rating of side A.
double update_rating(double rating_a, const BlockResult& block, double w_ab, double k = kDefaultK,
                     EloForm form = EloForm::Counts);

struct RatingSample {
  long long games = 0;  // games played by this engine when sampled
  double rating = kInitialRating;
};

struct RatingEntry {
  double rating = kInitialRating;
  long long games = 0;
  std::vector<RatingSample> history;  // one sample per finished block
};

class RatingTable {
 public:
  explicit RatingTable(double k = kDefaultK, EloForm form = EloForm::Counts)
      : k_(k), form_(form) {}

  void add(const std::string& id);
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  double rating(const std::string& id) const;
  const RatingEntry& entry(const std::string& id) const;
  const std::vector<std::string>& ids() const { return order_; }
  double k() const { return k_; }
  EloForm form() const { return form_; }

  // Updates both sides from their pre-block ratings and appends a history
  // sample to each.
  void apply_block(const std::string& a, const std::string& b, const BlockResult& block);

  // engine_id,games_played,rating
  void write_history_csv(std::ostream& out) const;
  // engine_id,games_played,rating with the current ratings only.
  void write_final_csv(std::ostream& out) const;

 private:
  RatingEntry& mutable_entry(const std::string& id);

  double k_;
  EloForm form_;
  std::vector<std::string> order_;
  std::map<std::string, RatingEntry> entries_;
};

// A move chooser for one side. The rng is the match stream, used by random
// movers and shot/noise-free engines alike.
using Policy = std::function<int(const game::Board&, Rng&)>;

Policy greedy_policy(const engines::Engine& engine);
Policy random_policy();

struct Competitor {
  std::string id;
  Policy policy;
};

struct GameRecord {
  std::string a;
  std::string b;
  long long block = 0;  // global block counter in schedule order
  int game = 0;         // index within the block
  game::Player a_seat = game::Player::O;
  std::vector<int> moves;
  game::Outcome result = game::Outcome::Ongoing;
};

nlohmann::json to_json(const GameRecord& r);
GameRecord game_record_from_json(const nlohmann::json& j);

class GameLog {
 public:
  void add(GameRecord r) { records_.push_back(std::move(r)); }
  const std::vector<GameRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void write_ndjson(std::ostream& out) const;
  static GameLog read_ndjson(std::istream& in);

 private:
  std::vector<GameRecord> records_;
};

struct MatchConfig {
  int games_per_pair = kBlockGames;
  int block_games = kBlockGames;
  double k = kDefaultK;
  EloForm form = EloForm::Counts;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

// Plays one game; `a` moves first when a_seat is O.
GameRecord play_game(const Competitor& a, const Competitor& b, game::Player a_seat, Rng& rng);

// `games` games with A taking O in games 0, 2, 4, ...
BlockResult play_block(const Competitor& a, const Competitor& b, int games, long long block_index,
                       Rng& rng, GameLog* log);

// Every unordered pair plays games_per_pair games in blocks of block_games,
// pairs visited in a seeded-shuffled order.
RatingTable round_robin(const std::vector<Competitor>& competitors, const MatchConfig& config,
                        GameLog* log = nullptr);

struct VsRandomResult {
  RatingTable table;
  std::vector<double> trace;  // engine rating after each block
  BlockResult totals;
  double final_rating() const { return trace.empty() ? kInitialRating : trace.back(); }
};

inline constexpr const char* kRandomId = "random";

// games_per_pair is the total number of games against the random mover,
// which is rated alongside.
VsRandomResult evaluate_vs_random(const Competitor& engine, const MatchConfig& config,
                                  GameLog* log = nullptr);

// Recomputes a rating table from a game log alone.
RatingTable replay_ratings(const GameLog& log, double k = kDefaultK,
                           EloForm form = EloForm::Counts);

}  // namespace qttt::arena
