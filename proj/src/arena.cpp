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

#include "qttt/arena.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qttt::arena {

double expected_score(double rating_a, double rating_b) {
  return 1.0 / (std::pow(10.0, (rating_b - rating_a) / 400.0) + 1.0);
}

std::string to_string(EloForm f) { return f == EloForm::Counts ? "counts" : "mean"; }

EloForm parse_elo_form(const std::string& s) {
  if (s == "counts") return EloForm::Counts;
  if (s == "mean") return EloForm::Mean;
  throw std::invalid_argument("unknown elo form '" + s + "'");
}

double update_rating(double rating_a, const BlockResult& block, double w_ab, double k,
                     EloForm form) {
  if (block.decisive() == 0) return rating_a;
  if (form == EloForm::Mean) {
    return rating_a + k * (static_cast<double>(block.wins_a) / block.decisive() - w_ab);
  }
  return rating_a + k * (block.wins_a - block.decisive() * w_ab);
}

void RatingTable::add(const std::string& id) {
  if (contains(id)) throw std::invalid_argument("duplicate engine id '" + id + "'");
  order_.push_back(id);
  entries_.emplace(id, RatingEntry{});
}

const RatingEntry& RatingTable::entry(const std::string& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw std::out_of_range("unknown engine id '" + id + "'");
  return it->second;
}

RatingEntry& RatingTable::mutable_entry(const std::string& id) {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw std::out_of_range("unknown engine id '" + id + "'");
  return it->second;
}

double RatingTable::rating(const std::string& id) const { return entry(id).rating; }

void RatingTable::apply_block(const std::string& a, const std::string& b,
                              const BlockResult& block) {
  RatingEntry& ea = mutable_entry(a);
  RatingEntry& eb = mutable_entry(b);
  const double ra = ea.rating;
  const double rb = eb.rating;
  const double w_ab = expected_score(ra, rb);
  const double w_ba = expected_score(rb, ra);
  ea.rating = update_rating(ra, block, w_ab, k_, form_);
  eb.rating = update_rating(rb, block.swapped(), w_ba, k_, form_);
  ea.games += block.games();
  eb.games += block.games();
  ea.history.push_back({ea.games, ea.rating});
  eb.history.push_back({eb.games, eb.rating});
}

void RatingTable::write_history_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "engine_id,games_played,rating\n";
  for (const auto& id : order_) {
    for (const auto& s : entry(id).history) out << id << ',' << s.games << ',' << s.rating << '\n';
  }
  out.precision(old);
}

void RatingTable::write_final_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "engine_id,games_played,rating\n";
  for (const auto& id : order_) {
    const auto& e = entry(id);
    out << id << ',' << e.games << ',' << e.rating << '\n';
  }
  out.precision(old);
}

Policy greedy_policy(const engines::Engine& engine) {
  return [&engine](const game::Board& b, Rng& rng) {
    return engines::select_move(engine, b, 0.0, rng);
  };
}

Policy random_policy() {
  return [](const game::Board& b, Rng& rng) {
    const auto moves = game::legal_moves(b);
    if (moves.empty()) throw NoLegalMoves("no legal moves");
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    return moves[pick(rng)];
  };
}

nlohmann::json to_json(const GameRecord& r) {
  return {{"pair", {r.a, r.b}},
          {"block", r.block},
          {"game", r.game},
          {"seat", std::string(1, game::to_char(r.a_seat))},
          {"moves", r.moves},
          {"result", game::to_string(r.result)}};
}

GameRecord game_record_from_json(const nlohmann::json& j) {
  GameRecord r;
  const auto pair = j.at("pair");
  r.a = pair.at(0).get<std::string>();
  r.b = pair.at(1).get<std::string>();
  r.block = j.at("block").get<long long>();
  r.game = j.at("game").get<int>();
  const std::string seat = j.at("seat").get<std::string>();
  if (seat != "O" && seat != "X") throw std::invalid_argument("bad seat '" + seat + "'");
  r.a_seat = seat == "O" ? game::Player::O : game::Player::X;
  r.moves = j.at("moves").get<std::vector<int>>();
  const std::string res = j.at("result").get<std::string>();
  if (res == "o_wins") {
    r.result = game::Outcome::OWins;
  } else if (res == "x_wins") {
    r.result = game::Outcome::XWins;
  } else if (res == "draw") {
    r.result = game::Outcome::Draw;
  } else {
    throw std::invalid_argument("bad result '" + res + "'");
  }
  return r;
}

void GameLog::write_ndjson(std::ostream& out) const {
  for (const auto& r : records_) out << to_json(r).dump() << '\n';
}

GameLog GameLog::read_ndjson(std::istream& in) {
  GameLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.add(game_record_from_json(nlohmann::json::parse(line)));
  }
  return log;
}

void MatchConfig::validate() const {
  if (block_games <= 0) throw std::invalid_argument("block_games must be positive");
  if (games_per_pair <= 0 || games_per_pair % block_games != 0) {
    throw std::invalid_argument("games_per_pair must be a positive multiple of block_games");
  }
  if (!(k > 0.0)) throw std::invalid_argument("K must be positive");
}

GameRecord play_game(const Competitor& a, const Competitor& b, game::Player a_seat, Rng& rng) {
  GameRecord rec;
  rec.a = a.id;
  rec.b = b.id;
  rec.a_seat = a_seat;
  game::Board board = game::Board::empty();
  while (game::outcome(board) == game::Outcome::Ongoing) {
    const Competitor& mover = board.to_move == a_seat ? a : b;
    const int move = mover.policy(board, rng);
    board = game::apply_move(board, move);
    rec.moves.push_back(move);
  }
  rec.result = game::outcome(board);
  return rec;
}

namespace {

void tally(BlockResult& block, const GameRecord& r) {
  const int s = game::score_for(r.result, r.a_seat);
  if (s > 0) {
    ++block.wins_a;
  } else if (s < 0) {
    ++block.wins_b;
  } else {
    ++block.draws;
  }
}

// Stream for one block, independent of scheduling elsewhere.
Rng block_rng(std::uint64_t seed, long long block) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(block) + 1));
}

}  // namespace

BlockResult play_block(const Competitor& a, const Competitor& b, int games, long long block_index,
                       Rng& rng, GameLog* log) {
  BlockResult result;
  for (int g = 0; g < games; ++g) {
    GameRecord rec = play_game(a, b, g % 2 == 0 ? game::Player::O : game::Player::X, rng);
    rec.block = block_index;
    rec.game = g;
    tally(result, rec);
    if (log) log->add(std::move(rec));
  }
  return result;
}

RatingTable round_robin(const std::vector<Competitor>& competitors, const MatchConfig& config,
                        GameLog* log) {
  config.validate();
  if (competitors.size() < 2) throw std::invalid_argument("round robin needs at least 2 engines");
  RatingTable table(config.k, config.form);
  for (const auto& c : competitors) table.add(c.id);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < competitors.size(); ++i) {
    for (std::size_t j = i + 1; j < competitors.size(); ++j) pairs.emplace_back(i, j);
  }
  Rng shuffle(derive_seed(config.seed, 0));
  std::shuffle(pairs.begin(), pairs.end(), shuffle);

  long long block = 0;
  const int blocks_per_pair = config.games_per_pair / config.block_games;
  for (const auto& [i, j] : pairs) {
    for (int k = 0; k < blocks_per_pair; ++k, ++block) {
      Rng rng = block_rng(config.seed, block);
      const BlockResult r =
          play_block(competitors[i], competitors[j], config.block_games, block, rng, log);
      table.apply_block(competitors[i].id, competitors[j].id, r);
    }
  }
  return table;
}

VsRandomResult evaluate_vs_random(const Competitor& engine, const MatchConfig& config,
                                  GameLog* log) {
  config.validate();
  if (engine.id == kRandomId) throw std::invalid_argument("engine id clashes with the random side");
  VsRandomResult out{RatingTable(config.k, config.form), {}, {}};
  out.table.add(engine.id);
  out.table.add(kRandomId);
  const Competitor random{kRandomId, random_policy()};
  const long long blocks = config.games_per_pair / config.block_games;
  for (long long block = 0; block < blocks; ++block) {
    Rng rng = block_rng(config.seed, block);
    const BlockResult r = play_block(engine, random, config.block_games, block, rng, log);
    out.table.apply_block(engine.id, kRandomId, r);
    out.trace.push_back(out.table.rating(engine.id));
    out.totals.wins_a += r.wins_a;
    out.totals.wins_b += r.wins_b;
    out.totals.draws += r.draws;
  }
  return out;
}

RatingTable replay_ratings(const GameLog& log, double k, EloForm form) {
  RatingTable table(k, form);
  const auto& recs = log.records();
  std::size_t i = 0;
  while (i < recs.size()) {
    const GameRecord& first = recs[i];
    BlockResult block;
    std::size_t j = i;
    for (; j < recs.size() && recs[j].block == first.block; ++j) {
      if (recs[j].a != first.a || recs[j].b != first.b) {
        throw std::invalid_argument("game log mixes pairs within block " +
                                    std::to_string(first.block));
      }
      tally(block, recs[j]);
    }
    if (!table.contains(first.a)) table.add(first.a);
    if (!table.contains(first.b)) table.add(first.b);
    table.apply_block(first.a, first.b, block);
    i = j;
  }
  return table;
}

}  // namespace qttt::arena
