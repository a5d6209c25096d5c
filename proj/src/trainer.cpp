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

#include "qttt/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qttt::rl {
namespace {

struct Ply {
  game::Board state;
  int action;
};

// Plays one game with `choose` moving for both seats and converts the plies
// into per-seat transitions.
template <class Choose>
Episode play_episode(Choose&& choose) {
  std::vector<Ply> plies;
  game::Board board = game::Board::empty();
  while (game::outcome(board) == game::Outcome::Ongoing) {
    const int a = choose(board);
    plies.push_back({board, a});
    board = game::apply_move(board, a);
  }
  Episode ep;
  ep.result = game::outcome(board);
  for (std::size_t i = 0; i < plies.size(); ++i) {
    Transition t;
    t.state = plies[i].state;
    t.action = plies[i].action;
    t.perspective = plies[i].state.to_move;
    if (i + 2 < plies.size()) {
      t.next = plies[i + 2].state;
      t.reward = 0.0;
    } else {
      const int s = game::score_for(ep.result, t.perspective);
      t.reward = s > 0 ? kWinReward : s < 0 ? kLossReward : kDrawReward;
    }
    ep.moves.push_back(t.action);
    (t.perspective == game::Player::O ? ep.o_seat : ep.x_seat).push_back(std::move(t));
  }
  return ep;
}

double max_legal(const std::array<double, game::kNumCells>& q, const game::Board& b) {
  double best = -std::numeric_limits<double>::infinity();
  for (int c : game::legal_moves(b)) best = std::max(best, q[c]);
  return best;
}

char seat_result(game::Outcome o, game::Player p) {
  const int s = game::score_for(o, p);
  return s > 0 ? 'W' : s < 0 ? 'L' : 'D';
}

}  // namespace

std::vector<Transition> Episode::chronological() const {
  std::vector<Transition> all;
  all.reserve(o_seat.size() + x_seat.size());
  for (std::size_t i = 0; i < std::max(o_seat.size(), x_seat.size()); ++i) {
    if (i < o_seat.size()) all.push_back(o_seat[i]);
    if (i < x_seat.size()) all.push_back(x_seat[i]);
  }
  return all;
}

double EpsilonSchedule::at(long long episode) const {
  return std::max(min, start * std::pow(decay, static_cast<double>(episode)));
}

void TrainConfig::validate() const {
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(epsilon.start >= epsilon.min && epsilon.min >= 0.0 && epsilon.start <= 1.0)) {
    throw std::invalid_argument("epsilon schedule needs 1 >= start >= min >= 0");
  }
  if (!(epsilon.decay > 0.0 && epsilon.decay <= 1.0)) {
    throw std::invalid_argument("epsilon decay must lie in (0, 1]");
  }
  if (!(optimizer.step_size > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!(huber.delta > 0.0)) throw std::invalid_argument("huber delta must be positive");
}

void TrainingLog::write_csv(std::ostream& out) const {
  out << "episode,epsilon,mean_loss,result_o,result_x\n";
  const auto old_precision = out.precision(17);
  for (const auto& e : episodes) {
    out << e.episode << ',' << e.epsilon << ',' << e.mean_loss << ','
        << seat_result(e.result, game::Player::O) << ',' << seat_result(e.result, game::Player::X)
        << '\n';
  }
  out.precision(old_precision);
}

double q_target(const Transition& t, const engines::Engine& engine, double gamma) {
  if (!t.next) return t.reward;
  return t.reward + gamma * max_legal(engine.evaluate(*t.next), *t.next);
}

Episode self_play_episode(const engines::Engine& engine, double epsilon, Rng& rng) {
  return play_episode(
      [&](const game::Board& b) { return engines::select_move(engine, b, epsilon, rng); });
}

double transition_gradient(const engines::Engine& engine, const Transition& t, double target,
                           const nn::HuberParams& huber,
                           std::vector<std::vector<double>>& grads) {
  engines::ForwardCache cache;
  const auto q = engine.forward(t.state, cache);
  const nn::LossAndGrad lg = nn::huber(q[t.action], target, huber);
  std::array<double, game::kNumCells> g{};
  g[t.action] = lg.grad;
  grads = engine.backward(cache, g);
  return lg.loss;
}

TrainingLog train(engines::Engine& engine, const TrainConfig& config) {
  return train(engine, config, nullptr);
}

TrainingLog train(engines::Engine& engine, const TrainConfig& config,
                  const EpisodeCallback& callback) {
  config.validate();
  Rng rng(config.seed);
  nn::AdamState adam;
  adam.config = config.optimizer;
  TrainingLog log;
  log.episodes.reserve(static_cast<std::size_t>(config.episodes));
  std::vector<std::vector<double>> grads;
  for (long long ep = 0; ep < config.episodes; ++ep) {
    const double eps = config.epsilon.at(ep);
    const Episode episode = self_play_episode(engine, eps, rng);
    double loss_sum = 0.0;
    const auto transitions = episode.chronological();
    for (const Transition& t : transitions) {
      const double target = q_target(t, engine, config.gamma);
      loss_sum += transition_gradient(engine, t, target, config.huber, grads);
      const auto blocks = engine.parameter_blocks();
      nn::adam_step(blocks, grads, adam);
    }
    EpisodeLog entry{ep, eps, transitions.empty() ? 0.0 : loss_sum / transitions.size(),
                     episode.result};
    log.episodes.push_back(entry);
    if (callback && !callback(entry)) break;
  }
  return log;
}

double TabularQ::value(const game::Board& s, int action) const {
  const auto it = table_.find(s.key());
  return it == table_.end() ? 0.0 : it->second[action];
}

std::array<double, game::kNumCells> TabularQ::values(const game::Board& s) const {
  const auto it = table_.find(s.key());
  return it == table_.end() ? std::array<double, game::kNumCells>{} : it->second;
}

int TabularQ::greedy(const game::Board& s) const {
  const auto v = values(s);
  return engines::argmax_legal(v, s);
}

void TabularQ::train(long long episodes, double gamma, const EpsilonSchedule& schedule, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long long ep = 0; ep < episodes; ++ep) {
    const double eps = schedule.at(ep);
    const Episode episode = play_episode([&](const game::Board& b) {
      if (u(rng) < eps) {
        const auto moves = game::legal_moves(b);
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        return moves[pick(rng)];
      }
      return greedy(b);
    });
    for (const Transition& t : episode.chronological()) {
      double target = t.reward;
      if (t.next) target += gamma * max_legal(values(*t.next), *t.next);
      auto& row = table_[t.state.key()];
      row[t.action] += alpha_ * (target - row[t.action]);
    }
  }
}

double non_loss_rate_vs_random(const std::function<int(const game::Board&)>& policy, int games,
                               Rng& rng) {
  if (games <= 0) return 0.0;
  int non_losses = 0;
  for (int g = 0; g < games; ++g) {
    const game::Player seat = g % 2 == 0 ? game::Player::O : game::Player::X;
    game::Board b = game::Board::empty();
    while (game::outcome(b) == game::Outcome::Ongoing) {
      int move;
      if (b.to_move == seat) {
        move = policy(b);
      } else {
        const auto moves = game::legal_moves(b);
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        move = moves[pick(rng)];
      }
      b = game::apply_move(b, move);
    }
    if (game::score_for(game::outcome(b), seat) >= 0) ++non_losses;
  }
  return static_cast<double>(non_losses) / games;
}

}  // namespace qttt::rl
