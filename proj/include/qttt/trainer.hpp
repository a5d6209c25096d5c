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

// Q-learning by self-play with a function approximator in place of the
// Q-table:
//
//   target = r + gamma * max_{a' legal} Q(s', a')     (0 for terminal s')
//   loss   = huber(Q(s, a), target)
//
// where s' is the position after the opponent's reply, so that every
// transition is seen from the perspective of the side that moved. The
// tabular blend rate of classic Q-learning is carried by the optimizer's
// step size.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qttt/engine.hpp"
#include "qttt/game.hpp"
#include "qttt/nn.hpp"

namespace qttt::rl {

inline constexpr double kWinReward = 1.0;
inline constexpr double kLossReward = -1.0;
inline constexpr double kDrawReward = 0.0;

struct Transition {
  game::Board state;
  int action = 0;
  double reward = 0.0;
  std::optional<game::Board> next;  // nullopt when terminal
  game::Player perspective = game::Player::O;
};

struct Episode {
  std::vector<Transition> o_seat;
  std::vector<Transition> x_seat;
  std::vector<int> moves;
  game::Outcome result = game::Outcome::Ongoing;

  // Both seats' transitions ordered by the ply at which the action was taken.
  std::vector<Transition> chronological() const;
};

struct EpsilonSchedule {
  double start = 1.0;
  double min = 0.05;
  double decay = 0.9995;  // multiplicative, per episode

  // Epsilon in effect during episode `episode` (0-based).
  double at(long long episode) const;
};

struct TrainConfig {
  long long episodes = 10000;
  double gamma = 0.9;
  EpsilonSchedule epsilon;
  nn::AdamConfig optimizer;
  nn::HuberParams huber;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

struct EpisodeLog {
  long long episode = 0;
  double epsilon = 0.0;
  double mean_loss = 0.0;
  game::Outcome result = game::Outcome::Ongoing;
};

struct TrainingLog {
  std::vector<EpisodeLog> episodes;

  // CSV with columns episode,epsilon,mean_loss,result_o,result_x where the
  // result columns hold W/L/D from each seat's point of view.
  void write_csv(std::ostream& out) const;
};

double q_target(const Transition& t, const engines::Engine& engine, double gamma);

// One game with the same engine in both seats.
Episode self_play_episode(const engines::Engine& engine, double epsilon, Rng& rng);

// Gradient of the Huber loss on output `action` only, shaped like the
// engine's parameter blocks. Returns the loss.
double transition_gradient(const engines::Engine& engine, const Transition& t, double target,
                           const nn::HuberParams& huber,
                           std::vector<std::vector<double>>& grads);

TrainingLog train(engines::Engine& engine, const TrainConfig& config);

// Called after every episode; return false to stop early.
using EpisodeCallback = std::function<bool(const EpisodeLog&)>;
TrainingLog train(engines::Engine& engine, const TrainConfig& config,
                  const EpisodeCallback& callback);

// Plain tabular Q-learning with the same transition structure, used as a
// reference for the environment and reward handling.
class TabularQ {
 public:
  explicit TabularQ(double learning_rate = 0.5) : alpha_(learning_rate) {}

  double value(const game::Board& s, int action) const;
  std::array<double, game::kNumCells> values(const game::Board& s) const;
  int greedy(const game::Board& s) const;

  void train(long long episodes, double gamma, const EpsilonSchedule& schedule, Rng& rng);
  std::size_t table_size() const { return table_.size(); }

 private:
  double alpha_;
  std::unordered_map<int, std::array<double, game::kNumCells>> table_;
};

// Non-loss rate of a greedy policy against a uniform random mover, seats
// alternating (game i: policy plays O when i is even).
double non_loss_rate_vs_random(const std::function<int(const game::Board&)>& policy, int games,
                               Rng& rng);

}  // namespace qttt::rl
