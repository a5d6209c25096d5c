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

// Tic-tac-toe rules, the numeric board encoding fed to every engine, and an
// exact minimax oracle.
//
// Cells are indexed row-major 0..8. O always moves first.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qttt/common.hpp"

namespace qttt::game {

inline constexpr int kNumCells = 9;

enum class Cell : std::uint8_t { Empty, O, X };
enum class Player : std::uint8_t { O, X };
enum class Outcome : std::uint8_t { Ongoing, OWins, XWins, Draw };

constexpr Player opponent(Player p) { return p == Player::O ? Player::X : Player::O; }
constexpr Cell mark_of(Player p) { return p == Player::O ? Cell::O : Cell::X; }

struct Board {
  std::array<Cell, kNumCells> cells{};
  Player to_move = Player::O;

  static Board empty() { return Board{}; }

  // Parses the 10-character form: 9 cells over {'.', 'O', 'X'} followed by
  // the side to move, e.g. "....O....X". Throws std::invalid_argument.
  static Board from_string(std::string_view s);
  std::string to_string() const;

  // Dense index in [0, 2 * 3^9), unique per (cells, to_move).
  int key() const;

  friend bool operator==(const Board&, const Board&) = default;
};

std::vector<int> legal_moves(const Board& board);

// Throws IllegalMove if the cell is out of range, occupied, or the game is
// already decided.
Board apply_move(const Board& board, int cell);

Outcome outcome(const Board& board);

// O -> +1, X -> -1, empty -> 0, index-aligned with the cells.
std::array<double, kNumCells> encode(const Board& board);

// Game-theoretic value from O's perspective (+1 O wins, -1 X wins, 0 draw)
// under perfect play. Memoized over all positions.
int minimax_value(const Board& board);

// Value from the perspective of the side to move.
int minimax_value_for_mover(const Board& board);

// Moves attaining the minimax value for the side to move.
std::vector<int> optimal_moves(const Board& board);

// Structural validity: mark counts consistent with the side to move and at
// most one winner.
bool is_valid(const Board& board);

// Score of an outcome from the perspective of `p`: +1 win, -1 loss, 0 draw
// or ongoing.
int score_for(Outcome o, Player p);

const char* to_string(Outcome o);
char to_char(Player p);

}  // namespace qttt::game
