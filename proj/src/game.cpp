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

#include "qttt/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace qttt::game {
namespace {

constexpr std::array<std::array<int, 3>, 8> kLines = {{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},  // rows
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},  // columns
    {0, 4, 8}, {2, 4, 6},             // diagonals
}};

constexpr int kNumKeys = 2 * 19683;

bool has_line(const Board& b, Cell mark) {
  return std::any_of(kLines.begin(), kLines.end(), [&](const auto& line) {
    return b.cells[line[0]] == mark && b.cells[line[1]] == mark && b.cells[line[2]] == mark;
  });
}

// Value for the side to move; memo entries are -1, 0, +1 or 2 (unset).
int solve(const Board& b, std::array<std::int8_t, kNumKeys>& memo) {
  auto& slot = memo[b.key()];
  if (slot != 2) return slot;
  int value;
  switch (outcome(b)) {
    case Outcome::OWins:
      value = b.to_move == Player::O ? 1 : -1;
      break;
    case Outcome::XWins:
      value = b.to_move == Player::X ? 1 : -1;
      break;
    case Outcome::Draw:
      value = 0;
      break;
    default: {
      value = -2;
      for (int c : legal_moves(b)) {
        value = std::max(value, -solve(apply_move(b, c), memo));
        if (value == 1) break;
      }
    }
  }
  slot = static_cast<std::int8_t>(value);
  return value;
}

using Memo = std::array<std::int8_t, kNumKeys>;

// Solving the empty board fills every reachable position.
const Memo& reachable_memo() {
  static const Memo table = [] {
    Memo t;
    t.fill(2);
    solve(Board::empty(), t);
    return t;
  }();
  return table;
}

}  // namespace

Board Board::from_string(std::string_view s) {
  if (s.size() != 10) throw std::invalid_argument("board string must have 10 characters");
  Board b;
  for (int i = 0; i < kNumCells; ++i) {
    switch (s[i]) {
      case '.': b.cells[i] = Cell::Empty; break;
      case 'O': b.cells[i] = Cell::O; break;
      case 'X': b.cells[i] = Cell::X; break;
      default: throw std::invalid_argument("bad cell character in board string");
    }
  }
  if (s[9] == 'O') {
    b.to_move = Player::O;
  } else if (s[9] == 'X') {
    b.to_move = Player::X;
  } else {
    throw std::invalid_argument("bad side-to-move character in board string");
  }
  return b;
}

std::string Board::to_string() const {
  std::string s(10, '.');
  for (int i = 0; i < kNumCells; ++i) {
    if (cells[i] == Cell::O) s[i] = 'O';
    if (cells[i] == Cell::X) s[i] = 'X';
  }
  s[9] = to_char(to_move);
  return s;
}

int Board::key() const {
  int k = 0;
  for (Cell c : cells) k = k * 3 + static_cast<int>(c);
  return k * 2 + static_cast<int>(to_move);
}

std::vector<int> legal_moves(const Board& board) {
  std::vector<int> moves;
  moves.reserve(kNumCells);
  for (int i = 0; i < kNumCells; ++i) {
    if (board.cells[i] == Cell::Empty) moves.push_back(i);
  }
  return moves;
}

Board apply_move(const Board& board, int cell) {
  if (cell < 0 || cell >= kNumCells) {
    throw IllegalMove("cell " + std::to_string(cell) + " out of range");
  }
  if (board.cells[cell] != Cell::Empty) {
    throw IllegalMove("cell " + std::to_string(cell) + " is occupied");
  }
  if (outcome(board) != Outcome::Ongoing) throw IllegalMove("game is over");
  Board next = board;
  next.cells[cell] = mark_of(board.to_move);
  next.to_move = opponent(board.to_move);
  return next;
}

Outcome outcome(const Board& board) {
  if (has_line(board, Cell::O)) return Outcome::OWins;
  if (has_line(board, Cell::X)) return Outcome::XWins;
  const bool full = std::none_of(board.cells.begin(), board.cells.end(),
                                 [](Cell c) { return c == Cell::Empty; });
  return full ? Outcome::Draw : Outcome::Ongoing;
}

std::array<double, kNumCells> encode(const Board& board) {
  std::array<double, kNumCells> v{};
  for (int i = 0; i < kNumCells; ++i) {
    v[i] = board.cells[i] == Cell::O ? 1.0 : board.cells[i] == Cell::X ? -1.0 : 0.0;
  }
  return v;
}

int minimax_value_for_mover(const Board& board) {
  const Memo& memo = reachable_memo();
  if (memo[board.key()] != 2) return memo[board.key()];
  // Hand-built positions outside the reachable set are solved on a copy.
  Memo local = memo;
  return solve(board, local);
}

int minimax_value(const Board& board) {
  const int v = minimax_value_for_mover(board);
  return board.to_move == Player::O ? v : -v;
}

std::vector<int> optimal_moves(const Board& board) {
  std::vector<int> best;
  if (outcome(board) != Outcome::Ongoing) return best;
  const int target = minimax_value_for_mover(board);
  for (int c : legal_moves(board)) {
    if (-minimax_value_for_mover(apply_move(board, c)) == target) best.push_back(c);
  }
  return best;
}

bool is_valid(const Board& board) {
  const auto n_o = std::count(board.cells.begin(), board.cells.end(), Cell::O);
  const auto n_x = std::count(board.cells.begin(), board.cells.end(), Cell::X);
  const auto diff = n_o - n_x;
  if (diff != 0 && diff != 1) return false;
  if ((diff == 0) != (board.to_move == Player::O)) return false;
  return !(has_line(board, Cell::O) && has_line(board, Cell::X));
}

int score_for(Outcome o, Player p) {
  if (o == Outcome::OWins) return p == Player::O ? 1 : -1;
  if (o == Outcome::XWins) return p == Player::X ? 1 : -1;
  return 0;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::OWins: return "o_wins";
    case Outcome::XWins: return "x_wins";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

char to_char(Player p) { return p == Player::O ? 'O' : 'X'; }

}  // namespace qttt::game
