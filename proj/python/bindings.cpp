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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qttt/arena.hpp"
#include "qttt/channel.hpp"
#include "qttt/checkpoint.hpp"
#include "qttt/engine.hpp"
#include "qttt/game.hpp"
#include "qttt/harness.hpp"
#include "qttt/trainer.hpp"

namespace py = pybind11;
using namespace qttt;

namespace {

game::Board board_of(const std::string& s) { return game::Board::from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "tic-tac-toe engines with simulated quantum layers";
  py::register_exception<Error>(m, "QtttError");

  // Boards cross the boundary as 10-character strings ("........." + mover).
  m.def("legal_moves", [](const std::string& b) { return game::legal_moves(board_of(b)); });
  m.def("apply_move", [](const std::string& b, int cell) { return game::apply_move(board_of(b), cell).to_string(); });
  m.def("outcome", [](const std::string& b) { return std::string(game::to_string(game::outcome(board_of(b)))); });
  m.def("minimax_value", [](const std::string& b) { return game::minimax_value(board_of(b)); });
  m.def("optimal_moves", [](const std::string& b) { return game::optimal_moves(board_of(b)); });
  m.def("empty_board", [] { return game::Board::empty().to_string(); });

  m.def("engine_keys", [](std::uint64_t seed) {
    std::vector<std::string> keys;
    for (const auto& s : engines::all_engine_specs(seed)) keys.push_back(s.key());
    return keys;
  }, py::arg("seed") = 0);

  py::class_<engines::Engine>(m, "Engine")
      .def(py::init([](const std::string& key, std::uint64_t seed) {
             return engines::Engine(engines::EngineSpec::parse(key, seed));
           }),
           py::arg("key"), py::arg("seed") = 0)
      .def_property_readonly("key", [](const engines::Engine& e) { return e.spec().key(); })
      .def_property_readonly("label", [](const engines::Engine& e) { return e.spec().label(); })
      .def_property_readonly("classical_params", &engines::Engine::classical_param_count)
      .def_property_readonly("quantum_params", &engines::Engine::quantum_param_count)
      .def("circuit_metrics",
           [](const engines::Engine& e) -> py::object {
             if (!e.spec().has_quantum_layer()) return py::none();
             const auto c = e.quantum_metrics();
             py::dict d;
             d["cx_count"] = c.cx_count;
             d["depth"] = c.depth;
             d["param_count"] = c.param_count;
             return d;
           })
      .def("evaluate", [](const engines::Engine& e, const std::string& b) { return e.evaluate(board_of(b)); })
      .def("best_move",
           [](const engines::Engine& e, const std::string& b) {
             const auto board = board_of(b);
             const auto q = e.evaluate(board);
             return engines::argmax_legal(q, board);
           })
      .def("train",
           [](engines::Engine& e, long long episodes, std::uint64_t seed) {
             rl::TrainConfig t;
             t.episodes = episodes;
             t.seed = seed;
             py::gil_scoped_release release;
             const auto log = rl::train(e, t);
             return log.episodes.size();
           },
           py::arg("episodes"), py::arg("seed") = 0)
      .def("save", [](const engines::Engine& e, const std::filesystem::path& p) {
        engines::save_checkpoint_file(e, p);
      });

  m.def("load_engine", [](const std::filesystem::path& p) { return engines::load_checkpoint_file(p); });

  m.def("non_loss_rate_vs_random",
        [](const engines::Engine& e, int games, std::uint64_t seed) {
          Rng rng(seed);
          return rl::non_loss_rate_vs_random(
              [&](const game::Board& b) { return engines::argmax_legal(e.evaluate(b), b); }, games, rng);
        },
        py::arg("engine"), py::arg("games") = 1000, py::arg("seed") = 0);

  m.def("expected_score", &arena::expected_score, py::arg("rating"), py::arg("opponent"));
  m.def("update_rating",
        [](double r, int wins, int losses, int draws, double w, double k) {
          return arena::update_rating(r, {wins, losses, draws}, w, k);
        },
        py::arg("rating"), py::arg("wins"), py::arg("losses"), py::arg("draws"), py::arg("expected"),
        py::arg("k") = arena::kDefaultK);

  m.def("noise_sigma", [](double d) { return channel::noise_sigma(d); }, py::arg("distance_km"));

  m.def("run_config", [](const std::filesystem::path& path) {
    const auto summary = harness::run(harness::load_config(path));
    std::vector<std::string> out;
    for (const auto& a : summary.artifacts) out.push_back(a.string());
    return out;
  });
}
