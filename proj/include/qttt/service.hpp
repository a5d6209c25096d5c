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

// Play against trained engines over HTTP.
//
//   GET  /api/engines                 -> {engines: [{id, spec, label, rating}]}
//   POST /api/games {engine_id, human_seat}
//   GET  /api/games/{id}
//   POST /api/games/{id}/moves {cell}
//
// Every body carries schema_version. Engine replies are computed inside the
// request that hands the engine the move.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "qttt/engine.hpp"
#include "qttt/game.hpp"
#include "qttt/harness.hpp"

namespace httplib {
class Server;
}

namespace qttt::service {

inline constexpr int kSchemaVersion = 1;

struct ServedEngine {
  std::string id;
  engines::Engine engine;
  double rating = 1500.0;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

class GameService {
 public:
  explicit GameService(std::vector<ServedEngine> engines, std::uint64_t seed = 0);
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  // Loads every *.json checkpoint in `dir`. Ratings come from a
  // ratings_final.csv next to the directory when one exists. Throws
  // NoCheckpoints.
  static std::unique_ptr<GameService> from_checkpoint_dir(const std::filesystem::path& dir,
                                                           engines::MeasurementMode mode,
                                                           std::uint64_t seed = 0);

  Reply list_engines() const;
  Reply create_game(const nlohmann::json& body);
  Reply get_game(const std::string& id) const;
  Reply post_move(const std::string& id, const nlohmann::json& body);

  std::size_t engine_count() const { return engines_.size(); }

 private:
  struct Slot {
    explicit Slot(ServedEngine e) : served(std::move(e)) {}
    ServedEngine served;
    std::mutex mu;  // shot and noise sampling mutate the engine's stream
  };
  struct Session {
    std::string id;
    std::string engine_id;
    game::Player human_seat = game::Player::O;
    game::Board board;
    std::vector<int> moves;
    std::mutex mu;
  };

  int engine_reply(Slot& slot, Session& s);
  nlohmann::json session_json(const Session& s, int engine_move) const;
  std::shared_ptr<Session> find(const std::string& id) const;

  std::map<std::string, std::unique_ptr<Slot>> engines_;
  std::vector<std::string> order_;
  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  Rng id_rng_;
};

Reply error_reply(int status, const std::string& code, const std::string& message);

class HttpServer {
 public:
  // Routes the API onto `service` and mounts `ui_dir` at / when non-empty.
  HttpServer(GameService& service, const std::filesystem::path& ui_dir = {});
  ~HttpServer();

  // Port 0 picks a free port. Throws PortInUse.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  GameService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// Builds the service from a config's serve block and runs until stopped.
void serve(const harness::ExperimentConfig& config);

}  // namespace qttt::service
