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

#include "qttt/service.hpp"

#include <sys/socket.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "qttt/checkpoint.hpp"

namespace qttt::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::map<std::string, double> read_ratings(const fs::path& csv) {
  std::map<std::string, double> out;
  std::ifstream in(csv);
  if (!in) return out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string id, games, rating;
    if (std::getline(ls, id, ',') && std::getline(ls, games, ',') && std::getline(ls, rating)) {
      try {
        out[id] = std::stod(rating);
      } catch (const std::exception&) {
        // leave the default rating
      }
    }
  }
  return out;
}

std::string status_of(const game::Board& b) { return game::to_string(game::outcome(b)); }

}  // namespace

Reply error_reply(int status, const std::string& code, const std::string& message) {
  return {status,
          {{"schema_version", kSchemaVersion}, {"error", {{"code", code}, {"message", message}}}}};
}

GameService::GameService(std::vector<ServedEngine> engines, std::uint64_t seed)
    : id_rng_(derive_seed(seed, 0x5e55)) {
  if (engines.empty()) throw NoCheckpoints("no engines to serve");
  for (auto& e : engines) {
    const std::string id = e.id;
    if (engines_.count(id)) throw std::invalid_argument("duplicate engine id '" + id + "'");
    engines_.emplace(id, std::make_unique<Slot>(std::move(e)));
    order_.push_back(id);
  }
}

std::unique_ptr<GameService> GameService::from_checkpoint_dir(const fs::path& dir,
                                                               engines::MeasurementMode mode,
                                                               std::uint64_t seed) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
  }
  if (files.empty()) throw NoCheckpoints("no checkpoints found in " + dir.string());
  std::sort(files.begin(), files.end());
  const auto ratings = read_ratings(dir.parent_path() / "ratings_final.csv");
  std::vector<ServedEngine> served;
  for (const auto& f : files) {
    engines::Engine e = engines::load_checkpoint_file(f);
    e.set_measurement(mode);
    e.reseed_stochastic(derive_seed(seed, served.size() + 1));
    const std::string id = f.stem().string();
    const auto it = ratings.find(e.spec().key());
    served.push_back({id, std::move(e), it == ratings.end() ? 1500.0 : it->second});
  }
  return std::make_unique<GameService>(std::move(served), seed);
}

Reply GameService::list_engines() const {
  json arr = json::array();
  for (const auto& id : order_) {
    const ServedEngine& s = engines_.at(id)->served;
    arr.push_back({{"id", s.id},
                   {"spec", s.engine.spec().key()},
                   {"label", s.engine.spec().label()},
                   {"rating", s.rating}});
  }
  return {200, {{"schema_version", kSchemaVersion}, {"engines", std::move(arr)}}};
}

int GameService::engine_reply(Slot& slot, Session& s) {
  std::lock_guard<std::mutex> lock(slot.mu);
  Rng unused(0);
  const int move = engines::select_move(slot.served.engine, s.board, 0.0, unused);
  s.board = game::apply_move(s.board, move);
  s.moves.push_back(move);
  return move;
}

json GameService::session_json(const Session& s, int engine_move) const {
  json cells = json::array();
  for (auto c : s.board.cells) cells.push_back(c == game::Cell::O ? "O" : c == game::Cell::X ? "X" : "");
  const bool ongoing = game::outcome(s.board) == game::Outcome::Ongoing;
  return {{"schema_version", kSchemaVersion},
          {"id", s.id},
          {"engine_id", s.engine_id},
          {"human_seat", std::string(1, game::to_char(s.human_seat))},
          {"board", s.board.to_string()},
          {"cells", std::move(cells)},
          {"to_move", ongoing ? json(std::string(1, game::to_char(s.board.to_move))) : json(nullptr)},
          {"legal_moves", ongoing ? game::legal_moves(s.board) : std::vector<int>{}},
          {"moves", s.moves},
          {"status", status_of(s.board)},
          {"engine_move", engine_move >= 0 ? json(engine_move) : json(nullptr)}};
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(sessions_mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Reply GameService::create_game(const json& body) {
  if (!body.is_object() || !body.contains("engine_id") || !body.at("engine_id").is_string()) {
    return error_reply(400, "bad_request", "engine_id (string) is required");
  }
  const std::string engine_id = body.at("engine_id").get<std::string>();
  const auto it = engines_.find(engine_id);
  if (it == engines_.end()) return error_reply(404, "unknown_engine", "no engine '" + engine_id + "'");
  std::string seat = "O";
  if (body.contains("human_seat")) {
    if (!body.at("human_seat").is_string()) return error_reply(400, "bad_request", "human_seat must be \"O\" or \"X\"");
    seat = body.at("human_seat").get<std::string>();
  }
  if (seat != "O" && seat != "X") return error_reply(400, "bad_request", "human_seat must be \"O\" or \"X\"");

  auto s = std::make_shared<Session>();
  s->engine_id = engine_id;
  s->human_seat = seat == "O" ? game::Player::O : game::Player::X;
  s->board = game::Board::empty();
  {
    std::lock_guard<std::mutex> lock(sessions_mu_);
    char buf[17];
    do {
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id_rng_()));
    } while (sessions_.count(buf));
    s->id = buf;
    sessions_.emplace(s->id, s);
  }
  std::lock_guard<std::mutex> lock(s->mu);
  int reply = -1;
  if (s->human_seat == game::Player::X) reply = engine_reply(*it->second, *s);
  return {201, session_json(*s, reply)};
}

Reply GameService::get_game(const std::string& id) const {
  const auto s = find(id);
  if (!s) return error_reply(404, "unknown_game", "no game '" + id + "'");
  std::lock_guard<std::mutex> lock(s->mu);
  return {200, session_json(*s, -1)};
}

Reply GameService::post_move(const std::string& id, const json& body) {
  const auto s = find(id);
  if (!s) return error_reply(404, "unknown_game", "no game '" + id + "'");
  if (!body.is_object() || !body.contains("cell") || !body.at("cell").is_number_integer()) {
    return error_reply(400, "bad_request", "cell (integer 0-8) is required");
  }
  const long long cell = body.at("cell").get<long long>();
  std::lock_guard<std::mutex> lock(s->mu);
  if (game::outcome(s->board) != game::Outcome::Ongoing) {
    return error_reply(409, "game_over", "game is already " + status_of(s->board));
  }
  if (s->board.to_move != s->human_seat) return error_reply(409, "not_your_turn", "engine to move");
  if (cell < 0 || cell >= game::kNumCells) return error_reply(409, "illegal_move", "cell out of range");
  if (s->board.cells[cell] != game::Cell::Empty) {
    return error_reply(409, "illegal_move", "cell " + std::to_string(cell) + " is occupied");
  }
  s->board = game::apply_move(s->board, static_cast<int>(cell));
  s->moves.push_back(static_cast<int>(cell));
  int reply = -1;
  if (game::outcome(s->board) == game::Outcome::Ongoing) {
    reply = engine_reply(*engines_.at(s->engine_id), *s);
  }
  return {200, session_json(*s, reply)};
}

HttpServer::HttpServer(GameService& service, const fs::path& ui_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  // Plain SO_REUSEADDR; the library default adds SO_REUSEPORT, which would
  // let a second server share the port silently.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req, json& out) {
    out = json::parse(req.body, nullptr, false);
    return !out.is_discarded();
  };
  srv.Get("/api/engines", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, service_.list_engines());
  });
  srv.Post("/api/games", [this, send, parse](const httplib::Request& req, httplib::Response& res) {
    json body;
    if (!parse(req, body)) return send(res, error_reply(400, "bad_json", "body is not JSON"));
    send(res, service_.create_game(body));
  });
  srv.Get(R"(/api/games/([0-9a-f]+))",
          [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.get_game(req.matches[1]));
          });
  srv.Post(R"(/api/games/([0-9a-f]+)/moves)",
           [this, send, parse](const httplib::Request& req, httplib::Response& res) {
             json body;
             if (!parse(req, body)) return send(res, error_reply(400, "bad_json", "body is not JSON"));
             send(res, service_.post_move(req.matches[1], body));
           });
  srv.set_exception_handler([send](const httplib::Request&, httplib::Response& res,
                                   std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error_reply(500, "internal", what));
  });
  if (!ui_dir.empty()) {
    if (!fs::is_directory(ui_dir)) throw IoError("ui directory not found: " + ui_dir.string());
    srv.set_mount_point("/", ui_dir.string());
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p <= 0) throw PortInUse("could not bind any port on " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) {
    throw PortInUse("port " + std::to_string(port) + " on " + host + " is not available");
  }
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void serve(const harness::ExperimentConfig& config) {
  config.validate();
  const fs::path root = config.output_dir.empty() ? harness::default_output_root() : config.output_dir;
  const fs::path dir = config.serve.checkpoint_dir.empty() ? root / "checkpoints" : config.serve.checkpoint_dir;
  engines::MeasurementMode mode;
  mode.exact = config.serve.exact;
  mode.shots = config.serve.shots;
  auto service = GameService::from_checkpoint_dir(dir, mode, config.seed);
  HttpServer server(*service, config.serve.ui_dir);
  const int port = server.bind(config.serve.host, config.serve.port);
  std::fprintf(stderr, "serving %zu engine(s) on http://%s:%d\n", service->engine_count(),
               config.serve.host.c_str(), port);
  server.listen();
}

}  // namespace qttt::service
