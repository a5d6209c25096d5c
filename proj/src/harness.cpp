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

#include "qttt/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qttt/checkpoint.hpp"

namespace qttt::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams carved out of the run seed.
constexpr std::uint64_t kTrainStream = 11;
constexpr std::uint64_t kArenaStream = 12;
constexpr std::uint64_t kNoiseStream = 13;

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names = {
      {"train", Command::Train},       {"tournament", Command::Tournament},
      {"qi-fixed", Command::QiFixed},  {"qi-sweep", Command::QiSweep},
      {"serve", Command::Serve},       {"emit-plots", Command::EmitPlots}};
  return names;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::stringstream in(read_text(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

class Outputs {
 public:
  explicit Outputs(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  void write(const fs::path& rel, const std::string& text) {
    write_text(root_ / rel, text);
    files_.push_back(rel);
  }
  void note(const fs::path& rel) { files_.push_back(rel); }

  std::vector<fs::path> absolute() const {
    std::vector<fs::path> out;
    for (const auto& f : files_) out.push_back(root_ / f);
    return out;
  }
  json relative() const {
    json out = json::array();
    for (const auto& f : files_) out.push_back(f.generic_string());
    return out;
  }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

json train_meta(const ExperimentConfig& c, const rl::TrainingLog& log) {
  return {{"episodes", log.episodes.size()},
          {"seed", c.seed},
          {"gamma", c.trainer.gamma},
          {"epsilon_start", c.trainer.epsilon.start},
          {"epsilon_min", c.trainer.epsilon.min},
          {"epsilon_decay", c.trainer.epsilon.decay},
          {"learning_rate", c.trainer.optimizer.step_size}};
}

engines::Engine obtain_engine(const ExperimentConfig& config, const std::string& key,
                              Outputs& out) {
  const fs::path rel = fs::path("checkpoints") / (key + ".json");
  const fs::path abs = out.root() / rel;
  if (config.reuse_checkpoints && fs::exists(abs)) {
    return engines::load_checkpoint_file(abs, engines::EngineSpec::parse(key, config.seed));
  }
  rl::TrainingLog log;
  engines::Engine e = train_engine(config, key, &log);
  std::ostringstream csv;
  log.write_csv(csv);
  out.write(fs::path("logs") / (key + ".train.csv"), csv.str());
  out.write(rel, engines::checkpoint_save(e, train_meta(config, log)).dump() + "\n");
  return e;
}

arena::MatchConfig arena_config(const ExperimentConfig& c, std::uint64_t seed) {
  arena::MatchConfig m = c.arena;
  m.seed = derive_seed(seed, kArenaStream);
  return m;
}

arena::MatchConfig vs_random_config(const ExperimentConfig& c, std::uint64_t seed) {
  arena::MatchConfig m = arena_config(c, seed);
  m.games_per_pair = c.games_vs_random;
  return m;
}

json run_train(const ExperimentConfig& c, Outputs& out) {
  json results = json::object();
  for (const auto& key : c.engines) {
    rl::TrainingLog log;
    const engines::Engine e = train_engine(c, key, &log);
    std::ostringstream csv;
    log.write_csv(csv);
    out.write(fs::path("logs") / (key + ".train.csv"), csv.str());
    out.write(fs::path("checkpoints") / (key + ".json"),
              engines::checkpoint_save(e, train_meta(c, log)).dump() + "\n");
    results[key] = {{"episodes", log.episodes.size()},
                    {"classical_params", e.classical_param_count()},
                    {"quantum_params", e.quantum_param_count()}};
  }
  return results;
}

json run_tournament(const ExperimentConfig& c, Outputs& out) {
  if (c.engines.size() < 2) throw ConfigError("tournament needs at least 2 engines");
  std::vector<engines::Engine> engines;
  engines.reserve(c.engines.size());
  for (const auto& key : c.engines) {
    engines.push_back(obtain_engine(c, key, out));
    engines.back().set_measurement(c.measurement);
  }
  std::vector<arena::Competitor> competitors;
  for (const auto& e : engines) competitors.push_back({e.spec().key(), arena::greedy_policy(e)});
  arena::GameLog log;
  const arena::RatingTable table = arena::round_robin(competitors, arena_config(c, c.seed), &log);

  std::ostringstream hist, fin, games;
  table.write_history_csv(hist);
  table.write_final_csv(fin);
  log.write_ndjson(games);
  out.write("ratings_history.csv", hist.str());
  out.write("ratings_final.csv", fin.str());
  out.write("games.ndjson", games.str());

  json results = json::object();
  for (const auto& id : table.ids()) results[id] = table.rating(id);
  return results;
}

void require_quantum(const std::string& key, std::uint64_t seed) {
  if (!engines::EngineSpec::parse(key, seed).has_quantum_layer()) {
    throw ConfigError("engine '" + key + "' has no quantum layer for channel experiments");
  }
}

json run_qi_fixed(const ExperimentConfig& c, Outputs& out) {
  std::ostringstream table, traces;
  table.precision(17);
  traces.precision(17);
  table << "engine,model,pattern,distance_km,sigma,final_rating,wins,losses,draws\n";
  traces << "engine,model,pattern,games_played,rating\n";
  json results = json::array();
  const std::uint64_t noise_seed = derive_seed(c.seed, kNoiseStream);
  for (const auto& key : c.engines) {
    require_quantum(key, c.seed);
    std::optional<engines::Engine> clean;
    for (int model : c.channel.models) {
      for (channel::Pattern p : c.channel.patterns) {
        const channel::ChannelConfig cc{model, c.channel.distance_km, c.channel.attenuation, p};
        engines::Engine trained = [&] {
          if (p != channel::Pattern::C) {
            if (!clean) clean = train_engine(c, key);
            return *clean;
          }
          engines::Engine e(engines::EngineSpec::parse(key, c.seed));
          e.set_measurement(c.measurement);
          e.set_noise(channel::noise_insertion(cc), derive_seed(noise_seed, 1));
          rl::TrainConfig t = c.trainer;
          t.seed = derive_seed(c.seed, kTrainStream);
          rl::train(e, t);
          return e;
        }();
        trained.set_measurement(c.measurement);
        const channel::PatternResult r =
            channel::evaluate_pattern(trained, cc, vs_random_config(c, c.seed), noise_seed);
        const double sigma = channel::noise_sigma(cc.distance_km, cc.attenuation);
        table << key << ',' << model << ',' << channel::to_char(p) << ',' << cc.distance_km << ','
              << sigma << ',' << r.final_rating << ',' << r.totals.wins_a << ','
              << r.totals.wins_b << ',' << r.totals.draws << '\n';
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
          traces << key << ',' << model << ',' << channel::to_char(p) << ','
                 << (i + 1) * c.arena.block_games << ',' << r.trace[i] << '\n';
        }
        results.push_back({{"engine", key},
                           {"model", model},
                           {"pattern", std::string(1, channel::to_char(p))},
                           {"final_rating", r.final_rating}});
      }
    }
  }
  out.write("qi_fixed.csv", table.str());
  out.write("qi_fixed_traces.csv", traces.str());
  return results;
}

json run_qi_sweep(const ExperimentConfig& c, Outputs& out) {
  const std::vector<std::uint64_t> seeds =
      c.channel.seeds.empty() ? std::vector<std::uint64_t>{c.seed} : c.channel.seeds;
  json results = json::object();
  for (const auto& key : c.engines) {
    require_quantum(key, c.seed);
    std::vector<channel::SweepPoint> points;
    for (std::uint64_t s : seeds) {
      ExperimentConfig per_seed = c;
      per_seed.seed = s;
      engines::Engine trained = train_engine(per_seed, key);
      trained.set_measurement(c.measurement);
      for (int model : c.channel.models) {
        auto pts = channel::distance_sweep(trained, model, c.channel.distances,
                                           vs_random_config(c, s), derive_seed(s, kNoiseStream),
                                           c.channel.attenuation);
        for (auto& p : pts) p.seed = s;
        points.insert(points.end(), pts.begin(), pts.end());
      }
    }
    std::ostringstream csv;
    channel::write_sweep_csv(csv, points);
    out.write(fs::path("sweep") / (key + ".csv"), csv.str());
    json arr = json::array();
    for (const auto& p : points) {
      arr.push_back({{"model", p.model},
                     {"distance_km", p.distance_km},
                     {"seed", p.seed},
                     {"final_rating", p.final_rating}});
    }
    results[key] = std::move(arr);
  }
  return results;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& s) {
  const auto it = command_names().find(s);
  if (it == command_names().end()) throw ConfigError("unknown command '" + s + "'");
  return it->second;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  const json& j = doc.is_object() && doc.value("format", "") == "qttt-manifest" && doc.contains("config")
                      ? doc.at("config")
                      : doc;
  ExperimentConfig c;
  try {
    check_keys(j, "config",
               {"command", "seed", "output_dir", "engines", "trainer", "arena", "channel",
                "measurement", "serve", "reuse_checkpoints"});
    if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
    read(j, "seed", c.seed);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    read(j, "engines", c.engines);
    read(j, "reuse_checkpoints", c.reuse_checkpoints);
    if (j.contains("trainer")) {
      const json& t = j.at("trainer");
      check_keys(t, "trainer",
                 {"episodes", "gamma", "epsilon_start", "epsilon_min", "epsilon_decay",
                  "learning_rate", "beta1", "beta2", "adam_epsilon", "huber_delta"});
      read(t, "episodes", c.trainer.episodes);
      read(t, "gamma", c.trainer.gamma);
      read(t, "epsilon_start", c.trainer.epsilon.start);
      read(t, "epsilon_min", c.trainer.epsilon.min);
      read(t, "epsilon_decay", c.trainer.epsilon.decay);
      read(t, "learning_rate", c.trainer.optimizer.step_size);
      read(t, "beta1", c.trainer.optimizer.beta1);
      read(t, "beta2", c.trainer.optimizer.beta2);
      read(t, "adam_epsilon", c.trainer.optimizer.epsilon);
      read(t, "huber_delta", c.trainer.huber.delta);
    }
    if (j.contains("arena")) {
      const json& a = j.at("arena");
      check_keys(a, "arena", {"games_per_pair", "block_games", "k", "elo_form", "games_vs_random"});
      read(a, "games_per_pair", c.arena.games_per_pair);
      read(a, "block_games", c.arena.block_games);
      read(a, "k", c.arena.k);
      if (a.contains("elo_form")) c.arena.form = arena::parse_elo_form(a.at("elo_form").get<std::string>());
      read(a, "games_vs_random", c.games_vs_random);
    }
    if (j.contains("channel")) {
      const json& ch = j.at("channel");
      check_keys(ch, "channel",
                 {"models", "patterns", "distance_km", "attenuation", "distances", "seeds"});
      read(ch, "models", c.channel.models);
      if (ch.contains("patterns")) {
        c.channel.patterns.clear();
        for (const auto& p : ch.at("patterns")) {
          c.channel.patterns.push_back(channel::parse_pattern(p.get<std::string>()));
        }
      }
      read(ch, "distance_km", c.channel.distance_km);
      read(ch, "attenuation", c.channel.attenuation);
      read(ch, "distances", c.channel.distances);
      read(ch, "seeds", c.channel.seeds);
    }
    if (j.contains("measurement")) {
      const json& m = j.at("measurement");
      check_keys(m, "measurement", {"exact", "shots"});
      read(m, "exact", c.measurement.exact);
      read(m, "shots", c.measurement.shots);
    }
    if (j.contains("serve")) {
      const json& s = j.at("serve");
      check_keys(s, "serve", {"host", "port", "checkpoint_dir", "ui_dir", "exact", "shots", "threads"});
      read(s, "host", c.serve.host);
      read(s, "port", c.serve.port);
      if (s.contains("checkpoint_dir")) c.serve.checkpoint_dir = s.at("checkpoint_dir").get<std::string>();
      if (s.contains("ui_dir")) c.serve.ui_dir = s.at("ui_dir").get<std::string>();
      read(s, "exact", c.serve.exact);
      read(s, "shots", c.serve.shots);
      read(s, "threads", c.serve.threads);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json patterns = json::array();
  for (auto p : channel.patterns) patterns.push_back(std::string(1, channel::to_char(p)));
  return {
      {"command", to_string(command)},
      {"seed", seed},
      {"output_dir", output_dir.generic_string()},
      {"engines", engines},
      {"reuse_checkpoints", reuse_checkpoints},
      {"trainer",
       {{"episodes", trainer.episodes},
        {"gamma", trainer.gamma},
        {"epsilon_start", trainer.epsilon.start},
        {"epsilon_min", trainer.epsilon.min},
        {"epsilon_decay", trainer.epsilon.decay},
        {"learning_rate", trainer.optimizer.step_size},
        {"beta1", trainer.optimizer.beta1},
        {"beta2", trainer.optimizer.beta2},
        {"adam_epsilon", trainer.optimizer.epsilon},
        {"huber_delta", trainer.huber.delta}}},
      {"arena",
       {{"games_per_pair", arena.games_per_pair},
        {"block_games", arena.block_games},
        {"k", arena.k},
        {"elo_form", arena::to_string(arena.form)},
        {"games_vs_random", games_vs_random}}},
      {"channel",
       {{"models", channel.models},
        {"patterns", patterns},
        {"distance_km", channel.distance_km},
        {"attenuation", channel.attenuation},
        {"distances", channel.distances},
        {"seeds", channel.seeds}}},
      {"measurement", {{"exact", measurement.exact}, {"shots", measurement.shots}}},
      {"serve",
       {{"host", serve.host},
        {"port", serve.port},
        {"checkpoint_dir", serve.checkpoint_dir.generic_string()},
        {"ui_dir", serve.ui_dir.generic_string()},
        {"exact", serve.exact},
        {"shots", serve.shots},
        {"threads", serve.threads}}},
  };
}

void ExperimentConfig::validate() const {
  try {
    trainer.validate();
    arena.validate();
    arena::MatchConfig vr = arena;
    vr.games_per_pair = games_vs_random;
    vr.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& key : engines) {
    try {
      engines::EngineSpec::parse(key, seed);
    } catch (const InvalidSpec& e) {
      throw ConfigError("engine key does not resolve: " + std::string(e.what()));
    }
  }
  const bool needs_engines = command == Command::Train || command == Command::Tournament ||
                             command == Command::QiFixed || command == Command::QiSweep;
  if (needs_engines && engines.empty()) throw ConfigError(to_string(command) + " needs engines");
  if (command == Command::Tournament && engines.size() < 2) {
    throw ConfigError("tournament needs at least 2 engines");
  }
  if (command == Command::QiFixed || command == Command::QiSweep) {
    for (const auto& key : engines) {
      if (!engines::EngineSpec::parse(key).has_quantum_layer()) {
        throw ConfigError("'" + key + "' has no quantum layer to send over a channel");
      }
    }
  }
  for (int m : channel.models) {
    if (m != 1 && m != 2) throw ConfigError("channel models must be 1 or 2");
  }
  if (!(channel.distance_km >= 0.0)) throw ConfigError("distance_km must be >= 0");
  if (!(channel.attenuation > 0.0)) throw ConfigError("attenuation must be positive");
  for (double d : channel.distances) {
    if (!(d >= 0.0)) throw ConfigError("sweep distances must be >= 0");
  }
  if (measurement.shots <= 0 || serve.shots <= 0) throw ConfigError("shots must be positive");
  if (serve.port < 0 || serve.port > 65535) throw ConfigError("port out of range");
  if (serve.threads < 1) throw ConfigError("serve threads must be >= 1");
}

ExperimentConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " does not parse: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

fs::path default_output_root() {
  if (const char* env = std::getenv(kOutputEnvVar); env && *env) return env;
  return "qttt-out";
}

engines::Engine train_engine(const ExperimentConfig& config, const std::string& key,
                             rl::TrainingLog* log) {
  engines::Engine e(engines::EngineSpec::parse(key, config.seed));
  e.set_measurement(config.measurement);
  rl::TrainConfig t = config.trainer;
  t.seed = derive_seed(config.seed, kTrainStream);
  rl::TrainingLog l = rl::train(e, t);
  if (log) *log = std::move(l);
  return e;
}

RunSummary run(const ExperimentConfig& config) {
  config.validate();
  if (config.command == Command::Serve) throw ConfigError("serve is not a batch command");
  const fs::path root = config.output_dir.empty() ? default_output_root() : config.output_dir;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) throw IoError("output directory not writable: " + root.string());

  if (config.command == Command::EmitPlots) {
    RunSummary s;
    s.artifacts = emit_plots(root);
    return s;
  }

  Outputs out(root);
  json results;
  switch (config.command) {
    case Command::Train: results = run_train(config, out); break;
    case Command::Tournament: results = run_tournament(config, out); break;
    case Command::QiFixed: results = run_qi_fixed(config, out); break;
    case Command::QiSweep: results = run_qi_sweep(config, out); break;
    default: break;
  }
  ExperimentConfig recorded = config;
  recorded.output_dir = root;
  json manifest = {{"format", "qttt-manifest"},
                   {"version", kManifestVersion},
                   {"tool_version", kVersion},
                   {"command", to_string(config.command)},
                   {"seed", config.seed},
                   {"config", recorded.to_json()},
                   {"artifacts", out.relative()},
                   {"results", results}};
  out.write("manifest.json", manifest.dump(2) + "\n");
  return {out.absolute(), results};
}

std::vector<fs::path> emit_plots(const fs::path& dir) {
  const fs::path history = dir / "ratings_history.csv";
  const fs::path sweep_dir = dir / "sweep";
  std::vector<fs::path> sweeps;
  if (fs::is_directory(sweep_dir)) {
    for (const auto& e : fs::directory_iterator(sweep_dir)) {
      if (e.path().extension() == ".csv") sweeps.push_back(e.path());
    }
    std::sort(sweeps.begin(), sweeps.end());
  }
  if (!fs::exists(history) && sweeps.empty()) {
    throw MissingData("no ratings_history.csv or sweep/*.csv under " + dir.string());
  }
  std::vector<fs::path> written;
  if (fs::exists(history)) {
    const auto rows = read_csv(history);
    if (rows.empty() || rows[0] != std::vector<std::string>{"engine_id", "games_played", "rating"}) {
      throw MissingData("unexpected header in " + history.string());
    }
    std::map<std::string, std::vector<std::pair<long long, std::string>>> series;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 3) throw MissingData("malformed row in " + history.string());
      series[rows[i][0]].emplace_back(std::stoll(rows[i][1]), rows[i][2]);
    }
    std::ostringstream out;
    out << "engine_id,games_played,rating\n";
    for (auto& [id, pts] : series) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [g, r] : pts) out << id << ',' << g << ',' << r << '\n';
    }
    const fs::path p = dir / "plots" / "rating_progression.csv";
    write_text(p, out.str());
    written.push_back(p);
  }
  if (!sweeps.empty()) {
    struct Acc {
      double sigma = 0, sum = 0, lo = 1e300, hi = -1e300;
      int n = 0;
    };
    std::map<std::tuple<std::string, int, double>, Acc> cells;
    for (const auto& f : sweeps) {
      const auto rows = read_csv(f);
      if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "model") {
        throw MissingData("unexpected header in " + f.string());
      }
      const std::string engine = f.stem().string();
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 6) throw MissingData("malformed row in " + f.string());
        Acc& a = cells[{engine, std::stoi(rows[i][0]), std::stod(rows[i][2])}];
        const double r = std::stod(rows[i][4]);
        a.sigma = std::stod(rows[i][3]);
        a.sum += r;
        a.lo = std::min(a.lo, r);
        a.hi = std::max(a.hi, r);
        ++a.n;
      }
    }
    std::ostringstream out;
    out.precision(17);
    out << "engine,model,distance_km,sigma,mean_rating,min_rating,max_rating,runs\n";
    for (const auto& [k, a] : cells) {
      out << std::get<0>(k) << ',' << std::get<1>(k) << ',' << std::get<2>(k) << ',' << a.sigma
          << ',' << a.sum / a.n << ',' << a.lo << ',' << a.hi << ',' << a.n << '\n';
    }
    const fs::path p = dir / "plots" / "rating_vs_distance.csv";
    write_text(p, out.str());
    written.push_back(p);
  }
  return written;
}

}  // namespace qttt::harness
