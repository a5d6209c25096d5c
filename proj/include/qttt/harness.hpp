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

// Config-driven experiment runner. One JSON document describes a run; every
// run leaves a manifest.json in its output directory that can be fed back as
// the config to repeat it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qttt/arena.hpp"
#include "qttt/channel.hpp"
#include "qttt/engine.hpp"
#include "qttt/trainer.hpp"

namespace qttt::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestVersion = 1;
inline constexpr const char* kOutputEnvVar = "QTTT_OUT";

enum class Command { Train, Tournament, QiFixed, QiSweep, Serve, EmitPlots };

std::string to_string(Command c);
// Throws ConfigError.
Command parse_command(const std::string& s);

struct ChannelBlock {
  std::vector<int> models{1, 2};
  std::vector<channel::Pattern> patterns{channel::Pattern::A, channel::Pattern::B,
                                         channel::Pattern::C};
  double distance_km = 100.0;  // fixed-distance runs
  double attenuation = channel::kDefaultAttenuation;
  std::vector<double> distances{0.01, 0.1, 1.0, 10.0};  // sweeps
  std::vector<std::uint64_t> seeds;                     // sweeps; empty means {seed}
};

struct ServeBlock {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path checkpoint_dir;  // empty means <output>/checkpoints
  std::filesystem::path ui_dir;          // empty disables static files
  bool exact = false;
  int shots = 1024;
  int threads = 4;
};

struct ExperimentConfig {
  Command command = Command::Train;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::vector<std::string> engines;
  rl::TrainConfig trainer;
  arena::MatchConfig arena;
  int games_vs_random = 10000;
  ChannelBlock channel;
  engines::MeasurementMode measurement;
  ServeBlock serve;
  // Reuse <output>/checkpoints when present instead of training again.
  bool reuse_checkpoints = false;

  // Throws ConfigError. Accepts a manifest written by run() as well.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Throws ConfigError for unresolvable engine keys or bad blocks.
  void validate() const;
};

// Throws ConfigError, IoError.
ExperimentConfig load_config(const std::filesystem::path& path);

// Default output root: $QTTT_OUT, else ./qttt-out.
std::filesystem::path default_output_root();

struct RunSummary {
  std::vector<std::filesystem::path> artifacts;
  nlohmann::json results;
};

// Executes train, tournament, qi-fixed, qi-sweep or emit-plots. Throws
// ConfigError, IoError, MissingData.
RunSummary run(const ExperimentConfig& config);

// Tidy plot tables from a results directory:
//   plots/rating_progression.csv  engine_id,games_played,rating
//   plots/rating_vs_distance.csv  engine,model,distance_km,sigma,mean_rating,min_rating,
//                                 max_rating,runs
// Throws MissingData when neither source exists.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& results_dir);

// Trains `spec` per the config's trainer block; seeds come from the config.
engines::Engine train_engine(const ExperimentConfig& config, const std::string& key,
                             rl::TrainingLog* log = nullptr);

}  // namespace qttt::harness
