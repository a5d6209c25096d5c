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

// Client-server channel noise. A fibre of length d with attenuation a dB/km
// gives rotation noise of standard deviation
//
//   sigma(d) = 10^(a * d / 10) - 1
//
// Model 1: the client embeds, the server runs the ansatz, the client
// measures, so the state crosses the channel twice. Model 2: the server
// measures and only the embedded state crosses.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qttt/arena.hpp"
#include "qttt/engine.hpp"
#include "qttt/trainer.hpp"

namespace qttt::channel {

inline constexpr double kDefaultAttenuation = 0.2;  // dB/km

// A: clean training and evaluation. B: noisy evaluation only. C: noisy both.
enum class Pattern { A, B, C };

char to_char(Pattern p);
Pattern parse_pattern(const std::string& s);

struct ChannelConfig {
  int model = 1;
  double distance_km = 0.0;
  double attenuation = kDefaultAttenuation;
  Pattern pattern = Pattern::A;

  // Throws std::invalid_argument.
  void validate() const;
};

double noise_sigma(double distance_km, double attenuation = kDefaultAttenuation);

engines::NoiseInsertion noise_insertion(const ChannelConfig& config);

// Returns a copy of `engine` whose quantum layer sits behind the channel.
// Throws NoQuantumLayer.
engines::Engine wrap_with_channel(const engines::Engine& engine, const ChannelConfig& config,
                                  std::uint64_t noise_seed);

struct PatternResult {
  ChannelConfig channel;
  double final_rating = arena::kInitialRating;
  std::vector<double> trace;
  arena::BlockResult totals;
};

// Rates an already trained engine under `config`. Pattern A evaluates
// without noise; B and C evaluate behind the channel.
PatternResult evaluate_pattern(const engines::Engine& trained, const ChannelConfig& config,
                               const arena::MatchConfig& match, std::uint64_t noise_seed);

// Trains spec (with the channel active during training for Pattern C),
// then rates it against the random mover with the channel active for
// Patterns B and C.
PatternResult run_pattern_experiment(const engines::EngineSpec& spec, const ChannelConfig& config,
                                     const rl::TrainConfig& train, const arena::MatchConfig& match,
                                     std::uint64_t noise_seed);

struct SweepPoint {
  int model = 1;
  Pattern pattern = Pattern::B;
  double distance_km = 0.0;
  double sigma = 0.0;
  double final_rating = arena::kInitialRating;
  std::uint64_t seed = 0;
};

// Pattern B at each distance against an already trained engine. All
// distances share the noise stream so that the draws differ only by scale.
std::vector<SweepPoint> distance_sweep(const engines::Engine& trained, int model,
                                       const std::vector<double>& distances,
                                       const arena::MatchConfig& match, std::uint64_t noise_seed,
                                       double attenuation = kDefaultAttenuation);

// Logarithmically spaced distances from `lo` to `hi` inclusive.
std::vector<double> log_distances(double lo, double hi, int count);

// model,pattern,distance_km,sigma,final_rating,seed
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

// Plug-in estimate, in bits, of the mutual information between paired
// discrete samples.
double mutual_information(const std::vector<int>& x, const std::vector<int>& y);

}  // namespace qttt::channel
