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

#include "qttt/channel.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace qttt::channel {

char to_char(Pattern p) {
  switch (p) {
    case Pattern::A: return 'A';
    case Pattern::B: return 'B';
    case Pattern::C: return 'C';
  }
  return '?';
}

Pattern parse_pattern(const std::string& s) {
  if (s == "A" || s == "a") return Pattern::A;
  if (s == "B" || s == "b") return Pattern::B;
  if (s == "C" || s == "c") return Pattern::C;
  throw std::invalid_argument("unknown noise pattern '" + s + "'");
}

void ChannelConfig::validate() const {
  if (model != 1 && model != 2) throw std::invalid_argument("channel model must be 1 or 2");
  if (!(distance_km >= 0.0) || !std::isfinite(distance_km)) {
    throw std::invalid_argument("distance must be finite and >= 0");
  }
  if (!(attenuation > 0.0)) throw std::invalid_argument("attenuation must be positive");
}

double noise_sigma(double distance_km, double attenuation) {
  if (!(distance_km >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  return std::pow(10.0, attenuation * distance_km / 10.0) - 1.0;
}

engines::NoiseInsertion noise_insertion(const ChannelConfig& config) {
  config.validate();
  engines::NoiseInsertion ins;
  ins.sigma = noise_sigma(config.distance_km, config.attenuation);
  ins.after_embedding = true;
  ins.after_ansatz = config.model == 1;
  return ins;
}

engines::Engine wrap_with_channel(const engines::Engine& engine, const ChannelConfig& config,
                                  std::uint64_t noise_seed) {
  engines::Engine wrapped = engine;
  wrapped.set_noise(noise_insertion(config), noise_seed);
  return wrapped;
}

PatternResult evaluate_pattern(const engines::Engine& trained, const ChannelConfig& config,
                               const arena::MatchConfig& match, std::uint64_t noise_seed) {
  config.validate();
  engines::Engine engine = trained;
  if (config.pattern == Pattern::A) {
    engine.set_noise(std::nullopt, derive_seed(noise_seed, 2));
  } else {
    engine.set_noise(noise_insertion(config), derive_seed(noise_seed, 2));
  }
  const arena::Competitor c{engine.spec().key(), arena::greedy_policy(engine)};
  arena::VsRandomResult r = arena::evaluate_vs_random(c, match);
  return {config, r.final_rating(), std::move(r.trace), r.totals};
}

PatternResult run_pattern_experiment(const engines::EngineSpec& spec, const ChannelConfig& config,
                                     const rl::TrainConfig& train, const arena::MatchConfig& match,
                                     std::uint64_t noise_seed) {
  config.validate();
  if (!spec.has_quantum_layer()) throw NoQuantumLayer("channel experiments need a quantum layer");
  engines::Engine engine(spec);
  if (config.pattern == Pattern::C) {
    engine.set_noise(noise_insertion(config), derive_seed(noise_seed, 1));
  }
  rl::train(engine, train);
  return evaluate_pattern(engine, config, match, noise_seed);
}

std::vector<SweepPoint> distance_sweep(const engines::Engine& trained, int model,
                                       const std::vector<double>& distances,
                                       const arena::MatchConfig& match, std::uint64_t noise_seed,
                                       double attenuation) {
  std::vector<SweepPoint> out;
  out.reserve(distances.size());
  for (double d : distances) {
    ChannelConfig cfg{model, d, attenuation, Pattern::B};
    const engines::Engine wrapped = wrap_with_channel(trained, cfg, noise_seed);
    const arena::Competitor c{trained.spec().key(), arena::greedy_policy(wrapped)};
    const arena::VsRandomResult r = arena::evaluate_vs_random(c, match);
    out.push_back({model, Pattern::B, d, noise_sigma(d, attenuation), r.final_rating(), match.seed});
  }
  return out;
}

std::vector<double> log_distances(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) {
    throw std::invalid_argument("log_distances needs 0 < lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  const auto old = out.precision(17);
  out << "model,pattern,distance_km,sigma,final_rating,seed\n";
  for (const auto& p : points) {
    out << p.model << ',' << to_char(p.pattern) << ',' << p.distance_km << ',' << p.sigma << ','
        << p.final_rating << ',' << p.seed << '\n';
  }
  out.precision(old);
}

double mutual_information(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw ShapeMismatch("mutual_information needs paired samples");
  if (x.empty()) return 0.0;
  std::map<int, double> px, py;
  std::map<std::pair<int, int>, double> pxy;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    px[x[i]] += 1.0 / n;
    py[y[i]] += 1.0 / n;
    pxy[{x[i], y[i]}] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [k, p] : pxy) mi += p * std::log2(p / (px[k.first] * py[k.second]));
  return std::max(0.0, mi);
}

}  // namespace qttt::channel
