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

#include "qttt/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qttt::engines {
namespace {

using nlohmann::json;

json architecture(const Engine& e) {
  json arch;
  arch["family"] = e.spec().family == Family::Classical     ? "classical"
                   : e.spec().family == Family::QuantumOnly ? "quantum"
                                                            : "hybrid";
  auto layers = [](const nn::Network* net) {
    json out = json::array();
    if (net) {
      for (const auto& l : net->layers) out.push_back(nn::describe(l));
    }
    return out;
  };
  arch["classical_layers"] = layers(e.classical_net());
  arch["pre_layers"] = layers(e.pre_net());
  arch["post_layers"] = layers(e.post_net());
  if (e.spec().has_quantum_layer()) {
    arch["qubits"] = e.spec().qubits;
    arch["embedding"] = circuits::to_key(e.spec().embedding);
    arch["ansatz"] = circuits::to_key(e.spec().ansatz);
    arch["quantum_outputs"] = e.quantum_output_size();
  }
  arch["classical_params"] = e.classical_param_count();
  arch["quantum_params"] = e.quantum_param_count();
  return arch;
}

}  // namespace

json checkpoint_save(const Engine& engine, const json& training) {
  json doc;
  doc["format"] = "qttt-checkpoint";
  doc["version"] = kCheckpointVersion;
  doc["spec"] = engine.spec().key();
  doc["seed"] = engine.spec().seed;
  doc["architecture"] = architecture(engine);
  json weights = json::array();
  for (auto block : engine.parameter_blocks()) {
    weights.push_back(std::vector<double>(block.begin(), block.end()));
  }
  doc["weights"] = std::move(weights);
  doc["training"] = training;
  return doc;
}

Engine checkpoint_load(const json& doc, const std::optional<EngineSpec>& expected) {
  EngineSpec spec;
  std::vector<std::vector<double>> weights;
  try {
    if (!doc.is_object() || doc.value("format", "") != "qttt-checkpoint") {
      throw CorruptCheckpoint("not a qttt checkpoint");
    }
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      throw CorruptCheckpoint("unsupported checkpoint version");
    }
    spec = EngineSpec::parse(doc.at("spec").get<std::string>(), doc.at("seed").get<std::uint64_t>());
    weights = doc.at("weights").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(std::string("malformed checkpoint: ") + e.what());
  } catch (const InvalidSpec& e) {
    throw CorruptCheckpoint(std::string("checkpoint names an invalid engine: ") + e.what());
  }
  if (expected && expected->key() != spec.key()) {
    throw SpecMismatch("checkpoint holds '" + spec.key() + "', expected '" + expected->key() + "'");
  }
  Engine engine(spec);
  auto blocks = engine.parameter_blocks();
  if (blocks.size() != weights.size()) {
    throw CorruptCheckpoint("checkpoint has " + std::to_string(weights.size()) +
                            " weight blocks, architecture needs " + std::to_string(blocks.size()));
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != weights[b].size()) {
      throw CorruptCheckpoint("weight block " + std::to_string(b) + " has wrong size");
    }
    for (std::size_t i = 0; i < weights[b].size(); ++i) {
      if (!std::isfinite(weights[b][i])) throw CorruptCheckpoint("non-finite weight");
      blocks[b][i] = weights[b][i];
    }
  }
  return engine;
}

void save_checkpoint_file(const Engine& engine, const std::filesystem::path& path,
                          const json& training) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << checkpoint_save(engine, training).dump() << '\n';
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    throw CorruptCheckpoint("checkpoint " + path.string() + " does not parse: " + e.what());
  }
}

}  // namespace

Engine load_checkpoint_file(const std::filesystem::path& path,
                            const std::optional<EngineSpec>& expected) {
  return checkpoint_load(read_json(path), expected);
}

json checkpoint_training_meta(const std::filesystem::path& path) {
  const json doc = read_json(path);
  return doc.value("training", json::object());
}

}  // namespace qttt::engines
