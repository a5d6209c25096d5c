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

// Game engines: a board goes in, nine action values come out. Engines are
// classical CNNs, pure quantum circuits (QNN / QCNN) or hybrids that wrap a
// quantum layer between two dense layers.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qttt/circuits.hpp"
#include "qttt/game.hpp"
#include "qttt/nn.hpp"
#include "qttt/qsim.hpp"

namespace qttt::engines {

enum class Family { Classical, QuantumOnly, Hybrid };
enum class ClassicalSize { Stronger, Weaker };
enum class OutputMethod { Estimator, Sampler };

// Declarative description of an engine. Keys look like
//   "ccnn-stronger", "ccnn-weaker",
//   "qnn-9-<embedding>-<ansatz>", "qcnn-18-<embedding>",
//   "hnn-est-<8|16>-<embedding>-<ansatz>", "hnn-smp-<8|16>-<embedding>-<ansatz>".
struct EngineSpec {
  Family family = Family::Classical;
  ClassicalSize size = ClassicalSize::Stronger;
  OutputMethod output = OutputMethod::Estimator;
  int qubits = 0;
  circuits::EmbeddingKind embedding = circuits::EmbeddingKind::ZFeatureMap;
  circuits::AnsatzKind ansatz = circuits::AnsatzKind::RealAmplitudes;
  std::uint64_t seed = 0;

  static EngineSpec classical(ClassicalSize size, std::uint64_t seed = 0);
  static EngineSpec qnn(circuits::EmbeddingKind e, circuits::AnsatzKind a, std::uint64_t seed = 0);
  static EngineSpec qcnn(circuits::EmbeddingKind e, std::uint64_t seed = 0);
  static EngineSpec hybrid(OutputMethod m, int qubits, circuits::EmbeddingKind e,
                           circuits::AnsatzKind a, std::uint64_t seed = 0);

  // Throws InvalidSpec.
  static EngineSpec parse(std::string_view key, std::uint64_t seed = 0);
  std::string key() const;
  // Human-readable row label, e.g. "Estimator 8 qubits / HEE+RealAmplitudes".
  std::string label() const;

  // Throws InvalidSpec when the combination is not one of the 54 supported.
  void validate() const;

  bool has_quantum_layer() const { return family != Family::Classical; }

  friend bool operator==(const EngineSpec&, const EngineSpec&) = default;
};

// All 54 configurations: 2 classical, 8 QNN, 4 QCNN, 32 hybrid-QNN, 8
// hybrid-QCNN, in that order.
std::vector<EngineSpec> all_engine_specs(std::uint64_t seed = 0);

struct MeasurementMode {
  bool exact = true;
  int shots = 1024;
};

// Rotation noise inserted into the quantum layer: an RX/RY/RZ triple per
// qubit after the embedding and, optionally, another after the ansatz.
// Angles are drawn from Normal(0, sigma^2) on every inference.
struct NoiseInsertion {
  double sigma = 0.0;
  bool after_embedding = true;
  bool after_ansatz = false;

  int layer_count() const { return int{after_embedding} + int{after_ansatz}; }
};

struct ForwardCache {
  nn::ForwardCache classical;  // classical engines
  nn::ForwardCache pre;        // hybrid input layer
  nn::ForwardCache post;       // hybrid output layer
  std::vector<double> quantum_inputs;  // full binding, including noise angles
  std::vector<double> quantum_outputs;
  std::array<double, game::kNumCells> output{};
};

class Engine {
 public:
  // Builds the architecture and initializes all weights from spec.seed.
  explicit Engine(EngineSpec spec);

  const EngineSpec& spec() const { return spec_; }

  std::array<double, game::kNumCells> evaluate(const game::Board& board) const;

  // Forward pass retaining what backward() needs.
  std::array<double, game::kNumCells> forward(const game::Board& board, ForwardCache& cache) const;

  // Gradients of sum_k output_grad[k] * output[k], shaped like
  // parameter_blocks(). Quantum layers are differentiated by the shift rule
  // with any noise angles held at the values recorded in the cache.
  std::vector<std::vector<double>> backward(const ForwardCache& cache,
                                            std::span<const double> output_grad) const;

  // Order: classical net | pre-layer blocks, quantum parameters, post-layer blocks.
  std::vector<std::span<double>> parameter_blocks();
  std::vector<std::span<const double>> parameter_blocks() const;

  std::size_t classical_param_count() const;
  std::size_t quantum_param_count() const;

  // Embedding+ansatz (plus noise layers if any) as executed.
  const qsim::QuantumCircuit* quantum_circuit() const;
  // Embedding+ansatz only, for metrics.
  std::optional<qsim::QuantumCircuit> noiseless_circuit() const;
  std::size_t quantum_output_size() const;
  // CX count, depth (embedding and ansatz stacked) and parameter count of
  // the noiseless quantum layer; all zero for classical engines.
  circuits::CircuitMetrics quantum_metrics() const;

  const nn::Network* classical_net() const;
  const nn::Network* pre_net() const;
  const nn::Network* post_net() const;

  void set_measurement(MeasurementMode mode) { measurement_ = mode; }
  MeasurementMode measurement() const { return measurement_; }

  // Throws NoQuantumLayer for classical engines.
  void set_noise(std::optional<NoiseInsertion> noise, std::uint64_t noise_seed);
  const std::optional<NoiseInsertion>& noise() const { return noise_; }
  // Noise rotation gates currently inserted in the executed circuit.
  int noise_gate_count() const;

  // Reseeds the stream used by shot sampling and noise draws.
  void reseed_stochastic(std::uint64_t seed) const { rng_.seed(seed); }

 private:
  void rebuild_circuit();
  std::vector<double> measure(const qsim::Statevector& state) const;
  std::vector<double> quantum_inputs_for(const std::vector<double>& features) const;

  EngineSpec spec_;
  MeasurementMode measurement_;
  std::optional<NoiseInsertion> noise_;

  nn::Network classical_;
  nn::Network pre_;
  nn::Network post_;

  qsim::QuantumCircuit embedding_;
  qsim::QuantumCircuit ansatz_;
  qsim::QuantumCircuit circuit_;
  std::vector<double> quantum_params_;
  std::vector<int> readout_;
  int feature_count_ = 0;  // inputs of the embedding that carry board features

  // Shots and noise draws; evaluation is not thread-safe in those modes.
  mutable Rng rng_;
};

// Epsilon-greedy move choice. Greedy picks the legal cell with the highest
// value, lowest index on ties. Throws NoLegalMoves.
int select_move(const Engine& engine, const game::Board& board, double epsilon, Rng& rng);

int argmax_legal(std::span<const double> values, const game::Board& board);

}  // namespace qttt::engines
