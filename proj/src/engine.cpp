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

#include "qttt/engine.hpp"

#include <numbers>
#include <sstream>

namespace qttt::engines {
namespace {

using circuits::AnsatzKind;
using circuits::EmbeddingKind;

constexpr EmbeddingKind kEmbeddings[] = {EmbeddingKind::ZFeatureMap, EmbeddingKind::ZZFeatureMap,
                                         EmbeddingKind::HEE, EmbeddingKind::TPE};
constexpr AnsatzKind kQnnAnsatze[] = {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_int(const std::string& s, std::string_view key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidSpec("bad qubit count in engine key '" + std::string(key) + "'");
}

nn::Network classical_network(ClassicalSize size) {
  nn::Network net;
  if (size == ClassicalSize::Stronger) {
    net.layers = {nn::make_conv3x3(1, 64), nn::Tanh{},         nn::Flatten{},
                  nn::make_dense(64, 128), nn::Tanh{},         nn::make_dense(128, 9),
                  nn::Tanh{}};
  } else {
    net.layers = {nn::make_conv3x3(1, 16), nn::Tanh{}, nn::Flatten{}, nn::make_dense(16, 9),
                  nn::Tanh{}};
  }
  return net;
}

nn::Network dense_tanh(int in, int out) {
  nn::Network net;
  net.layers = {nn::make_dense(in, out), nn::Tanh{}};
  return net;
}

qsim::QuantumCircuit noise_layer(int n, int layer) {
  using qsim::AngleExpr;
  qsim::QuantumCircuit c(n);
  for (int q = 0; q < n; ++q) {
    const std::string base = "noise" + std::to_string(layer) + "_" + std::to_string(q);
    const int ix = c.add_input(base + "_x");
    const int iy = c.add_input(base + "_y");
    const int iz = c.add_input(base + "_z");
    c.rx(q, AngleExpr::input(ix));
    c.ry(q, AngleExpr::input(iy));
    c.rz(q, AngleExpr::input(iz));
  }
  return c;
}

}  // namespace

EngineSpec EngineSpec::classical(ClassicalSize size, std::uint64_t seed) {
  EngineSpec s;
  s.family = Family::Classical;
  s.size = size;
  s.seed = seed;
  return s;
}

EngineSpec EngineSpec::qnn(EmbeddingKind e, AnsatzKind a, std::uint64_t seed) {
  EngineSpec s;
  s.family = Family::QuantumOnly;
  s.qubits = 9;
  s.embedding = e;
  s.ansatz = a;
  s.seed = seed;
  return s;
}

EngineSpec EngineSpec::qcnn(EmbeddingKind e, std::uint64_t seed) {
  EngineSpec s;
  s.family = Family::QuantumOnly;
  s.qubits = 18;
  s.embedding = e;
  s.ansatz = AnsatzKind::QCNN;
  s.seed = seed;
  return s;
}

EngineSpec EngineSpec::hybrid(OutputMethod m, int qubits, EmbeddingKind e, AnsatzKind a,
                              std::uint64_t seed) {
  EngineSpec s;
  s.family = Family::Hybrid;
  s.output = m;
  s.qubits = qubits;
  s.embedding = e;
  s.ansatz = a;
  s.seed = seed;
  return s;
}

EngineSpec EngineSpec::parse(std::string_view key, std::uint64_t seed) {
  const auto parts = split(key, '-');
  auto fail = [&](const std::string& why) -> InvalidSpec {
    return InvalidSpec("engine key '" + std::string(key) + "': " + why);
  };
  try {
    EngineSpec s;
    if (parts.size() == 2 && parts[0] == "ccnn") {
      if (parts[1] == "stronger") {
        s = classical(ClassicalSize::Stronger, seed);
      } else if (parts[1] == "weaker") {
        s = classical(ClassicalSize::Weaker, seed);
      } else {
        throw fail("unknown classical size");
      }
    } else if (parts.size() == 4 && parts[0] == "qnn") {
      s = qnn(circuits::parse_embedding(parts[2]), circuits::parse_ansatz(parts[3]), seed);
      s.qubits = parse_int(parts[1], key);
    } else if (parts.size() == 3 && parts[0] == "qcnn") {
      s = qcnn(circuits::parse_embedding(parts[2]), seed);
      s.qubits = parse_int(parts[1], key);
    } else if (parts.size() == 5 && parts[0] == "hnn") {
      OutputMethod m;
      if (parts[1] == "est") {
        m = OutputMethod::Estimator;
      } else if (parts[1] == "smp") {
        m = OutputMethod::Sampler;
      } else {
        throw fail("output method must be 'est' or 'smp'");
      }
      s = hybrid(m, parse_int(parts[2], key), circuits::parse_embedding(parts[3]),
                 circuits::parse_ansatz(parts[4]), seed);
    } else {
      throw fail("unrecognized layout");
    }
    s.validate();
    return s;
  } catch (const UnknownCircuitKind& e) {
    throw fail(e.what());
  }
}

std::string EngineSpec::key() const {
  switch (family) {
    case Family::Classical:
      return size == ClassicalSize::Stronger ? "ccnn-stronger" : "ccnn-weaker";
    case Family::QuantumOnly:
      if (ansatz == AnsatzKind::QCNN) {
        return "qcnn-" + std::to_string(qubits) + "-" + circuits::to_key(embedding);
      }
      return "qnn-" + std::to_string(qubits) + "-" + circuits::to_key(embedding) + "-" +
             circuits::to_key(ansatz);
    case Family::Hybrid:
      return std::string("hnn-") + (output == OutputMethod::Estimator ? "est" : "smp") + "-" +
             std::to_string(qubits) + "-" + circuits::to_key(embedding) + "-" +
             circuits::to_key(ansatz);
  }
  return "?";
}

std::string EngineSpec::label() const {
  const std::string model =
      circuits::display_name(embedding) + "+" + circuits::display_name(ansatz);
  switch (family) {
    case Family::Classical:
      return std::string("classical neural network / ") +
             (size == ClassicalSize::Stronger ? "stronger" : "weaker");
    case Family::QuantumOnly:
      return "Estimator " + std::to_string(qubits) + " qubits (only " +
             (ansatz == AnsatzKind::QCNN ? "QCNN" : "QNN") + ") / " + model;
    case Family::Hybrid:
      return std::string(output == OutputMethod::Estimator ? "Estimator " : "Sampler ") +
             std::to_string(qubits) + " qubits / " + model;
  }
  return "?";
}

void EngineSpec::validate() const {
  switch (family) {
    case Family::Classical: return;
    case Family::QuantumOnly:
      if (ansatz == AnsatzKind::QCNN) {
        if (qubits != 18) throw InvalidSpec("quantum-only QCNN engines use 18 qubits");
      } else if (qubits != 9) {
        throw InvalidSpec("quantum-only QNN engines use 9 qubits");
      }
      return;
    case Family::Hybrid:
      if (qubits != 8 && qubits != 16) throw InvalidSpec("hybrid engines use 8 or 16 qubits");
      if (output == OutputMethod::Sampler && ansatz == AnsatzKind::QCNN) {
        throw InvalidSpec("QCNN hybrids support only the Estimator output");
      }
      return;
  }
}

std::vector<EngineSpec> all_engine_specs(std::uint64_t seed) {
  std::vector<EngineSpec> specs;
  specs.push_back(EngineSpec::classical(ClassicalSize::Stronger, seed));
  specs.push_back(EngineSpec::classical(ClassicalSize::Weaker, seed));
  for (auto a : kQnnAnsatze) {
    for (auto e : kEmbeddings) specs.push_back(EngineSpec::qnn(e, a, seed));
  }
  for (auto e : kEmbeddings) specs.push_back(EngineSpec::qcnn(e, seed));
  for (auto m : {OutputMethod::Sampler, OutputMethod::Estimator}) {
    for (int n : {8, 16}) {
      for (auto a : kQnnAnsatze) {
        for (auto e : kEmbeddings) specs.push_back(EngineSpec::hybrid(m, n, e, a, seed));
      }
    }
  }
  for (int n : {8, 16}) {
    for (auto e : kEmbeddings) {
      specs.push_back(EngineSpec::hybrid(OutputMethod::Estimator, n, e, AnsatzKind::QCNN, seed));
    }
  }
  return specs;
}

Engine::Engine(EngineSpec spec) : spec_(spec), rng_(derive_seed(spec.seed, 1)) {
  spec_.validate();
  Rng init(spec_.seed);
  if (spec_.family == Family::Classical) {
    classical_ = classical_network(spec_.size);
    nn::init_uniform(classical_, init);
    return;
  }
  const int n = spec_.qubits;
  embedding_ = circuits::build_embedding(spec_.embedding, n);
  ansatz_ = circuits::build_ansatz(spec_.ansatz, n);
  readout_ = circuits::readout_qubits(spec_.ansatz, n);
  feature_count_ = n;
  if (spec_.family == Family::Hybrid) {
    pre_ = dense_tanh(game::kNumCells, n);
    nn::init_uniform(pre_, init);
  }
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  quantum_params_.resize(ansatz_.num_params());
  for (double& t : quantum_params_) t = angle(init);
  if (spec_.family == Family::Hybrid) {
    const int m = spec_.output == OutputMethod::Sampler ? (1 << n)
                                                        : static_cast<int>(readout_.size());
    post_ = dense_tanh(m, game::kNumCells);
    nn::init_uniform(post_, init);
  }
  rebuild_circuit();
}

void Engine::rebuild_circuit() {
  const int n = spec_.qubits;
  qsim::QuantumCircuit c = embedding_;
  if (noise_ && noise_->after_embedding) c = qsim::compose(c, noise_layer(n, 0));
  c = qsim::compose(c, ansatz_);
  if (noise_ && noise_->after_ansatz) c = qsim::compose(c, noise_layer(n, 1));
  circuit_ = std::move(c);
}

void Engine::set_noise(std::optional<NoiseInsertion> noise, std::uint64_t noise_seed) {
  if (!spec_.has_quantum_layer()) {
    throw NoQuantumLayer("engine '" + spec_.key() + "' has no quantum layer");
  }
  noise_ = noise;
  rng_.seed(noise_seed);
  rebuild_circuit();
}

int Engine::noise_gate_count() const {
  return noise_ ? noise_->layer_count() * 3 * spec_.qubits : 0;
}

std::vector<double> Engine::quantum_inputs_for(const std::vector<double>& features) const {
  std::vector<double> inputs = features;
  if (noise_) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int count = noise_gate_count();
    for (int i = 0; i < count; ++i) inputs.push_back(noise_->sigma * gauss(rng_));
  }
  return inputs;
}

std::vector<double> Engine::measure(const qsim::Statevector& state) const {
  const bool sampler = spec_.family == Family::Hybrid && spec_.output == OutputMethod::Sampler;
  if (sampler) {
    std::vector<int> all(spec_.qubits);
    for (int q = 0; q < spec_.qubits; ++q) all[q] = q;
    return measurement_.exact ? qsim::exact_quasi_probs(state, all)
                              : qsim::sample_quasi_probs(state, all, measurement_.shots, rng_);
  }
  return measurement_.exact ? qsim::expect_z(state, readout_)
                            : qsim::sample_expect_z(state, readout_, measurement_.shots, rng_);
}

std::array<double, game::kNumCells> Engine::evaluate(const game::Board& board) const {
  ForwardCache cache;
  return forward(board, cache);
}

std::array<double, game::kNumCells> Engine::forward(const game::Board& board,
                                                     ForwardCache& cache) const {
  const auto x = game::encode(board);
  std::array<double, game::kNumCells> out{};
  if (spec_.family == Family::Classical) {
    cache.classical = nn::forward(classical_, nn::Tensor({1, 3, 3}, {x.begin(), x.end()}));
    std::copy(cache.classical.output.data.begin(), cache.classical.output.data.end(), out.begin());
    cache.output = out;
    return out;
  }

  std::vector<double> features;
  if (spec_.family == Family::Hybrid) {
    cache.pre = nn::forward(pre_, nn::Tensor::vector({x.begin(), x.end()}));
    features = cache.pre.output.data;
  } else {
    // Quantum-only engines feed the board directly, repeated to fill wider
    // registers.
    features.reserve(feature_count_);
    for (int i = 0; i < feature_count_; ++i) features.push_back(x[i % game::kNumCells]);
  }
  cache.quantum_inputs = quantum_inputs_for(features);
  const qsim::Statevector state = qsim::run(circuit_, cache.quantum_inputs, quantum_params_);
  cache.quantum_outputs = measure(state);

  if (spec_.family == Family::Hybrid) {
    cache.post = nn::forward(post_, nn::Tensor::vector(cache.quantum_outputs));
    std::copy(cache.post.output.data.begin(), cache.post.output.data.end(), out.begin());
  } else {
    std::copy(cache.quantum_outputs.begin(), cache.quantum_outputs.end(), out.begin());
  }
  cache.output = out;
  return out;
}

std::vector<std::vector<double>> Engine::backward(const ForwardCache& cache,
                                                  std::span<const double> output_grad) const {
  if (output_grad.size() != game::kNumCells) {
    throw ShapeMismatch("engine output gradient must have 9 entries");
  }
  const nn::Tensor g = nn::Tensor::vector({output_grad.begin(), output_grad.end()});
  if (spec_.family == Family::Classical) {
    return nn::backward(classical_, cache.classical, g).params;
  }

  nn::Gradients post_grads;
  std::vector<double> d_quantum;
  if (spec_.family == Family::Hybrid) {
    post_grads = nn::backward(post_, cache.post, g);
    d_quantum = post_grads.input.data;
  } else {
    d_quantum = g.data;
  }

  const bool hybrid = spec_.family == Family::Hybrid;
  const qsim::OutputFn fn = [this](const qsim::Statevector& s) { return measure(s); };
  const qsim::ShiftGradient shift =
      qsim::param_shift_vjp(circuit_, cache.quantum_inputs, quantum_params_, fn, d_quantum,
                            hybrid ? static_cast<std::size_t>(feature_count_) : 0, true);

  std::vector<std::vector<double>> grads;
  if (hybrid) {
    auto pre_grads = nn::backward(pre_, cache.pre, nn::Tensor::vector(shift.inputs));
    for (auto& b : pre_grads.params) grads.push_back(std::move(b));
  }
  grads.push_back(shift.params);
  if (hybrid) {
    for (auto& b : post_grads.params) grads.push_back(std::move(b));
  }
  return grads;
}

std::vector<std::span<double>> Engine::parameter_blocks() {
  if (spec_.family == Family::Classical) return nn::parameter_blocks(classical_);
  std::vector<std::span<double>> blocks;
  if (spec_.family == Family::Hybrid) {
    for (auto b : nn::parameter_blocks(pre_)) blocks.push_back(b);
  }
  blocks.emplace_back(quantum_params_);
  if (spec_.family == Family::Hybrid) {
    for (auto b : nn::parameter_blocks(post_)) blocks.push_back(b);
  }
  return blocks;
}

std::vector<std::span<const double>> Engine::parameter_blocks() const {
  std::vector<std::span<const double>> out;
  for (auto b : const_cast<Engine*>(this)->parameter_blocks()) out.emplace_back(b);
  return out;
}

std::size_t Engine::classical_param_count() const {
  return nn::param_count(classical_) + nn::param_count(pre_) + nn::param_count(post_);
}

std::size_t Engine::quantum_param_count() const { return quantum_params_.size(); }

const qsim::QuantumCircuit* Engine::quantum_circuit() const {
  return spec_.has_quantum_layer() ? &circuit_ : nullptr;
}

std::optional<qsim::QuantumCircuit> Engine::noiseless_circuit() const {
  if (!spec_.has_quantum_layer()) return std::nullopt;
  return qsim::compose(embedding_, ansatz_);
}

circuits::CircuitMetrics Engine::quantum_metrics() const {
  if (!spec_.has_quantum_layer()) return {};
  return circuits::stacked_metrics(embedding_, ansatz_);
}

std::size_t Engine::quantum_output_size() const {
  if (!spec_.has_quantum_layer()) return 0;
  if (spec_.family == Family::Hybrid && spec_.output == OutputMethod::Sampler) {
    return std::size_t{1} << spec_.qubits;
  }
  return readout_.size();
}

const nn::Network* Engine::classical_net() const {
  return spec_.family == Family::Classical ? &classical_ : nullptr;
}
const nn::Network* Engine::pre_net() const {
  return spec_.family == Family::Hybrid ? &pre_ : nullptr;
}
const nn::Network* Engine::post_net() const {
  return spec_.family == Family::Hybrid ? &post_ : nullptr;
}

int argmax_legal(std::span<const double> values, const game::Board& board) {
  int best = -1;
  for (int c = 0; c < game::kNumCells; ++c) {
    if (board.cells[c] != game::Cell::Empty) continue;
    if (best < 0 || values[c] > values[best]) best = c;
  }
  if (best < 0) throw NoLegalMoves("no empty cell on board " + board.to_string());
  return best;
}

int select_move(const Engine& engine, const game::Board& board, double epsilon, Rng& rng) {
  const auto moves = game::legal_moves(board);
  if (moves.empty() || game::outcome(board) != game::Outcome::Ongoing) {
    throw NoLegalMoves("no legal move on board " + board.to_string());
  }
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
      return moves[pick(rng)];
    }
  }
  const auto values = engine.evaluate(board);
  return argmax_legal(values, board);
}

}  // namespace qttt::engines
