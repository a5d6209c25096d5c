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

#include "qttt/circuits.hpp"

#include <algorithm>
#include <numbers>

namespace qttt::circuits {
namespace {

using qsim::AngleExpr;
using qsim::QuantumCircuit;

constexpr double kPi = std::numbers::pi;

void require_width(int n, bool even) {
  if (n < 2 || n > qsim::kMaxQubits) {
    throw UnsupportedWidth("circuit width " + std::to_string(n) + " unsupported");
  }
  if (even && n % 2 != 0) {
    throw UnsupportedWidth("QCNN needs an even width, got " + std::to_string(n));
  }
}

std::vector<int> add_params(QuantumCircuit& c, int count) {
  std::vector<int> ids;
  ids.reserve(count);
  for (int i = 0; i < count; ++i) ids.push_back(c.add_param("t" + std::to_string(c.num_params())));
  return ids;
}

void cx_chain(QuantumCircuit& c) {
  for (int q = 0; q + 1 < c.num_qubits; ++q) c.cx(q, q + 1);
}

// Two-qubit convolution unit (3 CX, 3 parameters).
void conv_block(QuantumCircuit& c, int first, int second) {
  const auto t = add_params(c, 3);
  c.rz(second, AngleExpr::constant(-kPi / 2));
  c.cx(second, first);
  c.rz(first, AngleExpr::param(t[0]));
  c.ry(second, AngleExpr::param(t[1]));
  c.cx(first, second);
  c.ry(second, AngleExpr::param(t[2]));
  c.cx(second, first);
  c.rz(first, AngleExpr::constant(kPi / 2));
}

// Pooling unit (2 CX, 3 parameters): the convolution unit without its final
// CX and RZ. Information is concentrated on `sink`.
void pool_block(QuantumCircuit& c, int source, int sink) {
  const auto t = add_params(c, 3);
  c.rz(sink, AngleExpr::constant(-kPi / 2));
  c.cx(sink, source);
  c.rz(source, AngleExpr::param(t[0]));
  c.ry(sink, AngleExpr::param(t[1]));
  c.cx(source, sink);
  c.ry(sink, AngleExpr::param(t[2]));
}

}  // namespace

std::string to_key(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::ZFeatureMap: return "zfeaturemap";
    case EmbeddingKind::ZZFeatureMap: return "zzfeaturemap";
    case EmbeddingKind::HEE: return "hee";
    case EmbeddingKind::TPE: return "tpe";
  }
  return "?";
}

std::string to_key(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::RealAmplitudes: return "realamplitudes";
    case AnsatzKind::EfficientSU2: return "efficientsu2";
    case AnsatzKind::QCNN: return "qcnn";
  }
  return "?";
}

EmbeddingKind parse_embedding(std::string_view key) {
  for (auto k : {EmbeddingKind::ZFeatureMap, EmbeddingKind::ZZFeatureMap, EmbeddingKind::HEE,
                 EmbeddingKind::TPE}) {
    if (to_key(k) == key) return k;
  }
  throw UnknownCircuitKind("unknown embedding '" + std::string(key) + "'");
}

AnsatzKind parse_ansatz(std::string_view key) {
  for (auto k : {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2, AnsatzKind::QCNN}) {
    if (to_key(k) == key) return k;
  }
  throw UnknownCircuitKind("unknown ansatz '" + std::string(key) + "'");
}

std::string display_name(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::ZFeatureMap: return "ZFeatureMap";
    case EmbeddingKind::ZZFeatureMap: return "ZZFeatureMap";
    case EmbeddingKind::HEE: return "HEE";
    case EmbeddingKind::TPE: return "TPE";
  }
  return "?";
}

std::string display_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::RealAmplitudes: return "RealAmplitudes";
    case AnsatzKind::EfficientSU2: return "EfficientSU2";
    case AnsatzKind::QCNN: return "QCNN";
  }
  return "?";
}

QuantumCircuit build_embedding(EmbeddingKind kind, int n) {
  require_width(n, false);
  QuantumCircuit c(n);
  for (int i = 0; i < n; ++i) c.add_input("x" + std::to_string(i));
  switch (kind) {
    case EmbeddingKind::ZFeatureMap:
      for (int q = 0; q < n; ++q) c.h(q);
      for (int q = 0; q < n; ++q) c.p(q, AngleExpr::input(q, 2.0));
      break;
    case EmbeddingKind::ZZFeatureMap:
      for (int q = 0; q < n; ++q) c.h(q);
      for (int q = 0; q < n; ++q) c.p(q, AngleExpr::input(q, 2.0));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          c.cx(i, j);
          c.p(j, AngleExpr::pair(i, j, 2.0));
          c.cx(i, j);
        }
      }
      break;
    case EmbeddingKind::HEE:
      for (int q = 0; q < n; ++q) c.ry(q, AngleExpr::input(q));
      cx_chain(c);
      break;
    case EmbeddingKind::TPE:
      for (int q = 0; q < n; ++q) c.ry(q, AngleExpr::input(q));
      break;
  }
  return c;
}

QuantumCircuit build_ansatz(AnsatzKind kind, int n) {
  require_width(n, kind == AnsatzKind::QCNN);
  QuantumCircuit c(n);
  switch (kind) {
    case AnsatzKind::RealAmplitudes:
      for (int q = 0; q < n; ++q) c.ry(q, AngleExpr::param(add_params(c, 1)[0]));
      cx_chain(c);
      for (int q = 0; q < n; ++q) c.ry(q, AngleExpr::param(add_params(c, 1)[0]));
      break;
    case AnsatzKind::EfficientSU2:
      for (int rep = 0; rep < 2; ++rep) {
        for (int q = 0; q < n; ++q) c.ry(q, AngleExpr::param(add_params(c, 1)[0]));
        for (int q = 0; q < n; ++q) c.rz(q, AngleExpr::param(add_params(c, 1)[0]));
        if (rep == 0) cx_chain(c);
      }
      break;
    case AnsatzKind::QCNN:
      for (int q = 0; q < n; q += 2) conv_block(c, q, q + 1);
      for (int q = 1; q < n; q += 2) conv_block(c, q, (q + 1) % n);
      for (int k = 0; k < n / 2; ++k) pool_block(c, 2 * k + 1, 2 * k);
      break;
  }
  return c;
}

std::vector<int> readout_qubits(AnsatzKind kind, int n) {
  std::vector<int> qs;
  const int step = kind == AnsatzKind::QCNN ? 2 : 1;
  for (int q = 0; q < n; q += step) qs.push_back(q);
  return qs;
}

int ansatz_param_count(AnsatzKind kind, int n) {
  switch (kind) {
    case AnsatzKind::RealAmplitudes: return 2 * n;
    case AnsatzKind::EfficientSU2: return 4 * n;
    case AnsatzKind::QCNN: return 3 * n + 3 * (n / 2);
  }
  return 0;
}

CircuitMetrics circuit_metrics(const QuantumCircuit& circuit) {
  CircuitMetrics m;
  m.param_count = circuit.num_params();
  std::vector<int> level(std::max(circuit.num_qubits, 0), 0);
  for (const qsim::Gate& g : circuit.gates) {
    if (g.kind == qsim::GateKind::CX) {
      ++m.cx_count;
      const int l = std::max(level[g.control], level[g.target]) + 1;
      level[g.control] = level[g.target] = l;
    } else {
      ++level[g.target];
    }
  }
  m.depth = level.empty() ? 0 : *std::max_element(level.begin(), level.end());
  return m;
}

CircuitMetrics stacked_metrics(const QuantumCircuit& first, const QuantumCircuit& second) {
  const CircuitMetrics a = circuit_metrics(first);
  const CircuitMetrics b = circuit_metrics(second);
  return {a.cx_count + b.cx_count, a.depth + b.depth, a.param_count + b.param_count};
}

}  // namespace qttt::circuits
