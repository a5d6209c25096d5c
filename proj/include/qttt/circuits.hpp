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

// Embedding and ansatz circuit families used by the quantum engines, and
// the structural metrics reported for them.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qttt/qsim.hpp"

namespace qttt::circuits {

enum class EmbeddingKind { ZFeatureMap, ZZFeatureMap, HEE, TPE };
enum class AnsatzKind { RealAmplitudes, EfficientSU2, QCNN };

// String keys: "zfeaturemap", "zzfeaturemap", "hee", "tpe",
// "realamplitudes", "efficientsu2", "qcnn". Parsing throws
// UnknownCircuitKind.
std::string to_key(EmbeddingKind kind);
std::string to_key(AnsatzKind kind);
EmbeddingKind parse_embedding(std::string_view key);
AnsatzKind parse_ansatz(std::string_view key);

// Display names as used in result tables, e.g. "ZZFeatureMap".
std::string display_name(EmbeddingKind kind);
std::string display_name(AnsatzKind kind);

// n inputs named x0..x{n-1}, no parameters. Requires n >= 2.
//   ZFeatureMap:  H, P(2 x_i)
//   ZZFeatureMap: H, P(2 x_i), then for all i<j: CX(i,j) P_j(2 (pi-x_i)(pi-x_j)) CX(i,j)
//   HEE:          RY(x_i), then CX chain 0->1->...->n-1
//   TPE:          RY(x_i)
qsim::QuantumCircuit build_embedding(EmbeddingKind kind, int n);

// Parameters named t0.., no inputs. Requires n >= 2 (and even n for QCNN).
//   RealAmplitudes: RY layer, CX chain, RY layer                       (2n)
//   EfficientSU2:   RY+RZ layer, CX chain, RY+RZ layer                 (4n)
//   QCNN:           n convolution blocks over circular neighbours, then
//                   n/2 pooling blocks folding qubit 2k+1 into 2k     (4.5n)
qsim::QuantumCircuit build_ansatz(AnsatzKind kind, int n);

// Qubits whose Z expectation is read out after the ansatz: every qubit, or
// the even-indexed survivors of QCNN pooling.
std::vector<int> readout_qubits(AnsatzKind kind, int n);

int ansatz_param_count(AnsatzKind kind, int n);

struct CircuitMetrics {
  int cx_count = 0;
  int depth = 0;
  int param_count = 0;

  friend bool operator==(const CircuitMetrics&, const CircuitMetrics&) = default;
};

// Depth is the longest chain of gates sharing qubits (ASAP layering).
CircuitMetrics circuit_metrics(const qsim::QuantumCircuit& circuit);

// Metrics of `first` followed by `second` with a barrier in between, so the
// depths add instead of interleaving.
CircuitMetrics stacked_metrics(const qsim::QuantumCircuit& first,
                               const qsim::QuantumCircuit& second);

}  // namespace qttt::circuits
