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

// Dense statevector simulation of parameterized circuits.
//
// Conventions:
//  * Qubit k is bit k of the amplitude index (qubit 0 least significant).
//  * Measurement outcomes over a qubit list are indexed with the first listed
//    qubit as the most significant bit.
//  * Global phase is never observable through this API.

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qttt/common.hpp"

namespace qttt::qsim {

inline constexpr int kMaxQubits = 18;

enum class GateKind { H, RX, RY, RZ, P, CX };

bool is_rotation(GateKind kind);
const char* gate_name(GateKind kind);

struct Symbol {
  enum class Kind { Input, Param };
  Kind kind = Kind::Param;
  int index = 0;

  static Symbol input(int i) { return {Kind::Input, i}; }
  static Symbol param(int j) { return {Kind::Param, j}; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// Angle expressions of the forms the circuit families need:
//   offset                          (Constant)
//   offset + scale * x_a            (Input)
//   offset + scale * theta_a        (Param)
//   offset + scale * (pi - x_a)(pi - x_b)   (PairProduct)
struct AngleExpr {
  enum class Form { Constant, Input, Param, PairProduct };
  Form form = Form::Constant;
  double scale = 1.0;
  double offset = 0.0;
  int a = -1;
  int b = -1;

  static AngleExpr constant(double value);
  static AngleExpr input(int i, double scale = 1.0);
  static AngleExpr param(int j, double scale = 1.0);
  static AngleExpr pair(int i, int j, double scale = 1.0);

  bool is_constant() const { return form == Form::Constant; }
  double eval(std::span<const double> inputs, std::span<const double> params) const;
  bool depends_on(Symbol s) const;
  // d angle / d symbol at the given binding.
  double partial(Symbol s, std::span<const double> inputs, std::span<const double> params) const;
};

struct Gate {
  GateKind kind = GateKind::H;
  int target = 0;
  int control = -1;  // CX only
  AngleExpr angle;   // ignored by H and CX
};

struct QuantumCircuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::string> input_names;
  std::vector<std::string> param_names;

  explicit QuantumCircuit(int n = 0) : num_qubits(n) {}

  int num_inputs() const { return static_cast<int>(input_names.size()); }
  int num_params() const { return static_cast<int>(param_names.size()); }

  // Registers a fresh symbol and returns its index.
  int add_input(std::string name);
  int add_param(std::string name);

  QuantumCircuit& h(int q);
  QuantumCircuit& rx(int q, AngleExpr angle);
  QuantumCircuit& ry(int q, AngleExpr angle);
  QuantumCircuit& rz(int q, AngleExpr angle);
  QuantumCircuit& p(int q, AngleExpr angle);
  QuantumCircuit& cx(int control, int target);
};

// Appends `second` after `first`. Symbols of `second` are renumbered after
// those of `first`. Both must have the same width.
QuantumCircuit compose(const QuantumCircuit& first, const QuantumCircuit& second);

// Throws QubitOutOfRange / UnboundSymbol for malformed circuits.
void validate(const QuantumCircuit& circuit);

// Throws UnsupportedGateForShift if any non-rotation gate carries a symbolic
// angle.
void check_shift_support(const QuantumCircuit& circuit);

class Statevector {
 public:
  explicit Statevector(int num_qubits);  // |0...0>

  int num_qubits() const { return n_; }
  std::span<const std::complex<double>> amplitudes() const { return amps_; }
  std::span<std::complex<double>> amplitudes() { return amps_; }
  double norm_squared() const;

  void apply(GateKind kind, int target, int control, double angle);

 private:
  void apply_1q(int q, std::complex<double> m00, std::complex<double> m01,
                std::complex<double> m10, std::complex<double> m11);
  void apply_diag(int q, std::complex<double> d0, std::complex<double> d1);
  void apply_cx(int control, int target);

  int n_;
  std::vector<std::complex<double>> amps_;
};

// Executes the circuit from |0...0>. Throws UnboundSymbol if the binding
// sizes differ from the circuit's symbol lists, QubitOutOfRange for bad
// qubit indices.
Statevector run(const QuantumCircuit& circuit, std::span<const double> inputs,
                std::span<const double> params);

double expect_z(const Statevector& state, int qubit);
std::vector<double> expect_z(const Statevector& state, std::span<const int> qubits);

// Exact marginal distribution over the listed qubits.
std::vector<double> exact_quasi_probs(const Statevector& state, std::span<const int> qubits);

// Empirical frequencies from `shots` projective measurements.
std::vector<double> sample_quasi_probs(const Statevector& state, std::span<const int> qubits,
                                       int shots, Rng& rng);

// Per-qubit <Z> estimated from `shots` measurements of the listed qubits.
std::vector<double> sample_expect_z(const Statevector& state, std::span<const int> qubits,
                                    int shots, Rng& rng);

struct Observable {
  enum class Kind { Z, QuasiProb };
  Kind kind = Kind::Z;
  std::vector<int> qubits;  // Z: exactly one qubit
  int component = 0;        // QuasiProb: outcome index

  static Observable z(int qubit) { return {Kind::Z, {qubit}, 0}; }
  static Observable quasi_prob(std::vector<int> qubits, int component) {
    return {Kind::QuasiProb, std::move(qubits), component};
  }
  double measure(const Statevector& state) const;
};

// Parameter-shift derivative of an exact observable with respect to one
// symbol. Every occurrence of the symbol contributes
// (d angle / d symbol) * (f(angle + pi/2) - f(angle - pi/2)) / 2.
double param_shift_grad(const QuantumCircuit& circuit, std::span<const double> inputs,
                        std::span<const double> params, const Observable& observable,
                        Symbol wrt);

using OutputFn = std::function<std::vector<double>(const Statevector&)>;

struct ShiftGradient {
  std::vector<double> inputs;
  std::vector<double> params;
};

// Vector-Jacobian product through the circuit by the shift rule: returns
// sum_k weights[k] * d outputs[k] / d symbol for the first `input_prefix`
// inputs and, if `want_params`, every parameter. Two extra simulations per
// relevant symbolic gate occurrence.
ShiftGradient param_shift_vjp(const QuantumCircuit& circuit, std::span<const double> inputs,
                              std::span<const double> params, const OutputFn& outputs,
                              std::span<const double> weights, std::size_t input_prefix,
                              bool want_params);

// One line per gate: "<name> <qubit(s)> [<angle>]" preceded by a header line.
std::string dump(const QuantumCircuit& circuit);
std::string format_angle(const AngleExpr& angle, const QuantumCircuit& circuit);

}  // namespace qttt::qsim
