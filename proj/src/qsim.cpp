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

#include "qttt/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qttt::qsim {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw QubitOutOfRange("qubit " + std::to_string(q) + " out of range for " +
                          std::to_string(n) + "-qubit register");
  }
}

void check_symbol(int index, int count, const char* what) {
  if (index < 0 || index >= count) {
    throw UnboundSymbol(std::string(what) + " index " + std::to_string(index) +
                        " has no binding (" + std::to_string(count) + " declared)");
  }
}

std::vector<double> bind_angles(const QuantumCircuit& c, std::span<const double> inputs,
                                std::span<const double> params) {
  std::vector<double> angles(c.gates.size(), 0.0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    angles[g] = c.gates[g].angle.eval(inputs, params);
  }
  return angles;
}

void check_binding(const QuantumCircuit& c, std::span<const double> inputs,
                   std::span<const double> params) {
  if (static_cast<int>(inputs.size()) != c.num_inputs()) {
    throw UnboundSymbol("circuit declares " + std::to_string(c.num_inputs()) +
                        " inputs, got " + std::to_string(inputs.size()));
  }
  if (static_cast<int>(params.size()) != c.num_params()) {
    throw UnboundSymbol("circuit declares " + std::to_string(c.num_params()) +
                        " parameters, got " + std::to_string(params.size()));
  }
}

void apply_range(Statevector& s, const QuantumCircuit& c, const std::vector<double>& angles,
                 std::size_t begin, std::size_t end) {
  for (std::size_t g = begin; g < end; ++g) {
    const Gate& gate = c.gates[g];
    s.apply(gate.kind, gate.target, gate.control, angles[g]);
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
         kind == GateKind::P;
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::P: return "p";
    case GateKind::CX: return "cx";
  }
  return "?";
}

AngleExpr AngleExpr::constant(double value) {
  AngleExpr e;
  e.offset = value;
  return e;
}

AngleExpr AngleExpr::input(int i, double scale) {
  AngleExpr e;
  e.form = Form::Input;
  e.scale = scale;
  e.a = i;
  return e;
}

AngleExpr AngleExpr::param(int j, double scale) {
  AngleExpr e;
  e.form = Form::Param;
  e.scale = scale;
  e.a = j;
  return e;
}

AngleExpr AngleExpr::pair(int i, int j, double scale) {
  AngleExpr e;
  e.form = Form::PairProduct;
  e.scale = scale;
  e.a = i;
  e.b = j;
  return e;
}

double AngleExpr::eval(std::span<const double> inputs, std::span<const double> params) const {
  switch (form) {
    case Form::Constant: return offset;
    case Form::Input: return offset + scale * inputs[a];
    case Form::Param: return offset + scale * params[a];
    case Form::PairProduct: return offset + scale * (kPi - inputs[a]) * (kPi - inputs[b]);
  }
  return 0.0;
}

bool AngleExpr::depends_on(Symbol s) const {
  switch (form) {
    case Form::Constant: return false;
    case Form::Input: return s.kind == Symbol::Kind::Input && s.index == a;
    case Form::Param: return s.kind == Symbol::Kind::Param && s.index == a;
    case Form::PairProduct:
      return s.kind == Symbol::Kind::Input && (s.index == a || s.index == b);
  }
  return false;
}

double AngleExpr::partial(Symbol s, std::span<const double> inputs,
                          std::span<const double>) const {
  if (!depends_on(s)) return 0.0;
  switch (form) {
    case Form::Input:
    case Form::Param: return scale;
    case Form::PairProduct: {
      // d/dx_a of (pi - x_a)(pi - x_b) is -(pi - x_b); a == b squares the term.
      double d = 0.0;
      if (s.index == a) d -= scale * (kPi - inputs[b]);
      if (s.index == b) d -= scale * (kPi - inputs[a]);
      return d;
    }
    default: return 0.0;
  }
}

int QuantumCircuit::add_input(std::string name) {
  input_names.push_back(std::move(name));
  return num_inputs() - 1;
}

int QuantumCircuit::add_param(std::string name) {
  param_names.push_back(std::move(name));
  return num_params() - 1;
}

QuantumCircuit& QuantumCircuit::h(int q) {
  check_qubit(q, num_qubits);
  gates.push_back({GateKind::H, q, -1, {}});
  return *this;
}

QuantumCircuit& QuantumCircuit::rx(int q, AngleExpr angle) {
  check_qubit(q, num_qubits);
  gates.push_back({GateKind::RX, q, -1, angle});
  return *this;
}

QuantumCircuit& QuantumCircuit::ry(int q, AngleExpr angle) {
  check_qubit(q, num_qubits);
  gates.push_back({GateKind::RY, q, -1, angle});
  return *this;
}

QuantumCircuit& QuantumCircuit::rz(int q, AngleExpr angle) {
  check_qubit(q, num_qubits);
  gates.push_back({GateKind::RZ, q, -1, angle});
  return *this;
}

QuantumCircuit& QuantumCircuit::p(int q, AngleExpr angle) {
  check_qubit(q, num_qubits);
  gates.push_back({GateKind::P, q, -1, angle});
  return *this;
}

QuantumCircuit& QuantumCircuit::cx(int control, int target) {
  check_qubit(control, num_qubits);
  check_qubit(target, num_qubits);
  if (control == target) throw QubitOutOfRange("cx control equals target");
  gates.push_back({GateKind::CX, target, control, {}});
  return *this;
}

QuantumCircuit compose(const QuantumCircuit& first, const QuantumCircuit& second) {
  if (first.num_qubits != second.num_qubits) {
    throw QubitOutOfRange("cannot compose circuits of width " + std::to_string(first.num_qubits) +
                          " and " + std::to_string(second.num_qubits));
  }
  QuantumCircuit out = first;
  const int in_off = first.num_inputs();
  const int par_off = first.num_params();
  for (const auto& name : second.input_names) out.input_names.push_back(name);
  for (const auto& name : second.param_names) out.param_names.push_back(name);
  for (Gate g : second.gates) {
    switch (g.angle.form) {
      case AngleExpr::Form::Input: g.angle.a += in_off; break;
      case AngleExpr::Form::PairProduct:
        g.angle.a += in_off;
        g.angle.b += in_off;
        break;
      case AngleExpr::Form::Param: g.angle.a += par_off; break;
      default: break;
    }
    out.gates.push_back(g);
  }
  return out;
}

void validate(const QuantumCircuit& c) {
  if (c.num_qubits < 1 || c.num_qubits > kMaxQubits) {
    throw QubitOutOfRange("circuit width " + std::to_string(c.num_qubits) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  for (const Gate& g : c.gates) {
    check_qubit(g.target, c.num_qubits);
    if (g.kind == GateKind::CX) {
      check_qubit(g.control, c.num_qubits);
      if (g.control == g.target) throw QubitOutOfRange("cx control equals target");
    }
    switch (g.angle.form) {
      case AngleExpr::Form::Input: check_symbol(g.angle.a, c.num_inputs(), "input"); break;
      case AngleExpr::Form::PairProduct:
        check_symbol(g.angle.a, c.num_inputs(), "input");
        check_symbol(g.angle.b, c.num_inputs(), "input");
        break;
      case AngleExpr::Form::Param: check_symbol(g.angle.a, c.num_params(), "parameter"); break;
      default: break;
    }
  }
}

void check_shift_support(const QuantumCircuit& c) {
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (!g.angle.is_constant() && !is_rotation(g.kind)) {
      throw UnsupportedGateForShift("gate " + std::to_string(i) + " (" + gate_name(g.kind) +
                                    ") carries a symbolic angle");
    }
  }
}

Statevector::Statevector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw QubitOutOfRange("statevector width " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << num_qubits, cplx(0.0, 0.0));
  amps_[0] = 1.0;
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return s;
}

void Statevector::apply(GateKind kind, int target, int control, double angle) {
  check_qubit(target, n_);
  switch (kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      apply_1q(target, r, r, r, -r);
      break;
    }
    case GateKind::RX: {
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      apply_1q(target, c, cplx(0, -s), cplx(0, -s), c);
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      apply_1q(target, c, -s, s, c);
      break;
    }
    case GateKind::RZ:
      apply_diag(target, std::polar(1.0, -angle / 2), std::polar(1.0, angle / 2));
      break;
    case GateKind::P: apply_diag(target, 1.0, std::polar(1.0, angle)); break;
    case GateKind::CX:
      check_qubit(control, n_);
      apply_cx(control, target);
      break;
  }
}

void Statevector::apply_1q(int q, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps_[i], a1 = amps_[i + stride];
      amps_[i] = m00 * a0 + m01 * a1;
      amps_[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void Statevector::apply_diag(int q, cplx d0, cplx d1) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? d1 : d0;
}

void Statevector::apply_cx(int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }
}

Statevector run(const QuantumCircuit& circuit, std::span<const double> inputs,
                std::span<const double> params) {
  validate(circuit);
  check_binding(circuit, inputs, params);
  Statevector s(circuit.num_qubits);
  apply_range(s, circuit, bind_angles(circuit, inputs, params), 0, circuit.gates.size());
  return s;
}

double expect_z(const Statevector& state, int qubit) {
  check_qubit(qubit, state.num_qubits());
  const std::size_t bit = std::size_t{1} << qubit;
  const auto amps = state.amplitudes();
  double e = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    e += (i & bit) ? -p : p;
  }
  return e;
}

std::vector<double> expect_z(const Statevector& state, std::span<const int> qubits) {
  for (int q : qubits) check_qubit(q, state.num_qubits());
  std::vector<double> e(qubits.size(), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      e[k] += (i >> qubits[k] & 1) ? -p : p;
    }
  }
  return e;
}

std::vector<double> exact_quasi_probs(const Statevector& state, std::span<const int> qubits) {
  for (int q : qubits) check_qubit(q, state.num_qubits());
  const std::size_t k = qubits.size();
  std::vector<double> probs(std::size_t{1} << k, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t outcome = 0;
    for (std::size_t j = 0; j < k; ++j) outcome = (outcome << 1) | ((i >> qubits[j]) & 1);
    probs[outcome] += std::norm(amps[i]);
  }
  return probs;
}

std::vector<double> sample_quasi_probs(const Statevector& state, std::span<const int> qubits,
                                       int shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const std::vector<double> exact = exact_quasi_probs(state, qubits);
  std::discrete_distribution<std::size_t> dist(exact.begin(), exact.end());
  std::vector<double> freq(exact.size(), 0.0);
  for (int s = 0; s < shots; ++s) freq[dist(rng)] += 1.0;
  for (double& f : freq) f /= shots;
  return freq;
}

std::vector<double> sample_expect_z(const Statevector& state, std::span<const int> qubits,
                                    int shots, Rng& rng) {
  const std::vector<double> freq = sample_quasi_probs(state, qubits, shots, rng);
  const std::size_t k = qubits.size();
  std::vector<double> e(k, 0.0);
  for (std::size_t outcome = 0; outcome < freq.size(); ++outcome) {
    for (std::size_t j = 0; j < k; ++j) {
      const bool one = (outcome >> (k - 1 - j)) & 1;
      e[j] += one ? -freq[outcome] : freq[outcome];
    }
  }
  return e;
}

double Observable::measure(const Statevector& state) const {
  if (kind == Kind::Z) {
    if (qubits.size() != 1) throw std::invalid_argument("Z observable needs exactly one qubit");
    return expect_z(state, qubits[0]);
  }
  const auto probs = exact_quasi_probs(state, qubits);
  if (component < 0 || static_cast<std::size_t>(component) >= probs.size()) {
    throw std::invalid_argument("quasi-probability component out of range");
  }
  return probs[component];
}

double param_shift_grad(const QuantumCircuit& circuit, std::span<const double> inputs,
                        std::span<const double> params, const Observable& observable,
                        Symbol wrt) {
  const OutputFn f = [&](const Statevector& s) { return std::vector<double>{observable.measure(s)}; };
  const double one = 1.0;
  const bool want_inputs = wrt.kind == Symbol::Kind::Input;
  const ShiftGradient g = param_shift_vjp(circuit, inputs, params, f, std::span(&one, 1),
                                          want_inputs ? inputs.size() : 0, !want_inputs);
  const auto& v = want_inputs ? g.inputs : g.params;
  if (wrt.index < 0 || static_cast<std::size_t>(wrt.index) >= v.size()) {
    throw UnboundSymbol("gradient requested for undeclared symbol " + std::to_string(wrt.index));
  }
  return v[wrt.index];
}

ShiftGradient param_shift_vjp(const QuantumCircuit& circuit, std::span<const double> inputs,
                              std::span<const double> params, const OutputFn& outputs,
                              std::span<const double> weights, std::size_t input_prefix,
                              bool want_params) {
  validate(circuit);
  check_binding(circuit, inputs, params);
  check_shift_support(circuit);

  ShiftGradient grad;
  input_prefix = std::min(input_prefix, inputs.size());
  grad.inputs.assign(input_prefix, 0.0);
  auto wanted_input = [&](int i) { return i >= 0 && static_cast<std::size_t>(i) < input_prefix; };
  grad.params.assign(want_params ? params.size() : 0, 0.0);

  const std::vector<double> angles = bind_angles(circuit, inputs, params);
  const std::size_t n_gates = circuit.gates.size();

  auto weighted = [&](const Statevector& s) {
    const std::vector<double> out = outputs(s);
    if (out.size() != weights.size()) {
      throw std::invalid_argument("output weights do not match observable count");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) acc += weights[k] * out[k];
    return acc;
  };

  // `prefix` holds the state just before gate g, so each shifted run only
  // replays the suffix.
  Statevector prefix(circuit.num_qubits);
  std::vector<double> shifted = angles;
  for (std::size_t g = 0; g < n_gates; ++g) {
    const Gate& gate = circuit.gates[g];
    const AngleExpr& e = gate.angle;
    const bool relevant =
        (e.form == AngleExpr::Form::Param && want_params) ||
        (e.form == AngleExpr::Form::Input && wanted_input(e.a)) ||
        (e.form == AngleExpr::Form::PairProduct && (wanted_input(e.a) || wanted_input(e.b)));
    if (relevant) {
      double f[2];
      for (int side = 0; side < 2; ++side) {
        shifted[g] = angles[g] + (side == 0 ? kPi / 2 : -kPi / 2);
        Statevector s = prefix;
        apply_range(s, circuit, shifted, g, n_gates);
        f[side] = weighted(s);
      }
      shifted[g] = angles[g];
      const double d_angle = 0.5 * (f[0] - f[1]);
      if (e.form == AngleExpr::Form::Param) {
        grad.params[e.a] += e.partial(Symbol::param(e.a), inputs, params) * d_angle;
      } else {
        if (wanted_input(e.a)) {
          grad.inputs[e.a] += e.partial(Symbol::input(e.a), inputs, params) * d_angle;
        }
        if (e.form == AngleExpr::Form::PairProduct && e.b != e.a && wanted_input(e.b)) {
          grad.inputs[e.b] += e.partial(Symbol::input(e.b), inputs, params) * d_angle;
        }
      }
    }
    prefix.apply(gate.kind, gate.target, gate.control, angles[g]);
  }
  return grad;
}

std::string format_angle(const AngleExpr& e, const QuantumCircuit& c) {
  auto name_in = [&](int i) { return i >= 0 && i < c.num_inputs() ? c.input_names[i] : "x?"; };
  auto name_par = [&](int j) { return j >= 0 && j < c.num_params() ? c.param_names[j] : "t?"; };
  std::string term;
  switch (e.form) {
    case AngleExpr::Form::Constant: return format_number(e.offset);
    case AngleExpr::Form::Input: term = name_in(e.a); break;
    case AngleExpr::Form::Param: term = name_par(e.a); break;
    case AngleExpr::Form::PairProduct:
      term = "(pi-" + name_in(e.a) + ")*(pi-" + name_in(e.b) + ")";
      break;
  }
  std::string s = e.scale == 1.0 ? term : format_number(e.scale) + "*" + term;
  if (e.offset != 0.0) s = format_number(e.offset) + "+" + s;
  return s;
}

std::string dump(const QuantumCircuit& c) {
  std::ostringstream os;
  os << "qubits " << c.num_qubits << " inputs " << c.num_inputs() << " params "
     << c.num_params() << '\n';
  for (const Gate& g : c.gates) {
    os << gate_name(g.kind);
    if (g.kind == GateKind::CX) {
      os << ' ' << g.control << ' ' << g.target;
    } else {
      os << ' ' << g.target;
    }
    if (is_rotation(g.kind)) os << ' ' << format_angle(g.angle, c);
    os << '\n';
  }
  return os.str();
}

}  // namespace qttt::qsim
