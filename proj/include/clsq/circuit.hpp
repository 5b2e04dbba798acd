// Copyright 2026 The clsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clsq/classical_ensemble.hpp"
#include "clsq/core.hpp"
#include "clsq/evolution.hpp"
#include "clsq/generator_basis.hpp"
#include "clsq/measurement.hpp"
#include "clsq/observables.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

/// Registers larger than this do not fit the default basis budget.
inline constexpr int kMaxCircuitQubits = 3;

struct GateSpec {
  std::string name;
  std::vector<int> targets;
  int line = 0;
};

struct Circuit {
  int num_qubits = 0;
  std::optional<RVector> init_bloch;  // empty: all qubits 0
  std::vector<GateSpec> gates;
  std::vector<int> readout;  // 1-based; empty means every qubit
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline int parse_int(const std::string& tok, int line, const char* what) {
  int v = 0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  return v;
}

inline double parse_double(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected number, got '" + tok + "'");
  }
}

inline int parse_qubit(const std::string& tok, int line, int num_qubits) {
  const int q = parse_int(tok, line, "qubit index");
  if (q < 1 || q > num_qubits)
    throw ParseError(line, "qubit " + tok + " out of range 1.." + std::to_string(num_qubits));
  return q;
}

}  // namespace detail

/**
 * Circuit text format, one instruction per line, '#' starts a comment:
 *
 *   QUBITS <Q>
 *   INIT ZERO | INIT BLOCH <4^Q - 1 numbers>
 *   GATE H <q> | GATE P4 <q> | GATE CNOT <control> <target>
 *   READOUT <q> [<q> ...]
 *
 * QUBITS must come first. Throws ParseError with the offending line.
 */
inline Circuit parse_circuit(std::istream& in) {
  Circuit c;
  std::string raw;
  int line = 0;
  bool have_init = false, have_readout = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "QUBITS") {
      if (c.num_qubits != 0) throw ParseError(line, "QUBITS given twice");
      if (tok.size() != 2) throw ParseError(line, "QUBITS takes one argument");
      const int q = detail::parse_int(tok[1], line, "qubit count");
      if (q < 1 || q > kMaxCircuitQubits)
        throw ParseError(line, "qubit count must be in 1.." + std::to_string(kMaxCircuitQubits));
      c.num_qubits = q;
      continue;
    }
    if (c.num_qubits == 0) throw ParseError(line, "QUBITS must be declared first");
    if (kw == "INIT") {
      if (have_init) throw ParseError(line, "INIT given twice");
      if (!c.gates.empty()) throw ParseError(line, "INIT must precede gates");
      have_init = true;
      if (tok.size() == 2 && tok[1] == "ZERO") continue;
      if (tok.size() >= 2 && tok[1] == "BLOCH") {
        const long long m = 1LL << c.num_qubits;
        const long long n = m * m - 1;
        if (static_cast<long long>(tok.size()) - 2 != n)
          throw ParseError(line, "INIT BLOCH needs " + std::to_string(n) + " numbers, got " +
                                     std::to_string(tok.size() - 2));
        RVector v(n);
        for (long long k = 0; k < n; ++k) v(k) = detail::parse_double(tok[2 + k], line);
        c.init_bloch = std::move(v);
        continue;
      }
      throw ParseError(line, "expected INIT ZERO or INIT BLOCH <numbers>");
    }
    if (kw == "GATE") {
      if (tok.size() < 2) throw ParseError(line, "GATE needs a gate name");
      GateSpec g{tok[1], {}, line};
      if (g.name == "H" || g.name == "P4") {
        if (tok.size() != 3) throw ParseError(line, g.name + " takes one qubit");
        g.targets.push_back(detail::parse_qubit(tok[2], line, c.num_qubits));
      } else if (g.name == "CNOT") {
        if (tok.size() != 4) throw ParseError(line, "CNOT takes a control and a target");
        g.targets.push_back(detail::parse_qubit(tok[2], line, c.num_qubits));
        g.targets.push_back(detail::parse_qubit(tok[3], line, c.num_qubits));
        if (g.targets[0] == g.targets[1]) throw ParseError(line, "CNOT control equals target");
      } else {
        throw ParseError(line, "unknown gate '" + g.name + "'");
      }
      c.gates.push_back(std::move(g));
      continue;
    }
    if (kw == "READOUT") {
      if (have_readout) throw ParseError(line, "READOUT given twice");
      if (tok.size() < 2) throw ParseError(line, "READOUT needs at least one qubit");
      have_readout = true;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const int q = detail::parse_qubit(tok[i], line, c.num_qubits);
        for (int prev : c.readout)
          if (prev == q) throw ParseError(line, "qubit " + tok[i] + " read out twice");
        c.readout.push_back(q);
      }
      continue;
    }
    throw ParseError(line, "unknown instruction '" + kw + "'");
  }
  if (c.num_qubits == 0) throw ParseError(line, "missing QUBITS declaration");
  return c;
}

inline Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  return parse_circuit(is);
}

/// The state with every qubit at tau_3 = -1.
inline BlochState zero_state(int num_qubits) {
  const auto basis = shared_basis(num_qubits);
  const int m = basis->dim();
  return bloch_from_density(density_from_wavefunction(WaveFunction::basis_vector(m, m - 1)),
                            basis);
}

/// tau_3 on qubit q (1-based) as a basis observable.
inline QuantumObservable qubit_readout(int q, int num_qubits) {
  const auto basis = shared_basis(num_qubits);
  const auto [k, sign] = basis->find(PauliString::single(num_qubits, q - 1, Pauli::Z));
  if (k < 0) throw InvalidArgument("no basis generator for qubit readout");
  RVector e = RVector::Zero(basis->size());
  e(k) = sign;
  return QuantumObservable(std::move(e), 0.0, basis);
}

struct GateAudit {
  int index = 0;  // 0 is the initial state
  std::string name;
  double purity = 0.0;
  double min_eigenvalue = 0.0;
  bool pass = false;
};

struct QubitReadout {
  int qubit = 0;
  double expectation = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
};

struct PairReadout {
  int first = 0;
  int second = 0;
  double correlation = 0.0;  // measurement correlation
  JointProbabilities joint;
};

struct CircuitReport {
  BlochState initial;
  BlochState final_state;
  std::vector<GateAudit> audit;
  std::vector<QubitReadout> qubits;
  std::vector<PairReadout> pairs;
};

/**
 * Runs the gates in order as Bloch rotations and reads out the requested
 * qubits. Positivity and purity are audited after every gate; a failing
 * audit throws ValidationError naming the gate.
 */
inline CircuitReport run_circuit(const Circuit& c, double eps = tol::kPositivity) {
  const auto basis = shared_basis(c.num_qubits);
  BlochState state = c.init_bloch ? BlochState(*c.init_bloch, basis) : zero_state(c.num_qubits);
  const BlochState initial = state;
  std::vector<GateAudit> audit;
  const double p0 = purity(state);
  auto check = [&](int index, const std::string& name) {
    const auto pos = positivity_check(state, eps);
    GateAudit a{index, name, purity(state), pos.min_eigenvalue, pos.pass};
    if (index > 0 && std::abs(a.purity - p0) > 1e-9) a.pass = false;
    audit.push_back(a);
    if (!a.pass)
      throw ValidationError(index == 0 ? "audit failed for the initial state (min eigenvalue " +
                                             std::to_string(a.min_eigenvalue) + ")"
                                       : "audit failed after gate " + std::to_string(index) +
                                             " (" + name + ")");
  };
  check(0, "init");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate g = gate(c.gates[i].name, c.gates[i].targets, c.num_qubits);
    state = BlochState(g.S * state.rho(), basis);
    check(static_cast<int>(i + 1), c.gates[i].name);
  }
  std::vector<int> ro = c.readout;
  if (ro.empty())
    for (int q = 1; q <= c.num_qubits; ++q) ro.push_back(q);
  const DensityMatrix rho = density_from_bloch(state);
  CircuitReport rep{initial, state, std::move(audit), {}, {}};
  for (int q : ro) {
    const auto obs = qubit_readout(q, c.num_qubits);
    const double e = rho.expect(obs.op()).real();
    rep.qubits.push_back({q, e, 0.5 * (1.0 + e), 0.5 * (1.0 - e)});
  }
  for (std::size_t i = 0; i < ro.size(); ++i)
    for (std::size_t j = i + 1; j < ro.size(); ++j) {
      const auto a = qubit_readout(ro[i], c.num_qubits);
      const auto b = qubit_readout(ro[j], c.num_qubits);
      rep.pairs.push_back({ro[i], ro[j], measurement_correlation(rho, a, b),
                           joint_outcome_probabilities(rho, a, b)});
    }
  return rep;
}

struct BridgeResult {
  ClassicalDistribution dist;
  std::string warning;
};

/**
 * Evolves a classical ensemble through one Bloch rotation: p_s is rebuilt
 * from the rotated marginals, delta_p_e is kept if the range condition still
 * holds, otherwise halved up to 60 times and finally reset to zero.
 */
inline BridgeResult ensemble_evolution_bridge(const RMatrix& rotation,
                                              const ClassicalDistribution& dist,
                                              const DirectionSet& dirs) {
  const BlochState before = marginal_bloch(dist, dirs);
  if (rotation.rows() != before.size() || rotation.cols() != before.size())
    throw InvalidArgument("rotation does not match the register");
  const BlochState after(rotation * before.rho(), dirs.basis_ptr());
  BridgeResult out{system_distribution(after, dirs), {}};
  RVector delta = dist.delta;
  const RVector ps = out.dist.system();
  for (int it = 0; it <= 60; ++it) {
    const RVector total = ps + delta;
    if (total.minCoeff() >= 0.0 && total.maxCoeff() <= 1.0) {
      out.dist.delta = delta;
      if (it > 0) out.warning = "environment rescaled to keep probabilities in range";
      return out;
    }
    delta *= 0.5;
  }
  out.warning = "environment could not be carried through the gate; reset to zero";
  return out;
}

}  // namespace clsq
