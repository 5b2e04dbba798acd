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

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "clsq/classical_ensemble.hpp"
#include "clsq/core.hpp"
#include "clsq/generator_basis.hpp"
#include "clsq/measurement.hpp"
#include "clsq/pauli_string.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

namespace detail {
inline void require_two_qubits(int dim) {
  if (dim != 4) throw InvalidArgument("two-qubit (M = 4) state required");
}
}  // namespace detail

/// cos(theta) L_1 + sin(theta) L_8: spin of qubit 1 rotated in the 3-1 plane.
inline Matrix rotated_spin_first(double theta) {
  const auto b = shared_basis(2);
  return std::cos(theta) * b->generator(0) + std::sin(theta) * b->generator(7);
}

/// cos(phi) L_2 + sin(phi) L_4: spin of qubit 2 rotated in the 3-1 plane.
inline Matrix rotated_spin_second(double phi) {
  const auto b = shared_basis(2);
  return std::cos(phi) * b->generator(1) + std::sin(phi) * b->generator(3);
}

/// C(theta, phi) = tr({A(theta), B(phi)} rho) / 2
inline double rotated_pair_correlation(const DensityMatrix& rho, double theta, double phi) {
  detail::require_two_qubits(rho.dim());
  return 0.5 *
         rho.expect(anticommutator(rotated_spin_first(theta), rotated_spin_second(phi))).real();
}

/// Same from Bloch components rho_3, rho_6, rho_10, rho_12.
inline double rotated_pair_correlation(const BlochState& s, double theta, double phi) {
  detail::require_two_qubits(s.dim());
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  return ct * cp * s[2] + ct * sp * s[5] + st * cp * s[9] + st * sp * s[11];
}

struct BellReport {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double c1 = 0.0;   // C(theta1, 0)
  double c2 = 0.0;   // C(theta2, 0)
  double c12 = 0.0;  // C(theta1, theta2)
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
};

/// |C(t1,0) - C(t2,0)| <= 1 + C(t1,t2); violated when lhs > rhs + 1e-12.
inline BellReport bell_check(const DensityMatrix& rho, double theta1, double theta2) {
  BellReport r;
  r.theta1 = theta1;
  r.theta2 = theta2;
  r.c1 = rotated_pair_correlation(rho, theta1, 0.0);
  r.c2 = rotated_pair_correlation(rho, theta2, 0.0);
  r.c12 = rotated_pair_correlation(rho, theta1, theta2);
  r.lhs = std::abs(r.c1 - r.c2);
  r.rhs = 1.0 + r.c12;
  r.violated = r.lhs > r.rhs + 1e-12;
  return r;
}

/// N x N grid over [lo, hi]^2 with both endpoints included, rows by theta1.
inline std::vector<BellReport> bell_scan(const DensityMatrix& rho, int n, double lo = 0.0,
                                         double hi = std::numbers::pi / 2.0) {
  if (n < 1) throw InvalidArgument("grid size must be >= 1");
  std::vector<BellReport> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  const double step = n > 1 ? (hi - lo) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(bell_check(rho, lo + i * step, lo + j * step));
  return out;
}

/// Largest lhs - rhs in a scan.
inline BellReport max_violation(const std::vector<BellReport>& scan) {
  if (scan.empty()) throw InvalidArgument("empty scan");
  const BellReport* best = &scan.front();
  for (const auto& r : scan)
    if (r.lhs - r.rhs > best->lhs - best->rhs) best = &r;
  return *best;
}

struct Singlet {
  BlochState bloch;
  WaveFunction psi;
};

/**
 * Pure state with rho_3 = -1, rho_12 = -eps, rho_14 = eps: for eps = +1 the
 * wave function (psi_2 - psi_3)/sqrt2, for eps = -1 (psi_2 + psi_3)/sqrt2.
 */
inline Singlet singlet_state(int epsilon) {
  if (epsilon != 1 && epsilon != -1) throw InvalidArgument("epsilon must be +1 or -1");
  CVector v = CVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -static_cast<double>(epsilon) / std::sqrt(2.0);
  WaveFunction psi(v);
  BlochState b = bloch_from_density(density_from_wavefunction(psi), shared_basis(2));
  return {std::move(b), std::move(psi)};
}

/**
 * w_{g e} = (1 + g<T1> + e<T2> + g e<T3>) / 4 for a bit chain: T1, T2, T3
 * pairwise commuting two-level operators with T1 T2 = T3.
 */
inline JointProbabilities bit_chain_joint_probabilities(const DensityMatrix& rho, const Matrix& t1,
                                                        const Matrix& t2, const Matrix& t3,
                                                        double eps = 1e-10) {
  const std::array<const Matrix*, 3> t{&t1, &t2, &t3};
  const int m = rho.dim();
  for (const Matrix* x : t)
    if (x->rows() != m || max_abs((*x) * (*x) - Matrix::Identity(m, m)) > eps)
      throw InvalidArgument("bit chain members must be two-level operators of the state dimension");
  if (max_abs(commutator(t1, t2)) > eps || max_abs(commutator(t1, t3)) > eps ||
      max_abs(commutator(t2, t3)) > eps)
    throw InvalidArgument("bit chain members do not commute");
  if (max_abs(t1 * t2 - t3) > eps) throw InvalidArgument("bit chain is not closed: T1 T2 != T3");
  const double e1 = rho.expect(t1).real(), e2 = rho.expect(t2).real(),
               e3 = rho.expect(t3).real();
  JointProbabilities j;
  for (int g : {1, -1})
    for (int e : {1, -1}) {
      const double w = 0.25 * (1.0 + g * e1 + e * e2 + g * e * e3);
      if (w < -eps) throw ValidationError("negative bit chain probability");
      j.at(g, e) = w;
    }
  return j;
}

struct ChainValidation {
  bool pass = false;
  std::array<double, 4> deviation{};  // <T1.T2>-<T3>, <T1.T3>-<T2>, <T2.T3>-<T1>, <T1.T2.T3>-1
};

/// Pointwise product conditions for a comeasurable bit chain.
inline ChainValidation comeasurable_chain_validate(const ClassicalDistribution& dist,
                                                   const RVector& t1, const RVector& t2,
                                                   const RVector& t3, double eps = 1e-10) {
  ChainValidation v;
  auto ex = [&](const RVector& x) { return classical_expectation(x, dist, 1); };
  v.deviation[0] = classical_correlation(t1, t2, dist) - ex(t3);
  v.deviation[1] = classical_correlation(t1, t3, dist) - ex(t2);
  v.deviation[2] = classical_correlation(t2, t3, dist) - ex(t1);
  v.deviation[3] = ex(t1.cwiseProduct(t2).cwiseProduct(t3)) - 1.0;
  v.pass = true;
  for (double d : v.deviation)
    if (std::abs(d) > eps) v.pass = false;
  return v;
}

struct BitChain {
  std::string name;
  std::vector<PauliString> members;  // X1, X2, X3, X2X3, X1X3, X1X2, X1X2X3
  bool commuting = false;
  bool closed = false;
  double numeric_commutator = 0.0;  // max |[Ti, Tj]| over member matrices
};

struct StraumannReport {
  std::vector<BitChain> chains;
  PauliString c_top;          // C1 C2 C3
  PauliString q_top;          // F G H tops multiplied as operators
  PauliString classical_top;  // same product with phases dropped (classical values commute)
  bool sign_clash = false;
  double numeric_deviation = 0.0;  // |Q_top + C_top| as matrices
  std::string conclusion;
};

/// Complete three-bit chain generated by three commuting members.
inline BitChain make_chain(const std::string& name, const PauliString& x1, const PauliString& x2,
                           const PauliString& x3) {
  BitChain c{name, {x1, x2, x3, x2 * x3, x1 * x3, x1 * x2, x1 * x2 * x3}, true, true, 0.0};
  const auto& mem = c.members;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    if (!mem[i].is_hermitian() || !(mem[i] * mem[i]).is_identity() ||
        (mem[i] * mem[i]).phase() != 0)
      c.closed = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (!mem[i].commutes_with(mem[j])) c.commuting = false;
      c.numeric_commutator = std::max(
          c.numeric_commutator, max_abs(commutator(mem[i].to_matrix(), mem[j].to_matrix())));
    }
  }
  // X_j times its partner gives the top; the partners multiply among themselves.
  for (int j = 0; j < 3; ++j)
    if (!(mem[static_cast<std::size_t>(j)] * mem[static_cast<std::size_t>(j + 3)] == mem[6]))
      c.closed = false;
  if (!(mem[3] * mem[4] == mem[5])) c.closed = false;
  return c;
}

/**
 * Three-qubit chain construction: C (tau_3 on each qubit), A (tau_1),
 * B (tau_2), the mixed F, G, H chains and the Q chain built from their tops.
 * Exact Pauli-string arithmetic exhibits Q_top = -C_top.
 */
inline StraumannReport straumann_demo() {
  auto s = [](const char* t) { return PauliString::parse(t); };
  const auto c1 = s("ZII"), c2 = s("IZI"), c3 = s("IIZ");
  const auto a1 = s("XII"), a2 = s("IXI"), a3 = s("IIX");
  const auto b1 = s("YII"), b2 = s("IYI"), b3 = s("IIY");
  StraumannReport r;
  r.chains.push_back(make_chain("C", c1, c2, c3));
  r.chains.push_back(make_chain("A", a1, a2, a3));
  r.chains.push_back(make_chain("B", b1, b2, b3));
  r.chains.push_back(make_chain("F", c1, a2, a3));
  r.chains.push_back(make_chain("G", a1, c2, a3));
  r.chains.push_back(make_chain("H", a1, a2, c3));
  const PauliString f_top = r.chains[3].members[6];
  const PauliString g_top = r.chains[4].members[6];
  const PauliString h_top = r.chains[5].members[6];
  r.chains.push_back(make_chain("Q", f_top, g_top, h_top));
  r.c_top = r.chains[0].members[6];
  r.q_top = r.chains[6].members[6];
  // Classical values commute and square to one, so C1 A2 A3 . A1 C2 A3 . A1 A2 C3 = C1 C2 C3.
  r.classical_top = PauliString(r.q_top.letters(), 0);
  r.sign_clash = r.q_top == r.c_top.negated() && r.classical_top == r.c_top;
  r.numeric_deviation = max_abs(r.q_top.to_matrix() + r.c_top.to_matrix());
  r.conclusion = r.sign_clash
                     ? "Q chain top equals minus the C chain top: the seven chains cannot all be "
                       "comeasurable bit chains at once"
                     : "no sign clash found";
  return r;
}

}  // namespace clsq
