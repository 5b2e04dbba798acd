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

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/generator_basis.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

/// Default integration resolution.
inline constexpr int kStepsPerUnitTime = 1000;

/** d rho_k / dt = T_kl rho_l + D rho_k, T antisymmetric. */
struct RotationGenerator {
  RMatrix T;
  double D = 0.0;

  void validate() const {
    if (T.rows() != T.cols()) throw InvalidArgument("generator must be square");
    if (!T.allFinite() || !std::isfinite(D)) throw InvalidArgument("non-finite generator entries");
    if (T.size() > 0 && (T + T.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidArgument("rotation generator is not antisymmetric");
  }
};

/// T_kl = -2 f_klm H_m; the shift H0 only contributes a global phase.
inline RotationGenerator rotation_from_hamiltonian(const RVector& h, double /*h0*/,
                                                   const GeneratorBasis& basis) {
  const int n = basis.size();
  if (h.size() != n) throw InvalidArgument("Hamiltonian length != basis size");
  RotationGenerator g{RMatrix::Zero(n, n), 0.0};
  for (int m = 0; m < n; ++m) {
    if (h(m) == 0.0) continue;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) g.T(k, l) -= 2.0 * basis.f(k, l, m) * h(m);
  }
  return g;
}

/// Fixed-step RK4 for d rho / dt = (T + D) rho over time t.
inline RVector evolve(const RVector& rho0, const RotationGenerator& gen, double t, int steps) {
  if (steps < 1) throw InvalidArgument("step count must be >= 1");
  gen.validate();
  if (gen.T.rows() != rho0.size()) throw InvalidArgument("generator/state size mismatch");
  const RMatrix a = gen.T + gen.D * RMatrix::Identity(gen.T.rows(), gen.T.cols());
  const double dt = t / steps;
  RVector y = rho0;
  for (int s = 0; s < steps; ++s) {
    const RVector k1 = a * y;
    const RVector k2 = a * (y + 0.5 * dt * k1);
    const RVector k3 = a * (y + 0.5 * dt * k2);
    const RVector k4 = a * (y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

inline BlochState evolve(const BlochState& state, const RotationGenerator& gen, double t,
                         int steps) {
  return BlochState(evolve(state.rho(), gen, t, steps), state.basis_ptr());
}

/// Linear map acting on rho - 1/M; must return hermitian traceless matrices.
using DensityMap = std::function<Matrix(const Matrix&)>;

/**
 * d rho / dt = -i [H, rho] + R(rho - 1/M) + D (rho - 1/M), RK4. Throws
 * ValidationError if R breaks hermiticity or trace.
 */
inline DensityMatrix evolve_density(const DensityMatrix& rho0, const Matrix& h,
                                    const DensityMap& r, double d, double t, int steps) {
  if (steps < 1) throw InvalidArgument("step count must be >= 1");
  const int m = rho0.dim();
  if (h.rows() != m || !is_hermitian(h, 1e-12)) throw InvalidArgument("H must be hermitian MxM");
  const Matrix mix = Matrix::Identity(m, m) / static_cast<double>(m);
  auto rhs = [&](const Matrix& rho) {
    const Matrix dev = rho - mix;
    Matrix out = -kI * commutator(h, rho) + d * dev;
    if (r) {
      const Matrix rr = r(dev);
      if (rr.rows() != m || !is_hermitian(rr, 1e-10) || std::abs(rr.trace()) > 1e-10)
        throw ValidationError("environment map breaks hermiticity or trace");
      out += rr;
    }
    return out;
  };
  const double dt = t / steps;
  Matrix y = rho0.mat();
  for (int s = 0; s < steps; ++s) {
    const Matrix k1 = rhs(y);
    const Matrix k2 = rhs(y + 0.5 * dt * k1);
    const Matrix k3 = rhs(y + 0.5 * dt * k2);
    const Matrix k4 = rhs(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!is_hermitian(y, 1e-9) || std::abs(y.trace() - Complex(1.0, 0.0)) > 1e-9)
    throw ValidationError("evolved density matrix lost hermiticity or unit trace");
  return DensityMatrix(0.5 * (y + y.adjoint()));
}

/// S_kl = tr(L_k U L_l U^dagger) / M
inline RMatrix rotation_from_unitary(const Matrix& u, const GeneratorBasis& basis) {
  if (u.rows() != basis.dim() || !is_unitary(u))
    throw InvalidArgument("rotation_from_unitary needs a unitary of the basis dimension");
  const int n = basis.size();
  RMatrix s(n, n);
  const Matrix ud = u.adjoint();
  for (int l = 0; l < n; ++l) {
    const Matrix conj = u * basis.generator(l) * ud;
    for (int k = 0; k < n; ++k) {
      const Complex v = trace_of_product(basis.generator(k), conj) / static_cast<double>(basis.dim());
      if (std::abs(v.imag()) > 1e-10) throw ValidationError("complex rotation entry");
      s(k, l) = v.real();
    }
  }
  return s;
}

struct Gate {
  std::string name;
  std::vector<int> targets;  // 1-based qubit indices
  RMatrix S;
  Matrix U;
};

namespace detail {

inline Matrix embed_single(const Matrix& u, int qubit, int num_qubits) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 1; q <= num_qubits; ++q)
    out = kron(out, q == qubit ? u : Matrix::Identity(2, 2));
  return out;
}

inline Matrix controlled_not(int control, int target, int num_qubits) {
  Matrix p0(2, 2), p1(2, 2), x(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  x << 0, 1, 1, 0;
  Matrix a = Matrix::Identity(1, 1);
  Matrix b = Matrix::Identity(1, 1);
  for (int q = 1; q <= num_qubits; ++q) {
    const Matrix id = Matrix::Identity(2, 2);
    a = kron(a, q == control ? p0 : id);
    b = kron(b, q == control ? p1 : (q == target ? x : id));
  }
  return a + b;
}

}  // namespace detail

inline Matrix hadamard_unitary() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

/// Phase gate diag(1, e^{-i pi/4}); rotates (rho1, rho2) by +pi/4 toward rho1 + rho2.
inline Matrix phase4_unitary() {
  Matrix p(2, 2);
  p << 1, 0, 0, std::polar(1.0, -std::numbers::pi / 4.0);
  return p;
}

/**
 * Gate by name: "H" and "P4" on one qubit, "CNOT" on (control, target).
 * The Bloch rotation is always derived from the full register unitary.
 */
inline Gate gate(const std::string& name, const std::vector<int>& targets, int num_qubits) {
  auto check = [&](int q) {
    if (q < 1 || q > num_qubits)
      throw InvalidArgument("qubit " + std::to_string(q) + " out of range 1.." +
                            std::to_string(num_qubits));
  };
  Gate g{name, targets, {}, {}};
  if (name == "H" || name == "P4") {
    if (targets.size() != 1) throw InvalidArgument(name + " takes exactly one qubit");
    check(targets[0]);
    g.U = detail::embed_single(name == "H" ? hadamard_unitary() : phase4_unitary(), targets[0],
                               num_qubits);
  } else if (name == "CNOT") {
    if (targets.size() != 2) throw InvalidArgument("CNOT takes a control and a target qubit");
    check(targets[0]);
    check(targets[1]);
    if (targets[0] == targets[1]) throw InvalidArgument("CNOT control equals target");
    g.U = detail::controlled_not(targets[0], targets[1], num_qubits);
  } else {
    throw InvalidArgument("unknown gate '" + name + "'");
  }
  g.S = rotation_from_unitary(g.U, *shared_basis(num_qubits));
  return g;
}

/// Generator of the continuous single-qubit Hadamard rotation at angular rate phi_dot.
inline RotationGenerator hadamard_generator(double phi_dot) {
  RMatrix k(3, 3);
  k << 0, 1, 0, -1, 0, 1, 0, -1, 0;
  return {std::sqrt(2.0) * phi_dot * k, 0.0};
}

struct PrecessionSample {
  double t = 0.0;
  double phi = 0.0;
  double integrated = 0.0;   // rho_3(t) from evolve()
  double closed_form = 0.0;  // sin^2 phi rho1 - sqrt2 sin phi cos phi rho2 + cos^2 phi rho3
};

/**
 * <A(t)> = rho_3(t) for a single qubit under the continuous Hadamard
 * rotation with phi = pi t / (2 duration), sampled at `samples` + 1 equally
 * spaced times in [0, duration].
 */
inline std::vector<PrecessionSample> precession_trajectory(const BlochState& rho0,
                                                           double duration, int samples,
                                                           int steps_per_unit = kStepsPerUnitTime) {
  if (rho0.size() != 3) throw InvalidArgument("precession needs a single-qubit state");
  if (samples < 1 || duration <= 0.0) throw InvalidArgument("bad sampling parameters");
  const double rate = std::numbers::pi / (2.0 * duration);
  const RotationGenerator gen = hadamard_generator(rate);
  std::vector<PrecessionSample> out;
  for (int i = 0; i <= samples; ++i) {
    const double t = duration * i / samples;
    const double phi = rate * t;
    const int steps = std::max(1, static_cast<int>(std::ceil(t * steps_per_unit)));
    const RVector r = evolve(rho0.rho(), gen, t, steps);
    const double s = std::sin(phi), c = std::cos(phi);
    out.push_back({t, phi, r(2),
                   s * s * rho0[0] - std::sqrt(2.0) * s * c * rho0[1] + c * c * rho0[2]});
  }
  return out;
}

}  // namespace clsq
