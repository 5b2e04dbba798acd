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
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/generator_basis.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

/**
 * A quantum observable: the operator A = e0 + e_k L_k together with its
 * ordered spectrum and diagonalizer.
 *
 * Slots are ordered by descending eigenvalue (ties in solver order), the
 * same convention the classical ensemble uses for direction labels.
 */
class QuantumObservable {
 public:
  QuantumObservable(RVector e, double e0, std::shared_ptr<const GeneratorBasis> basis)
      : e_(std::move(e)), e0_(e0), basis_(std::move(basis)) {
    if (!basis_) throw InvalidArgument("null basis");
    if (e_.size() != basis_->size()) throw InvalidArgument("direction length != basis size");
    if (!e_.allFinite() || !std::isfinite(e0_)) throw InvalidArgument("non-finite direction");
    const int m = basis_->dim();
    op_ = e0_ * Matrix::Identity(m, m) + basis_->expand(e_);
    eig_ = sorted_eigen(op_);
  }

  /// Projects a hermitian operator onto the basis: e_k = tr(A L_k)/M, e0 = tr(A)/M.
  static QuantumObservable from_operator(const Matrix& op,
                                         std::shared_ptr<const GeneratorBasis> basis) {
    if (op.rows() != basis->dim() || !is_hermitian(op, 1e-10))
      throw InvalidArgument("operator is not a hermitian matrix of the basis dimension");
    const double e0 = op.trace().real() / basis->dim();
    RVector e = basis->coefficients(op);
    return QuantumObservable(std::move(e), e0, std::move(basis));
  }

  /// The basis observable A^(k), k 0-based.
  static QuantumObservable basis_observable(int k, std::shared_ptr<const GeneratorBasis> basis) {
    RVector e = RVector::Zero(basis->size());
    e(k) = 1.0;
    return QuantumObservable(std::move(e), 0.0, std::move(basis));
  }

  const RVector& e() const { return e_; }
  double e0() const { return e0_; }
  const Matrix& op() const { return op_; }
  int dim() const { return basis_->dim(); }
  const GeneratorBasis& basis() const { return *basis_; }
  const std::shared_ptr<const GeneratorBasis>& basis_ptr() const { return basis_; }

  const RVector& spectrum() const { return eig_.values; }
  const std::vector<EigenLevel>& levels() const { return eig_.levels; }
  /// U with U A U^dagger diagonal in slot order.
  Matrix diagonalizer() const { return eig_.diagonalizer(); }
  const SortedEigen& eigen() const { return eig_; }

  /// A^2 = 1 within tolerance.
  bool is_two_level(double eps = 1e-10) const {
    return max_abs(op_ * op_ - Matrix::Identity(dim(), dim())) <= eps;
  }

 private:
  RVector e_;
  double e0_;
  std::shared_ptr<const GeneratorBasis> basis_;
  Matrix op_;
  SortedEigen eig_;
};

inline QuantumObservable observable_from_direction(const RVector& e, double e0,
                                                   std::shared_ptr<const GeneratorBasis> basis) {
  if (e0 == 0.0 && e.size() > 0 && e.isZero(0.0))
    throw InvalidArgument("observable direction is zero and has no shift");
  return QuantumObservable(e, e0, std::move(basis));
}

/// One (eigenvalue, probability) pair, degenerate slots aggregated.
struct LevelProbability {
  double value = 0.0;
  double probability = 0.0;
};

/// Diagonal of U rho U^dagger in slot order.
inline RVector slot_weights(const SortedEigen& eig, const DensityMatrix& rho) {
  RVector w(eig.values.size());
  for (Eigen::Index a = 0; a < w.size(); ++a)
    w(a) = (eig.vectors.col(a).adjoint() * rho.mat() * eig.vectors.col(a))(0, 0).real();
  return w;
}

/**
 * Born probabilities w_a = (U rho U^dagger)_aa, summed over degenerate slots.
 * Ordered by descending eigenvalue. Throws ValidationError for non-positive rho.
 */
inline std::vector<LevelProbability> born_probabilities(const QuantumObservable& obs,
                                                        const DensityMatrix& rho,
                                                        double eps = tol::kPositivity) {
  if (rho.dim() != obs.dim()) throw InvalidArgument("observable/state dimension mismatch");
  const auto pos = positivity_check(rho, eps);
  if (!pos.pass)
    throw ValidationError("state violates positivity (min eigenvalue " +
                          std::to_string(pos.min_eigenvalue) + ")");
  const RVector w = slot_weights(obs.eigen(), rho);
  std::vector<LevelProbability> out;
  for (const auto& level : obs.levels()) {
    double p = 0.0;
    for (int a : level.slots) p += w(a);
    out.push_back({level.value, std::clamp(p, 0.0, 1.0)});
  }
  return out;
}

/// tr(rho A^p)
inline double moment(const QuantumObservable& obs, const DensityMatrix& rho, int p) {
  if (p < 0) throw InvalidArgument("moment order must be >= 0");
  Matrix power = Matrix::Identity(obs.dim(), obs.dim());
  for (int i = 0; i < p; ++i) power = power * obs.op();
  return rho.expect(power).real();
}

/** Normalized four-point spectrum: sum = 0, sum of squares = 4, descending. */
struct Spectrum4 {
  std::array<double, 4> gamma{};
};

/**
 * Completes (gamma1, gamma2) to a normalized spectrum by solving for gamma3
 * and gamma4; `branch` (+1/-1) picks the sign of gamma3 - gamma4. Requires
 * gamma1^2 + gamma2^2 + (gamma1 + gamma2)^2 / 2 <= 4.
 */
inline Spectrum4 normalized_spectrum(double gamma1, double gamma2, int branch = 1) {
  const double bound = gamma1 * gamma1 + gamma2 * gamma2 + 0.5 * (gamma1 + gamma2) * (gamma1 + gamma2);
  if (bound > 4.0 + 1e-12)
    throw InvalidArgument("spectrum bound violated: g1^2 + g2^2 + (g1+g2)^2/2 = " +
                          std::to_string(bound) + " > 4");
  const double sum34 = -(gamma1 + gamma2);
  const double disc = std::max(0.0, 8.0 - 3.0 * gamma1 * gamma1 - 3.0 * gamma2 * gamma2 -
                                        2.0 * gamma1 * gamma2);
  const double diff34 = (branch >= 0 ? 1.0 : -1.0) * std::sqrt(disc);
  Spectrum4 s;
  s.gamma = {gamma1, gamma2, 0.5 * (sum34 + diff34), 0.5 * (sum34 - diff34)};
  std::sort(s.gamma.begin(), s.gamma.end(), std::greater<>());
  return s;
}

/**
 * e_k e_k = 1 and e_k e_m d_kml = 0 for every l; equivalent to A^2 = 1 for
 * A = e_k L_k.
 */
inline bool two_level_check(const RVector& e, const GeneratorBasis& basis, double eps = 1e-10) {
  if (e.size() != basis.size()) throw InvalidArgument("direction length != basis size");
  if (std::abs(e.squaredNorm() - 1.0) > eps) return false;
  const int n = basis.size();
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (e(k) == 0.0) continue;
      for (int m = 0; m < n; ++m)
        if (e(m) != 0.0) s += e(k) * e(m) * basis.d(k, m, l);
    }
    if (std::abs(s) > eps) return false;
  }
  return true;
}

namespace detail {
inline void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("operator dimension mismatch");
}
}  // namespace detail

/// (AB)_s = {A, B} / 2
inline Matrix product_sym(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b);
  return 0.5 * anticommutator(a, b);
}

/// (AB)_a = -(i/2) [A, B]; hermitian for hermitian inputs.
inline Matrix product_antisym(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b);
  return -0.5 * kI * commutator(a, b);
}

/// A B = (AB)_s + i (AB)_a
inline Matrix product_complex(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b);
  return a * b;
}

inline Matrix product_sym(const QuantumObservable& a, const QuantumObservable& b) {
  return product_sym(a.op(), b.op());
}
inline Matrix product_antisym(const QuantumObservable& a, const QuantumObservable& b) {
  return product_antisym(a.op(), b.op());
}
inline Matrix product_complex(const QuantumObservable& a, const QuantumObservable& b) {
  return product_complex(a.op(), b.op());
}

/**
 * sum_i c_i A_i as a new quantum observable. Directions and shifts combine
 * linearly and the spectrum is recomputed from the summed operator; it is
 * not the set of sums of the input eigenvalues.
 */
inline QuantumObservable linear_combination(const std::vector<double>& coeffs,
                                            const std::vector<QuantumObservable>& obs) {
  if (coeffs.size() != obs.size() || obs.empty())
    throw InvalidArgument("linear_combination needs matching non-empty inputs");
  RVector e = RVector::Zero(obs.front().e().size());
  double e0 = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].basis_ptr() != obs.front().basis_ptr() && obs[i].dim() != obs.front().dim())
      throw InvalidArgument("linear_combination across different bases");
    e += coeffs[i] * obs[i].e();
    e0 += coeffs[i] * obs[i].e0();
  }
  return QuantumObservable(std::move(e), e0, obs.front().basis_ptr());
}

/**
 * A system observable given only by its spectrum and a rule mapping states to
 * outcome probabilities. Its associated operator is the one reproducing <A>
 * on every state; whether it is a quantum observable (<A^p> = tr(rho A^p))
 * is decided by classify_quantum().
 */
struct SystemObservable {
  std::vector<double> spectrum;
  std::function<std::vector<double>(const DensityMatrix&)> probabilities;

  double expectation_power(const DensityMatrix& rho, int p) const {
    const auto w = probabilities(rho);
    double s = 0.0;
    for (std::size_t a = 0; a < spectrum.size(); ++a) s += std::pow(spectrum[a], p) * w.at(a);
    return s;
  }
};

/// The random two-level observable: spectrum +-1 with w = 1/2 in every state.
inline SystemObservable random_observable() {
  return {{1.0, -1.0}, [](const DensityMatrix&) { return std::vector<double>{0.5, 0.5}; }};
}

/// Wraps a quantum observable as a system observable with the Born rule.
inline SystemObservable as_system_observable(const QuantumObservable& obs) {
  std::vector<double> spec;
  for (const auto& l : obs.levels()) spec.push_back(l.value);
  return {spec, [obs](const DensityMatrix& rho) {
            std::vector<double> w;
            for (const auto& lp : born_probabilities(obs, rho)) w.push_back(lp.probability);
            return w;
          }};
}

struct Classification {
  bool quantum = false;
  Matrix op;            // operator fitted from <A> over the probe states
  double max_deviation = 0.0;  // max |<A^2> - tr(rho op^2)| over probes
};

/**
 * Decides whether a system observable is a quantum observable. The operator
 * is fitted from <A> on the probe states (which must span the state space,
 * e.g. the maximally mixed state plus the basis eigenstates), then
 * <A^2> is compared with tr(rho op^2) on the same probes.
 */
inline Classification classify_quantum(const SystemObservable& obs,
                                       const std::vector<DensityMatrix>& probes,
                                       std::shared_ptr<const GeneratorBasis> basis,
                                       double eps = tol::kClassification) {
  const int n = basis->size();
  if (probes.size() < static_cast<std::size_t>(n + 1))
    throw InvalidArgument("classification needs at least n + 1 probe states");
  // <A> = e0 + e . rho  (linear in the Bloch vector); least squares over probes.
  RMatrix design(static_cast<Eigen::Index>(probes.size()), n + 1);
  RVector target(static_cast<Eigen::Index>(probes.size()));
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto b = bloch_from_density(probes[i], basis);
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design.row(static_cast<Eigen::Index>(i)).tail(n) = b.rho().transpose();
    target(static_cast<Eigen::Index>(i)) = obs.expectation_power(probes[i], 1);
  }
  const RVector coef = design.completeOrthogonalDecomposition().solve(target);
  Classification c;
  c.op = coef(0) * Matrix::Identity(basis->dim(), basis->dim()) +
         basis->expand(coef.tail(n));
  const Matrix op2 = c.op * c.op;
  for (const auto& rho : probes) {
    const double dev = std::abs(obs.expectation_power(rho, 2) - rho.expect(op2).real());
    c.max_deviation = std::max(c.max_deviation, dev);
  }
  c.quantum = c.max_deviation <= eps;
  return c;
}

/// Probe set spanning the state space: maximal mixture plus (1 +- L_k)/M.
inline std::vector<DensityMatrix> standard_probes(const GeneratorBasis& basis) {
  std::vector<DensityMatrix> out;
  const int m = basis.dim();
  out.push_back(DensityMatrix::maximally_mixed(m));
  for (int k = 0; k < basis.size(); ++k)
    for (double s : {1.0, -1.0})
      out.emplace_back((Matrix::Identity(m, m) + s * basis.generator(k)) / static_cast<double>(m));
  return out;
}

}  // namespace clsq
