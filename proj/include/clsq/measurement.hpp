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
#include <optional>
#include <string>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/observables.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

/// Conditioning weights at or below this are treated as zero.
inline constexpr double kZeroWeight = 1e-12;

namespace detail {

inline void require_two_level(const QuantumObservable& obs) {
  if (!obs.is_two_level())
    throw UnsupportedError(
        "measurement sequences need two-level observables (A^2 = 1); observables with more "
        "than two values are not supported");
}

inline void require_outcome(int a) {
  if (a != 1 && a != -1) throw InvalidArgument("outcome must be +1 or -1");
}

inline void require_dim(const DensityMatrix& rho, const QuantumObservable& obs) {
  if (rho.dim() != obs.dim()) throw InvalidArgument("observable/state dimension mismatch");
}

/// (1 + a A) / 2
inline Matrix projector(const QuantumObservable& obs, int a) {
  return 0.5 * (Matrix::Identity(obs.dim(), obs.dim()) + static_cast<double>(a) * obs.op());
}

}  // namespace detail

struct ReductionResult {
  std::optional<DensityMatrix> reduced;  // absent when weight <= kZeroWeight
  double weight = 0.0;
  Matrix unnormalized;
};

/// Minimally destructive reduction: P rho P with P = (1 + a A)/2.
inline ReductionResult reduce_min(const DensityMatrix& rho, const QuantumObservable& obs,
                                  int outcome) {
  detail::require_two_level(obs);
  detail::require_outcome(outcome);
  detail::require_dim(rho, obs);
  const Matrix p = detail::projector(obs, outcome);
  ReductionResult r;
  r.unnormalized = p * rho.mat() * p;
  r.weight = r.unnormalized.trace().real();
  if (r.weight > kZeroWeight) {
    Matrix m = r.unnormalized / r.weight;
    m = 0.5 * (m + m.adjoint());
    r.reduced.emplace(std::move(m));
  }
  return r;
}

/// Maximally destructive reduction: (1 + a A) / M.
inline DensityMatrix reduce_max(const QuantumObservable& obs, int outcome) {
  detail::require_two_level(obs);
  detail::require_outcome(outcome);
  const int m = obs.dim();
  return DensityMatrix((Matrix::Identity(m, m) + static_cast<double>(outcome) * obs.op()) /
                       static_cast<double>(m));
}

/**
 * (w^B_b)^A_a: probability of B = b after A was found to be a. Empty when
 * the conditioning weight vanishes.
 */
inline std::optional<double> conditional_probability(const DensityMatrix& rho,
                                                     const QuantumObservable& a, int a_out,
                                                     const QuantumObservable& b, int b_out) {
  detail::require_two_level(b);
  detail::require_outcome(b_out);
  const ReductionResult r = reduce_min(rho, a, a_out);
  if (r.weight <= kZeroWeight) return std::nullopt;
  const double eb = trace_of_product(b.op(), r.unnormalized).real() / r.weight;
  return std::clamp(0.5 * (1.0 + b_out * eb), 0.0, 1.0);
}

/// <AB>_m = tr({A, B} rho) / 2
inline double measurement_correlation(const DensityMatrix& rho, const QuantumObservable& a,
                                      const QuantumObservable& b) {
  detail::require_two_level(a);
  detail::require_two_level(b);
  detail::require_dim(rho, a);
  return 0.5 * rho.expect(anticommutator(a.op(), b.op())).real();
}

/// sum_{a,b} a b w^A_a (w^B_b)^A_a, A measured first.
inline double measurement_correlation_from_conditionals(const DensityMatrix& rho,
                                                        const QuantumObservable& a,
                                                        const QuantumObservable& b) {
  double s = 0.0;
  for (int ao : {1, -1}) {
    const ReductionResult r = reduce_min(rho, a, ao);
    if (r.weight <= kZeroWeight) continue;
    for (int bo : {1, -1}) {
      const auto c = conditional_probability(rho, a, ao, b, bo);
      s += ao * bo * r.weight * c.value_or(0.0);
    }
  }
  return s;
}

/// w[i][j] with index 0 for outcome +1 and 1 for outcome -1.
struct JointProbabilities {
  std::array<std::array<double, 2>, 2> w{};
  double& at(int a, int b) { return w[a > 0 ? 0 : 1][b > 0 ? 0 : 1]; }
  double at(int a, int b) const { return w[a > 0 ? 0 : 1][b > 0 ? 0 : 1]; }
};

/**
 * w_ab = (1 + a<A> + b<B> + ab<AB>_m) / 4. Throws ValidationError when an
 * entry is negative beyond `eps`.
 */
inline JointProbabilities joint_outcome_probabilities(const DensityMatrix& rho,
                                                      const QuantumObservable& a,
                                                      const QuantumObservable& b,
                                                      double eps = 1e-10) {
  const double ea = rho.expect(a.op()).real();
  const double eb = rho.expect(b.op()).real();
  const double ab = measurement_correlation(rho, a, b);
  JointProbabilities j;
  for (int x : {1, -1})
    for (int y : {1, -1}) {
      const double w = 0.25 * (1.0 + x * ea + y * eb + x * y * ab);
      if (w < -eps)
        throw ValidationError("negative joint probability " + std::to_string(w) +
                              " (invalid state or non-two-level inputs)");
      j.at(x, y) = w;
    }
  return j;
}

/**
 * Same quantities from the Bloch vector and structure constants:
 * w_ab = (1 + a e^A.rho + b e^B.rho + ab (e^A.e^B + d_mlk e^A_m e^B_l rho_k)) / 4.
 * Requires e0 = 0 for both observables.
 */
inline JointProbabilities joint_outcome_probabilities_bloch(const BlochState& state,
                                                            const QuantumObservable& a,
                                                            const QuantumObservable& b) {
  if (std::abs(a.e0()) > 1e-12 || std::abs(b.e0()) > 1e-12)
    throw InvalidArgument("Bloch-form joint probabilities need unshifted observables");
  const auto& basis = state.basis();
  const int n = basis.size();
  const RVector& ea = a.e();
  const RVector& eb = b.e();
  const RVector& rho = state.rho();
  double dterm = 0.0;
  for (int m = 0; m < n; ++m) {
    if (ea(m) == 0.0) continue;
    for (int l = 0; l < n; ++l) {
      if (eb(l) == 0.0) continue;
      for (int k = 0; k < n; ++k) dterm += basis.d(m, l, k) * ea(m) * eb(l) * rho(k);
    }
  }
  const double corr = ea.dot(eb) + dterm;
  JointProbabilities j;
  for (int x : {1, -1})
    for (int y : {1, -1})
      j.at(x, y) = 0.25 * (1.0 + x * ea.dot(rho) + y * eb.dot(rho) + x * y * corr);
  return j;
}

/**
 * Probability of the outcome sequence for observables measured in the given
 * order (first to last), by iterated minimal reduction. A vanishing branch
 * returns 0.
 */
inline double sequence_probabilities(const DensityMatrix& rho,
                                     const std::vector<QuantumObservable>& measured,
                                     const std::vector<int>& outcomes) {
  if (measured.empty()) throw InvalidArgument("empty measurement sequence");
  if (measured.size() != outcomes.size())
    throw InvalidArgument("one outcome per measured observable required");
  double prob = 1.0;
  DensityMatrix current = rho;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const ReductionResult r = reduce_min(current, measured[i], outcomes[i]);
    prob *= r.weight;
    if (!r.reduced) return 0.0;
    current = *r.reduced;
  }
  return std::max(prob, 0.0);
}

/**
 * Measurement correlation of a chain written in product order [A, B, C, ...]:
 * the rightmost observable is measured first. Length 2, 3 or 4:
 * tr({A,B} rho)/2, tr({{A,B},C} rho)/4, tr({{{A,B},C},D} rho)/8.
 */
inline double chain_correlation(const DensityMatrix& rho,
                                const std::vector<QuantumObservable>& chain) {
  if (chain.size() < 2 || chain.size() > 4)
    throw UnsupportedError("chain correlations are defined for 2 to 4 observables");
  for (const auto& o : chain) {
    detail::require_two_level(o);
    detail::require_dim(rho, o);
  }
  Matrix acc = chain[0].op();
  double scale = 1.0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    acc = anticommutator(acc, chain[i].op());
    scale *= 0.5;
  }
  return scale * rho.expect(acc).real();
}

/// Same as chain_correlation, by summing outcome products over all sequences.
inline double chain_correlation_enumerated(const DensityMatrix& rho,
                                           const std::vector<QuantumObservable>& chain) {
  if (chain.empty()) throw InvalidArgument("empty chain");
  const std::vector<QuantumObservable> order(chain.rbegin(), chain.rend());
  const std::size_t len = order.size();
  double s = 0.0;
  for (unsigned mask = 0; mask < (1u << len); ++mask) {
    std::vector<int> outs(len);
    int sign = 1;
    for (std::size_t i = 0; i < len; ++i) {
      outs[i] = (mask >> i) & 1u ? -1 : 1;
      sign *= outs[i];
    }
    s += sign * sequence_probabilities(rho, order, outs);
  }
  return s;
}

/// (<ABC>_m - <ACB>_m, <ABC>_m - <CBA>_m, <ABC>_m - <BAC>_m)
inline std::array<double, 3> order_difference(const DensityMatrix& rho,
                                              const QuantumObservable& a,
                                              const QuantumObservable& b,
                                              const QuantumObservable& c) {
  const double abc = chain_correlation(rho, {a, b, c});
  return {abc - chain_correlation(rho, {a, c, b}), abc - chain_correlation(rho, {c, b, a}),
          abc - chain_correlation(rho, {b, a, c})};
}

struct ProbabilityShift {
  /// P(A = +1 after an unread B measurement) - w^A_+
  double after_b = 0.0;
  /// asymmetry[a][b] = (w^A_a)^B_b w^B_b - (w^B_b)^A_a w^A_a, index 0 is +1
  std::array<std::array<double, 2>, 2> asymmetry{};
  double at(int a, int b) const { return asymmetry[a > 0 ? 0 : 1][b > 0 ? 0 : 1]; }
};

/// Order effects computed from conditional probabilities.
inline ProbabilityShift probability_shift(const DensityMatrix& rho, const QuantumObservable& a,
                                          const QuantumObservable& b) {
  detail::require_two_level(a);
  detail::require_two_level(b);
  ProbabilityShift s;
  const double wa = 0.5 * (1.0 + rho.expect(a.op()).real());
  double after = 0.0;
  for (int bo : {1, -1}) after += sequence_probabilities(rho, {b, a}, {bo, 1});
  s.after_b = after - wa;
  for (int x : {1, -1})
    for (int y : {1, -1})
      s.asymmetry[x > 0 ? 0 : 1][y > 0 ? 0 : 1] =
          sequence_probabilities(rho, {b, a}, {y, x}) - sequence_probabilities(rho, {a, b}, {x, y});
  return s;
}

struct UncertaintyReport {
  double lhs = 0.0;  // Var(A) Var(B)
  double rhs = 0.0;  // |tr(rho [A,B])|^2 / 4
  bool pass = false;
  bool in_scope = false;  // false for mixed input states
};

inline UncertaintyReport uncertainty_check(const DensityMatrix& rho, const Matrix& a,
                                           const Matrix& b, double eps = 1e-10) {
  if (a.rows() != rho.dim() || b.rows() != rho.dim())
    throw InvalidArgument("observable/state dimension mismatch");
  auto var = [&](const Matrix& x) {
    const double m1 = rho.expect(x).real();
    return rho.expect(x * x).real() - m1 * m1;
  };
  UncertaintyReport r;
  r.lhs = var(a) * var(b);
  r.rhs = 0.25 * std::norm(rho.expect(commutator(a, b)));
  r.pass = r.lhs >= r.rhs - eps;
  r.in_scope = copurity(rho) <= 1e-10;
  return r;
}

inline UncertaintyReport uncertainty_check(const DensityMatrix& rho, const QuantumObservable& a,
                                           const QuantumObservable& b, double eps = 1e-10) {
  return uncertainty_check(rho, a.op(), b.op(), eps);
}

/**
 * Reduction by a complete set of commuting two-level observables with the
 * given outcomes: P = prod_i (1 + a_i A_i)/2, result P rho P normalized.
 */
inline ReductionResult complete_set_reduce(const DensityMatrix& rho,
                                           const std::vector<QuantumObservable>& set,
                                           const std::vector<int>& outcomes) {
  if (set.empty() || set.size() != outcomes.size())
    throw InvalidArgument("one outcome per observable required");
  for (std::size_t i = 0; i < set.size(); ++i) {
    detail::require_two_level(set[i]);
    detail::require_outcome(outcomes[i]);
    detail::require_dim(rho, set[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (max_abs(commutator(set[i].op(), set[j].op())) > tol::kCommute)
        throw InvalidArgument("observables " + std::to_string(j + 1) + " and " +
                              std::to_string(i + 1) + " do not commute");
  }
  const int m = rho.dim();
  Matrix p = Matrix::Identity(m, m);
  Matrix p_rev = Matrix::Identity(m, m);
  for (std::size_t i = 0; i < set.size(); ++i) {
    p = p * detail::projector(set[i], outcomes[i]);
    p_rev = detail::projector(set[i], outcomes[i]) * p_rev;
  }
  if (max_abs(p - p_rev) > tol::kCommute)
    throw ValidationError("projector product depends on ordering");
  ReductionResult r;
  r.unnormalized = p * rho.mat() * p;
  r.weight = r.unnormalized.trace().real();
  if (r.weight <= kZeroWeight)
    throw ValidationError("outcome combination has zero probability in this state");
  Matrix red = r.unnormalized / r.weight;
  r.reduced.emplace(0.5 * (red + red.adjoint()));
  return r;
}

}  // namespace clsq
