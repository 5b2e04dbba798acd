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
#include <cstdint>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/generator_basis.hpp"
#include "clsq/observables.hpp"
#include "clsq/quantum_state.hpp"

namespace clsq {

/// Largest enumeration that is expanded densely.
inline constexpr long long kMaxDenseStates = 1LL << 20;

/**
 * Finite ordered set of unit directions g in R^n. Each direction carries the
 * sorted eigendecomposition of G = g_k L_k; its distinct eigenvalues
 * (levels) are the values of the corresponding classical label.
 *
 * Classical states are enumerated in mixed radix with direction 0 as the
 * most significant digit.
 */
class DirectionSet {
 public:
  DirectionSet(std::vector<RVector> directions, std::shared_ptr<const GeneratorBasis> basis)
      : basis_(std::move(basis)), dirs_(std::move(directions)) {
    if (!basis_) throw InvalidArgument("null basis");
    if (dirs_.empty()) throw InvalidArgument("direction set is empty");
    for (std::size_t i = 0; i < dirs_.size(); ++i) {
      const auto& g = dirs_[i];
      if (g.size() != basis_->size())
        throw InvalidArgument("direction " + std::to_string(i + 1) + " has wrong length");
      if (std::abs(g.norm() - 1.0) > 1e-10)
        throw InvalidArgument("direction " + std::to_string(i + 1) + " is not a unit vector");
      eig_.push_back(sorted_eigen(basis_->expand(g)));
    }
    long long count = 1;
    for (const auto& e : eig_) {
      count *= static_cast<long long>(e.levels.size());
      if (count > kMaxDenseStates)
        throw BudgetError("direction set enumerates more than " +
                          std::to_string(kMaxDenseStates) + " classical states");
    }
    num_states_ = count;
  }

  /// The n basis axes e_1 .. e_n.
  static DirectionSet axes(std::shared_ptr<const GeneratorBasis> basis) {
    std::vector<RVector> dirs;
    for (int k = 0; k < basis->size(); ++k) {
      RVector g = RVector::Zero(basis->size());
      g(k) = 1.0;
      dirs.push_back(std::move(g));
    }
    return DirectionSet(std::move(dirs), std::move(basis));
  }

  /**
   * Named presets: "axes" (all basis axes) and, for M = 4, "m12" (three
   * seeded random directions, each with four distinct eigenvalues).
   */
  static DirectionSet preset(const std::string& name, std::shared_ptr<const GeneratorBasis> basis,
                             std::uint64_t seed = 0) {
    if (name == "axes") return axes(std::move(basis));
    if (name == "m12") {
      if (basis->dim() != 4) throw InvalidArgument("preset m12 needs a two-qubit basis");
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal;
      std::vector<RVector> dirs;
      while (dirs.size() < 3) {
        RVector g(basis->size());
        for (Eigen::Index k = 0; k < g.size(); ++k) g(k) = normal(rng);
        g.normalize();
        if (sorted_eigen(basis->expand(g)).levels.size() == 4) dirs.push_back(std::move(g));
      }
      return DirectionSet(std::move(dirs), std::move(basis));
    }
    throw InvalidArgument("unknown direction preset '" + name + "'");
  }

  int size() const { return static_cast<int>(dirs_.size()); }
  long long num_states() const { return num_states_; }
  const RVector& direction(int i) const { return dirs_.at(static_cast<std::size_t>(i)); }
  const SortedEigen& eigen(int i) const { return eig_.at(static_cast<std::size_t>(i)); }
  const std::vector<EigenLevel>& levels(int i) const { return eigen(i).levels; }
  int radix(int i) const { return static_cast<int>(levels(i).size()); }
  const GeneratorBasis& basis() const { return *basis_; }
  const std::shared_ptr<const GeneratorBasis>& basis_ptr() const { return basis_; }

  /// Index of the direction equal to +-e, with the sign; {-1, 0} if absent.
  std::pair<int, int> find(const RVector& e, double eps = 1e-10) const {
    for (int i = 0; i < size(); ++i) {
      if (dirs_[static_cast<std::size_t>(i)].size() != e.size()) continue;
      if ((dirs_[static_cast<std::size_t>(i)] - e).cwiseAbs().maxCoeff() <= eps) return {i, 1};
      if ((dirs_[static_cast<std::size_t>(i)] + e).cwiseAbs().maxCoeff() <= eps) return {i, -1};
    }
    return {-1, 0};
  }

  /// Number of states sharing one value of label `i`.
  long long stride(int i) const {
    long long s = 1;
    for (int j = size() - 1; j > i; --j) s *= radix(j);
    return s;
  }

  /// Level index of direction `i` in state `tau`.
  int label(long long tau, int i) const {
    return static_cast<int>((tau / stride(i)) % radix(i));
  }

  /// A_tau = level value of direction `i`, over all states.
  RVector value_table(int i) const {
    RVector out(num_states_);
    const long long st = stride(i);
    const int r = radix(i);
    const auto& lv = levels(i);
    for (long long tau = 0; tau < num_states_; ++tau)
      out(tau) = lv[static_cast<std::size_t>((tau / st) % r)].value;
    return out;
  }

  /// Label tuple of a state: sign for two-level directions, 1-based level index otherwise.
  std::string label_string(long long tau) const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < size(); ++i) {
      if (i) os << ',';
      const int a = label(tau, i);
      if (radix(i) == 2 && std::abs(levels(i)[0].value - 1.0) < 1e-9 &&
          std::abs(levels(i)[1].value + 1.0) < 1e-9)
        os << (a == 0 ? '+' : '-');
      else
        os << (a + 1);
    }
    os << ')';
    return os.str();
  }

 private:
  std::shared_ptr<const GeneratorBasis> basis_;
  std::vector<RVector> dirs_;
  std::vector<SortedEigen> eig_;
  long long num_states_ = 0;
};

/**
 * p = p_s + delta_p_e over the enumerated states. p_s is kept as one level
 * weight vector per direction; delta_p_e is dense.
 */
struct ClassicalDistribution {
  std::vector<RVector> factors;
  RVector delta;

  long long num_states() const { return delta.size(); }

  /// Dense expansion of the product-form system part.
  RVector system() const {
    RVector out = RVector::Ones(1);
    for (const auto& f : factors) {
      RVector next(out.size() * f.size());
      for (Eigen::Index a = 0; a < out.size(); ++a)
        next.segment(a * f.size(), f.size()) = out(a) * f;
      out = std::move(next);
    }
    return out;
  }

  RVector total() const { return system() + delta; }
};

/**
 * Level weights of direction g: w_a = [U rho U^dagger]_aa in slot order,
 * slots ordered by descending eigenvalue of G = g_k L_k.
 */
inline RVector spectral_weights(const BlochState& state, const RVector& g,
                                double eps = tol::kPositivity) {
  if (g.size() != state.size()) throw InvalidArgument("direction length != Bloch length");
  if (std::abs(g.norm() - 1.0) > 1e-10) throw InvalidArgument("direction is not a unit vector");
  const DensityMatrix rho = density_from_bloch(state);
  const auto pos = positivity_check(rho, eps);
  if (!pos.pass)
    throw ValidationError("state violates positivity (min eigenvalue " +
                          std::to_string(pos.min_eigenvalue) + ")");
  const SortedEigen eig = sorted_eigen(state.basis().expand(g));
  RVector w = slot_weights(eig, rho);
  return w.cwiseMax(0.0);
}

/// Per-level weights of direction `i` (degenerate slots summed).
inline RVector level_weights(const BlochState& state, const DirectionSet& dirs, int i) {
  const DensityMatrix rho = density_from_bloch(state);
  const RVector w = slot_weights(dirs.eigen(i), rho);
  RVector out = RVector::Zero(dirs.radix(i));
  const auto& lv = dirs.levels(i);
  for (std::size_t a = 0; a < lv.size(); ++a)
    for (int s : lv[a].slots) out(static_cast<Eigen::Index>(a)) += w(s);
  return out.cwiseMax(0.0);
}

/// Factorized system distribution with delta_p_e = 0.
inline ClassicalDistribution system_distribution(const BlochState& state, const DirectionSet& dirs,
                                                 double eps = tol::kPositivity) {
  if (state.size() != dirs.basis().size())
    throw InvalidArgument("state and direction set use different bases");
  const auto pos = positivity_check(state, eps);
  if (!pos.pass)
    throw ValidationError("state violates positivity (min eigenvalue " +
                          std::to_string(pos.min_eigenvalue) + ")");
  ClassicalDistribution dist;
  for (int i = 0; i < dirs.size(); ++i) dist.factors.push_back(level_weights(state, dirs, i));
  dist.delta = RVector::Zero(dirs.num_states());
  return dist;
}

/// Rows: all-ones, then A^p for p = 1, 2, 3 per direction.
inline RMatrix environment_constraints(const DirectionSet& dirs) {
  const long long n_states = dirs.num_states();
  RMatrix c(1 + 3 * dirs.size(), n_states);
  c.row(0).setOnes();
  for (int i = 0; i < dirs.size(); ++i) {
    const RVector a = dirs.value_table(i);
    c.row(1 + 3 * i) = a.transpose();
    c.row(2 + 3 * i) = a.array().square().matrix().transpose();
    c.row(3 + 3 * i) = a.array().cube().matrix().transpose();
  }
  return c;
}

struct EnvironmentReport {
  bool pass = true;
  std::vector<std::string> violations;
  double max_constraint = 0.0;  // largest |sum A^p delta| incl. the plain sum
  double min_total = 0.0;
  double max_total = 0.0;
};

inline EnvironmentReport validate_environment(const ClassicalDistribution& dist,
                                              const DirectionSet& dirs, double eps = 1e-10) {
  if (dist.num_states() != dirs.num_states())
    throw InvalidArgument("environment vector does not match the enumeration");
  EnvironmentReport r;
  const double sum = dist.delta.sum();
  r.max_constraint = std::abs(sum);
  if (std::abs(sum) > eps) {
    r.pass = false;
    r.violations.push_back("sum of delta_p_e = " + std::to_string(sum));
  }
  for (int i = 0; i < dirs.size(); ++i) {
    const RVector a = dirs.value_table(i);
    RVector ap = RVector::Ones(a.size());
    for (int p = 1; p <= 3; ++p) {
      ap = ap.cwiseProduct(a);
      const double v = ap.dot(dist.delta);
      r.max_constraint = std::max(r.max_constraint, std::abs(v));
      if (std::abs(v) > eps) {
        r.pass = false;
        r.violations.push_back("direction " + std::to_string(i + 1) + " power " +
                               std::to_string(p) + ": " + std::to_string(v));
      }
    }
  }
  const RVector total = dist.total();
  r.min_total = total.minCoeff();
  r.max_total = total.maxCoeff();
  if (r.min_total < -eps || r.max_total > 1.0 + eps) {
    r.pass = false;
    r.violations.push_back("range 0 <= p_s + delta_p_e <= 1 violated (min " +
                           std::to_string(r.min_total) + ", max " + std::to_string(r.max_total) +
                           ")");
  }
  return r;
}

struct EnvironmentSample {
  RVector delta;
  std::string warning;  // empty when a nonzero sample was produced
};

/**
 * Random delta_p_e: Gaussian draw, projected onto the null space of the
 * environment constraints, scaled to max-norm `magnitude`, then halved until
 * 0 <= p_s + delta <= 1 (at most 60 times). Falls back to zero with a
 * warning. Deterministic per seed.
 */
inline EnvironmentSample sample_environment(const ClassicalDistribution& system,
                                            const DirectionSet& dirs, double magnitude,
                                            std::uint64_t seed) {
  const long long n_states = dirs.num_states();
  EnvironmentSample out{RVector::Zero(n_states), {}};
  if (magnitude < 0.0 || !std::isfinite(magnitude))
    throw InvalidArgument("environment magnitude must be finite and >= 0");
  if (magnitude == 0.0) return out;

  const RMatrix c = environment_constraints(dirs);
  // Orthonormal basis of the constraint row space.
  Eigen::SelfAdjointEigenSolver<RMatrix> gram(c * c.transpose());
  const RVector& ev = gram.eigenvalues();
  const double cutoff = ev.maxCoeff() * 1e-12;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < ev.size(); ++j)
    if (ev(j) > cutoff) keep.push_back(j);
  if (static_cast<long long>(keep.size()) >= n_states) {
    out.warning = "constraint null space is trivial; environment set to zero";
    return out;
  }
  RMatrix q(n_states, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    q.col(static_cast<Eigen::Index>(j)) =
        c.transpose() * gram.eigenvectors().col(keep[j]) / std::sqrt(ev(keep[j]));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RVector v(n_states);
  for (long long t = 0; t < n_states; ++t) v(t) = normal(rng);
  v -= q * (q.transpose() * v);
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax <= 1e-14) {
    out.warning = "projected sample vanished; environment set to zero";
    return out;
  }
  v *= magnitude / vmax;

  const RVector ps = system.system();
  for (int it = 0; it <= 60; ++it) {
    const RVector total = ps + v;
    if (total.minCoeff() >= 0.0 && total.maxCoeff() <= 1.0) {
      out.delta = v;
      return out;
    }
    v *= 0.5;
  }
  out.warning = "range condition could not be met; environment set to zero";
  return out;
}

/// A_tau for observable direction e (or -e) read from the direction set.
inline RVector classical_observable(const RVector& e, const DirectionSet& dirs) {
  const auto [idx, sign] = dirs.find(e);
  if (idx < 0) {
    std::ostringstream os;
    os << "direction (";
    for (Eigen::Index k = 0; k < e.size(); ++k) os << (k ? "," : "") << e(k);
    os << ") is not in the direction set";
    throw InvalidArgument(os.str());
  }
  return static_cast<double>(sign) * dirs.value_table(idx);
}

/// sum_tau A_tau^p p_tau
inline double classical_expectation(const RVector& table, const ClassicalDistribution& dist,
                                    int p) {
  if (table.size() != dist.num_states()) throw InvalidArgument("table/enumeration mismatch");
  if (p < 0) throw InvalidArgument("power must be >= 0");
  return table.array().pow(p).matrix().dot(dist.total());
}

/// Pointwise correlation sum_tau A_tau B_tau p_tau; depends on delta_p_e.
inline double classical_correlation(const RVector& a, const RVector& b,
                                    const ClassicalDistribution& dist) {
  if (a.size() != dist.num_states() || b.size() != dist.num_states())
    throw InvalidArgument("table/enumeration mismatch");
  return a.cwiseProduct(b).dot(dist.total());
}

/// rho_k = <A(e_k)> for every basis axis; all axes must be in the set.
inline BlochState marginal_bloch(const ClassicalDistribution& dist, const DirectionSet& dirs) {
  const int n = dirs.basis().size();
  RVector rho(n);
  const RVector p = dist.total();
  for (int k = 0; k < n; ++k) {
    RVector axis = RVector::Zero(n);
    axis(k) = 1.0;
    const auto [idx, sign] = dirs.find(axis);
    if (idx < 0)
      throw InvalidArgument("axis direction " + std::to_string(k + 1) + " missing from set");
    rho(k) = sign * dirs.value_table(idx).dot(p);
  }
  return BlochState(std::move(rho), dirs.basis_ptr());
}

/// Probability mass on each level of direction `i`.
inline RVector level_mass(const ClassicalDistribution& dist, const DirectionSet& dirs, int i) {
  const RVector p = dist.total();
  const long long st = dirs.stride(i);
  const int r = dirs.radix(i);
  RVector out = RVector::Zero(r);
  for (long long tau = 0; tau < p.size(); ++tau) out((tau / st) % r) += p(tau);
  return out;
}

/// Mass on states where `table` equals each value in `values` (within 1e-9).
inline RVector value_mass(const RVector& table, const ClassicalDistribution& dist,
                          const std::vector<double>& values) {
  const RVector p = dist.total();
  RVector out = RVector::Zero(static_cast<Eigen::Index>(values.size()));
  for (long long tau = 0; tau < p.size(); ++tau)
    for (std::size_t a = 0; a < values.size(); ++a)
      if (std::abs(table(tau) - values[a]) <= 1e-9) out(static_cast<Eigen::Index>(a)) += p(tau);
  return out;
}

/// One row per state: label tuple, p_s, delta_p_e, total.
inline std::string ensemble_table(const ClassicalDistribution& dist, const DirectionSet& dirs) {
  std::ostringstream os;
  os.precision(12);
  os << "state\tp_s\tdelta_p_e\ttotal\n";
  const RVector ps = dist.system();
  for (long long tau = 0; tau < ps.size(); ++tau)
    os << dirs.label_string(tau) << '\t' << ps(tau) << '\t' << dist.delta(tau) << '\t'
       << ps(tau) + dist.delta(tau) << '\n';
  return os.str();
}

}  // namespace clsq
