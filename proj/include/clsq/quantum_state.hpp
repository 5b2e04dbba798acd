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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/generator_basis.hpp"

namespace clsq {

/**
 * The subsystem state: rho_k = <A^(k)>, the expectation values of the n
 * basis observables. Nothing about validity is enforced on construction;
 * use positivity_check() for that.
 */
class BlochState {
 public:
  BlochState(RVector rho, std::shared_ptr<const GeneratorBasis> basis)
      : rho_(std::move(rho)), basis_(std::move(basis)) {
    if (!basis_) throw InvalidArgument("null basis");
    if (rho_.size() != basis_->size())
      throw InvalidArgument("Bloch vector has length " + std::to_string(rho_.size()) +
                            ", basis expects " + std::to_string(basis_->size()));
  }

  /// Infers the register size from the vector length.
  explicit BlochState(RVector rho)
      : BlochState(rho, shared_basis_for_bloch_length(rho.size())) {}

  static BlochState zero(std::shared_ptr<const GeneratorBasis> basis) {
    const int n = basis->size();
    return BlochState(RVector::Zero(n), std::move(basis));
  }

  const RVector& rho() const { return rho_; }
  double operator[](int k) const { return rho_(k); }
  const GeneratorBasis& basis() const { return *basis_; }
  const std::shared_ptr<const GeneratorBasis>& basis_ptr() const { return basis_; }
  int dim() const { return basis_->dim(); }
  int size() const { return basis_->size(); }

 private:
  RVector rho_;
  std::shared_ptr<const GeneratorBasis> basis_;
};

/** Hermitian unit-trace M x M matrix. */
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix mat, double eps = 1e-9) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols()) throw InvalidArgument("density matrix must be square");
    if (!is_hermitian(mat_, eps)) throw InvalidArgument("density matrix is not hermitian");
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > eps)
      throw InvalidArgument("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
  }

  static DensityMatrix maximally_mixed(int m) {
    return DensityMatrix(Matrix::Identity(m, m) / static_cast<double>(m));
  }

  const Matrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  /// tr(rho X)
  Complex expect(const Matrix& x) const { return trace_of_product(mat_, x); }

 private:
  Matrix mat_;
};

/** Normalized complex M-vector. */
class WaveFunction {
 public:
  explicit WaveFunction(CVector psi, double eps = tol::kNormalization) : psi_(std::move(psi)) {
    if (psi_.size() < 2) throw InvalidArgument("wave function needs at least two components");
    if (std::abs(psi_.squaredNorm() - 1.0) > eps)
      throw InvalidArgument("wave function is not normalized (|psi|^2 = " +
                            std::to_string(psi_.squaredNorm()) + ")");
  }

  /// Normalizes `psi` first; rejects the zero vector.
  static WaveFunction normalized(const CVector& psi) {
    const double nrm = psi.norm();
    if (nrm <= tol::kWeightFloor) throw InvalidArgument("cannot normalize a zero vector");
    return WaveFunction(psi / nrm);
  }

  /// Basis vector psi-hat_index, index 0-based.
  static WaveFunction basis_vector(int m, int index) {
    CVector v = CVector::Zero(m);
    v(index) = 1.0;
    return WaveFunction(v);
  }

  const CVector& psi() const { return psi_; }
  int dim() const { return static_cast<int>(psi_.size()); }

 private:
  CVector psi_;
};

/// (1 + rho_k L_k) / M
inline DensityMatrix density_from_bloch(const BlochState& state) {
  const int m = state.dim();
  Matrix mat = Matrix::Identity(m, m) + state.basis().expand(state.rho());
  return DensityMatrix(mat / static_cast<double>(m));
}

/// rho_k = tr(L_k rho). Throws ValidationError on complex components.
inline BlochState bloch_from_density(const DensityMatrix& rho,
                                     std::shared_ptr<const GeneratorBasis> basis) {
  if (basis->dim() != rho.dim()) throw InvalidArgument("basis/density dimension mismatch");
  RVector out(basis->size());
  for (int k = 0; k < basis->size(); ++k) {
    const Complex v = rho.expect(basis->generator(k));
    if (std::abs(v.imag()) > 1e-10)
      throw ValidationError("density matrix yields complex rho_" + std::to_string(k + 1));
    out(k) = v.real();
  }
  return BlochState(std::move(out), std::move(basis));
}

inline BlochState bloch_from_density(const DensityMatrix& rho) {
  return bloch_from_density(rho, shared_basis_for_dim(rho.dim()));
}

/// P = sum_k rho_k^2, bounded by M - 1 for valid states.
inline double purity(const BlochState& state) { return state.rho().squaredNorm(); }

/// tr[(rho^2 - rho)^2]; zero exactly for projectors.
inline double copurity(const DensityMatrix& rho) {
  const Matrix x = rho.mat() * rho.mat() - rho.mat();
  return trace_of_product(x, x).real();
}

struct PositivityReport {
  bool pass = false;
  std::vector<double> eigenvalues;  // descending, sums to 1
  double min_eigenvalue = 0.0;
};

inline PositivityReport positivity_check(const DensityMatrix& rho,
                                         double eps = tol::kPositivity) {
  const SortedEigen eig = sorted_eigen(rho.mat());
  PositivityReport r;
  r.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  r.min_eigenvalue = r.eigenvalues.back();
  r.pass = r.min_eigenvalue >= -eps;
  return r;
}

inline PositivityReport positivity_check(const BlochState& state,
                                         double eps = tol::kPositivity) {
  return positivity_check(density_from_bloch(state), eps);
}

struct FluctuationReport {
  RVector per_component;  // G_k = 1 - rho_k^2
  double total = 0.0;     // G = sum_k G_k
  double purity = 0.0;    // P = n - G
};

inline FluctuationReport fluctuation_measure(const BlochState& state) {
  FluctuationReport r;
  r.per_component = (1.0 - state.rho().array().square()).matrix();
  r.total = r.per_component.sum();
  r.purity = static_cast<double>(state.size()) - r.total;
  return r;
}

/// rho_ab = psi_a psi_b^*
inline DensityMatrix density_from_wavefunction(const WaveFunction& psi) {
  return DensityMatrix(psi.psi() * psi.psi().adjoint());
}

/// c1 psi1 + c2 psi2, renormalized. Throws ValidationError when the sum vanishes.
inline WaveFunction superpose(const WaveFunction& psi1, const WaveFunction& psi2, Complex c1,
                              Complex c2) {
  if (psi1.dim() != psi2.dim()) throw InvalidArgument("superposition of different dimensions");
  const CVector v = c1 * psi1.psi() + c2 * psi2.psi();
  if (v.norm() <= tol::kWeightFloor)
    throw ValidationError("degenerate superposition: c1 psi1 + c2 psi2 = 0");
  return WaveFunction(v / v.norm());
}

}  // namespace clsq
