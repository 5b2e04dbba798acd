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

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clsq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/** Numerical tolerances shared across the library. */
namespace tol {
inline constexpr double kStructure = 1e-12;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kDegeneracy = 1e-9;
inline constexpr double kWeightFloor = 1e-12;
inline constexpr double kClassification = 1e-8;
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kCommute = 1e-10;
inline constexpr double kNormalization = 1e-10;
}  // namespace tol

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  return a * b - b * a;
}

inline Matrix anticommutator(const Matrix& a, const Matrix& b) {
  return a * b + b * a;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// tr(a b) without forming the product.
inline Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double eps) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= eps;
}

inline bool is_unitary(const Matrix& u, double eps = tol::kUnitarity) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <=
         eps;
}

/// One group of (numerically) equal eigenvalues.
struct EigenLevel {
  double value = 0.0;
  std::vector<int> slots;
};

/**
 * Hermitian eigendecomposition with eigenvalues sorted descending.
 *
 * Slot order: descending eigenvalue, ties kept in the solver's output order.
 * `vectors.col(a)` is the eigenvector of slot a, so the diagonalizer of the
 * operator is `vectors.adjoint()`. Adjacent eigenvalues closer than the
 * degeneracy tolerance share one level.
 */
struct SortedEigen {
  RVector values;
  Matrix vectors;
  std::vector<EigenLevel> levels;

  Matrix diagonalizer() const { return vectors.adjoint(); }
};

inline SortedEigen sorted_eigen(const Matrix& hermitian,
                                double degeneracy_tol = tol::kDegeneracy) {
  const Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ValidationError("hermitian eigendecomposition failed");
  const auto& vals = solver.eigenvalues();
  const Eigen::Index m = vals.size();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vals(a) > vals(b); });
  SortedEigen out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    out.values(a) = vals(order[static_cast<std::size_t>(a)]);
    out.vectors.col(a) = solver.eigenvectors().col(order[static_cast<std::size_t>(a)]);
  }
  for (int a = 0; a < static_cast<int>(m); ++a) {
    if (!out.levels.empty() &&
        std::abs(out.levels.back().value - out.values(a)) <= degeneracy_tol) {
      out.levels.back().slots.push_back(a);
    } else {
      out.levels.push_back({out.values(a), {a}});
    }
  }
  // Representative value of a level is the mean of its members.
  for (auto& level : out.levels) {
    double s = 0.0;
    for (int a : level.slots) s += out.values(a);
    level.value = s / static_cast<double>(level.slots.size());
  }
  return out;
}

inline bool is_power_of_two(long long x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_exact(long long x) {
  int q = 0;
  while ((1LL << q) < x) ++q;
  return q;
}

}  // namespace clsq
