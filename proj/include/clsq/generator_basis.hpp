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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "clsq/core.hpp"
#include "clsq/pauli_string.hpp"

namespace clsq {

/** Dense real rank-3 tensor indexed (k, l, m), all indices 0-based. */
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int k, int l, int m) const { return data_[index(k, l, m)]; }
  double& operator()(int k, int l, int m) { return data_[index(k, l, m)]; }

 private:
  std::size_t index(int k, int l, int m) const {
    return (static_cast<std::size_t>(k) * n_ + l) * n_ + m;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Default cap on the memory taken by the two structure tensors.
inline constexpr std::size_t kDefaultBasisBudgetBytes = 64u << 20;

/**
 * Hermitian generators L_k of SU(M), M = 2^Q, normalized so that
 * L_k^2 = 1 and tr(L_k L_l) = M delta_kl, together with the structure
 * constants defined by
 *
 *   {L_k, L_l} = 2 delta_kl + 2 d_klm L_m,   [L_k, L_l] = 2i f_klm L_m.
 *
 * Q = 1 gives the Pauli matrices. Q = 2 gives the fifteen direct-product
 * generators in the conventional two-qubit order (L_14 = -tau2 x tau2).
 * Q >= 3 enumerates all non-identity Pauli strings in base-4 order with
 * qubit 1 as the most significant digit (I, X, Y, Z = 0..3).
 *
 * Generator k is 0-based here: generator(0) is L_1.
 */
class GeneratorBasis {
 public:
  static GeneratorBasis build(int num_qubits,
                              std::size_t memory_budget = kDefaultBasisBudgetBytes);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(generators_.size()); }

  const Matrix& generator(int k) const { return generators_.at(static_cast<std::size_t>(k)); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const PauliString& label(int k) const { return labels_.at(static_cast<std::size_t>(k)); }

  double d(int k, int l, int m) const { return d_(k, l, m); }
  double f(int k, int l, int m) const { return f_(k, l, m); }
  const StructureTensor& d_tensor() const { return d_; }
  const StructureTensor& f_tensor() const { return f_; }

  /// sum_k c_k L_k
  Matrix expand(const RVector& coeffs) const {
    if (coeffs.size() != size()) throw InvalidArgument("coefficient length != basis size");
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int k = 0; k < size(); ++k)
      if (coeffs(k) != 0.0) out += coeffs(k) * generators_[static_cast<std::size_t>(k)];
    return out;
  }

  /// tr(H L_k) / M, real part. Imaginary parts are dropped.
  RVector coefficients(const Matrix& h) const {
    RVector out(size());
    for (int k = 0; k < size(); ++k)
      out(k) = trace_of_product(h, generators_[static_cast<std::size_t>(k)]).real() / dim_;
    return out;
  }

  /// 0-based index of the generator equal to +-`p`, with the sign; -1 if absent.
  std::pair<int, int> find(const PauliString& p) const {
    for (int k = 0; k < size(); ++k) {
      const auto& lab = labels_[static_cast<std::size_t>(k)];
      if (lab.same_letters(p)) return {k, lab.phase() == p.phase() ? 1 : -1};
    }
    return {-1, 0};
  }

 private:
  friend std::pair<StructureTensor, StructureTensor> structure_constants(const GeneratorBasis&);

  int num_qubits_ = 0;
  int dim_ = 0;
  std::vector<PauliString> labels_;
  std::vector<Matrix> generators_;
  StructureTensor d_;
  StructureTensor f_;
};

/**
 * d_klm = tr({L_k,L_l} L_m) / (2M),  f_klm = tr([L_k,L_l] L_m) / (2iM).
 * Throws ValidationError if a constant comes out complex beyond tolerance.
 */
inline std::pair<StructureTensor, StructureTensor> structure_constants(
    const GeneratorBasis& basis) {
  const int n = basis.size();
  const double m_dim = basis.dim();
  StructureTensor d(n), f(n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const Matrix kl = basis.generator(k) * basis.generator(l);
      const Matrix lk = basis.generator(l) * basis.generator(k);
      const Matrix anti = kl + lk;
      const Matrix comm = kl - lk;
      for (int m = 0; m < n; ++m) {
        const Complex dv = trace_of_product(anti, basis.generator(m)) / (2.0 * m_dim);
        const Complex fv = trace_of_product(comm, basis.generator(m)) / (2.0 * kI * m_dim);
        if (std::abs(dv.imag()) > tol::kStructure || std::abs(fv.imag()) > tol::kStructure)
          throw ValidationError("complex structure constant at (" + std::to_string(k + 1) +
                                "," + std::to_string(l + 1) + "," + std::to_string(m + 1) +
                                "): basis is not a valid generator set");
        d(k, l, m) = dv.real();
        f(k, l, m) = fv.real();
      }
    }
  }
  return {std::move(d), std::move(f)};
}

namespace detail {

inline std::vector<PauliString> two_qubit_labels() {
  // L_1 .. L_15 in the direct-product convention.
  const char* names[15] = {"ZI", "IZ", "ZZ", "IX", "IY", "ZX", "ZY", "XI",
                           "YI", "XZ", "YZ", "XX", "XY", "-YY", "YX"};
  std::vector<PauliString> out;
  for (const char* s : names) out.push_back(PauliString::parse(s));
  return out;
}

inline std::vector<PauliString> pauli_string_labels(int q) {
  std::vector<PauliString> out;
  const long long count = 1LL << (2 * q);
  for (long long code = 1; code < count; ++code) {
    std::vector<Pauli> letters(static_cast<std::size_t>(q));
    long long c = code;
    for (int pos = q - 1; pos >= 0; --pos) {
      letters[static_cast<std::size_t>(pos)] = static_cast<Pauli>(c & 3);
      c >>= 2;
    }
    PauliString p(std::move(letters));
    // L_k^2 = +1
    if (!(p * p).is_identity() || (p * p).phase() != 0) p = p.negated();
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

inline GeneratorBasis GeneratorBasis::build(int num_qubits, std::size_t memory_budget) {
  if (num_qubits < 1) throw InvalidArgument("number of qubits must be >= 1");
  if (num_qubits > 15) throw BudgetError("register too large for a dense generator basis");
  const long long m = 1LL << num_qubits;
  const long long n = m * m - 1;
  const long long bytes = 2 * n * n * n * static_cast<long long>(sizeof(double)) +
                          n * m * m * static_cast<long long>(sizeof(Complex));
  if (bytes > static_cast<long long>(memory_budget))
    throw BudgetError("basis for " + std::to_string(num_qubits) + " qubits needs " +
                      std::to_string(bytes) + " bytes, budget is " +
                      std::to_string(memory_budget));

  GeneratorBasis b;
  b.num_qubits_ = num_qubits;
  b.dim_ = static_cast<int>(m);
  if (num_qubits == 1) {
    b.labels_ = {PauliString::parse("X"), PauliString::parse("Y"), PauliString::parse("Z")};
  } else if (num_qubits == 2) {
    b.labels_ = detail::two_qubit_labels();
  } else {
    b.labels_ = detail::pauli_string_labels(num_qubits);
  }
  for (const auto& p : b.labels_) b.generators_.push_back(p.to_matrix());
  auto [d, f] = structure_constants(b);
  b.d_ = std::move(d);
  b.f_ = std::move(f);
  return b;
}

/// Process-wide cache of immutable bases, one per register size.
inline std::shared_ptr<const GeneratorBasis> shared_basis(int num_qubits) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GeneratorBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(num_qubits);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const GeneratorBasis>(GeneratorBasis::build(num_qubits));
  cache.emplace(num_qubits, basis);
  return basis;
}

/// Basis for an M-dimensional system; M must be a power of two.
inline std::shared_ptr<const GeneratorBasis> shared_basis_for_dim(long long m) {
  if (m < 2 || !is_power_of_two(m))
    throw InvalidArgument("dimension " + std::to_string(m) + " is not a power of two >= 2");
  return shared_basis(log2_exact(m));
}

/// Basis for a Bloch vector of length n = M^2 - 1.
inline std::shared_ptr<const GeneratorBasis> shared_basis_for_bloch_length(long long n) {
  for (int q = 1; q <= 6; ++q) {
    const long long m = 1LL << q;
    if (m * m - 1 == n) return shared_basis(q);
  }
  throw InvalidArgument("Bloch vector length " + std::to_string(n) + " is not 4^Q - 1");
}

}  // namespace clsq
