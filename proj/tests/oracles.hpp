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

// Independent reference implementations for the tests. Nothing here calls
// into the library; values are built from explicit 2x2 matrices.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline Mat id2() { return Mat::Identity(2, 2); }
inline Mat sx() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat sy() {
  Mat m(2, 2);
  m << 0, C(0, -1), C(0, 1), 0;
  return m;
}
inline Mat sz() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Mat tensor(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Mat tensor3(const Mat& a, const Mat& b, const Mat& c) { return tensor(tensor(a, b), c); }

/// The fifteen two-qubit generators written out one by one.
inline std::vector<Mat> two_qubit_generators() {
  const Mat o = id2(), x = sx(), y = sy(), z = sz();
  return {tensor(z, o), tensor(o, z), tensor(z, z), tensor(o, x), tensor(o, y),
          tensor(z, x), tensor(z, y), tensor(x, o), tensor(y, o), tensor(x, z),
          tensor(y, z), tensor(x, x), tensor(x, y), -tensor(y, y), tensor(y, x)};
}

inline std::vector<Mat> pauli_generators() { return {sx(), sy(), sz()}; }

inline std::vector<Mat> generators_for_dim(int m) {
  return m == 2 ? pauli_generators() : two_qubit_generators();
}

inline Mat density(const RVec& r) {
  const auto g = generators_for_dim(r.size() == 3 ? 2 : 4);
  const int m = static_cast<int>(g[0].rows());
  Mat out = Mat::Identity(m, m);
  for (int k = 0; k < r.size(); ++k) out += r(k) * g[static_cast<std::size_t>(k)];
  return out / double(m);
}

inline RVec bloch(const Mat& rho) {
  const auto g = generators_for_dim(static_cast<int>(rho.rows()));
  RVec out(static_cast<int>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) out(static_cast<int>(k)) = (g[k] * rho).trace().real();
  return out;
}

inline double expect(const Mat& rho, const Mat& a) { return (rho * a).trace().real(); }

/// Ginibre G, rho = G G^dagger / tr.
inline Mat random_density(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = C(n(rng), n(rng));
  Mat r = g * g.adjoint();
  return r / r.trace();
}

inline Vec random_pure(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec v(m);
  for (int i = 0; i < m; ++i) v(i) = C(n(rng), n(rng));
  return v / v.norm();
}

inline Mat random_unitary(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = C(n(rng), n(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

/// U diag(1,..,1,-1,..,-1) U^dagger with half of each sign.
inline Mat random_two_level(int m, std::mt19937_64& rng) {
  Mat d = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) d(i, i) = i < m / 2 ? 1.0 : -1.0;
  const Mat u = random_unitary(m, rng);
  return u * d * u.adjoint();
}

/// exp(-i H t) by scaled Taylor series and repeated squaring.
inline Mat propagator(const Mat& h, double t) {
  const Mat a = C(0, -t) * h;
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const Mat as = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(h.rows(), h.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * as / double(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Mat projector(const Mat& a, int outcome) {
  return 0.5 * (Mat::Identity(a.rows(), a.cols()) + double(outcome) * a);
}

/// Probability of a measurement sequence by explicit projector products.
inline double sequence_prob(const Mat& rho, const std::vector<Mat>& ops, const std::vector<int>& outs) {
  Mat k = Mat::Identity(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < ops.size(); ++i) k = projector(ops[i], outs[i]) * k;
  return (k * rho * k.adjoint()).trace().real();
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
