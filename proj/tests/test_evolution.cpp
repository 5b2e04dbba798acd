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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "clsq/evolution.hpp"
#include "oracles.hpp"

using namespace clsq;
using oracle::Mat;

namespace {

constexpr double kPi = std::numbers::pi;

RVector vec3(double a, double b, double c) {
  RVector r(3);
  r << a, b, c;
  return r;
}

RVector random_bloch(int m, std::mt19937_64& rng) { return oracle::bloch(oracle::random_density(m, rng)); }

RotationGenerator random_generator(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  RMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  return {a - a.transpose(), 0.3 * d(rng)};
}

}  // namespace

TEST(HamiltonianMap, Examples) {
  const auto& b1 = *shared_basis(1);
  EXPECT_EQ(rotation_from_hamiltonian(RVector::Zero(3), 0.7, b1).T.cwiseAbs().maxCoeff(), 0.0);
  const double w = 0.8;
  const RotationGenerator g = rotation_from_hamiltonian(vec3(0, 0, w), 0.0, b1);
  RMatrix expect = RMatrix::Zero(3, 3);
  expect(0, 1) = -2 * w;
  expect(1, 0) = 2 * w;
  EXPECT_LE((g.T - expect).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NO_THROW(g.validate());
  EXPECT_LE((rotation_from_hamiltonian(vec3(0.1, 0.2, 0.3), 5.0, b1).T -
             rotation_from_hamiltonian(vec3(0.1, 0.2, 0.3), 0.0, b1).T)
                .cwiseAbs()
                .maxCoeff(),
            0.0);
}

TEST(HamiltonianMap, MatchesPropagator) {
  std::mt19937_64 rng(60);
  for (int q : {1, 2}) {
    const auto basis = shared_basis(q);
    const int m = basis->dim(), n = basis->size();
    for (int rep = 0; rep < 5; ++rep) {
      std::normal_distribution<double> d;
      RVector h(n);
      for (int k = 0; k < n; ++k) h(k) = 0.5 * d(rng);
      const RotationGenerator g = rotation_from_hamiltonian(h, 0.0, *basis);
      EXPECT_LE((g.T + g.T.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      Mat hm = Mat::Zero(m, m);
      const auto gens = oracle::generators_for_dim(m);
      for (int k = 0; k < n; ++k) hm += h(k) * gens[static_cast<std::size_t>(k)];
      const RVector r0 = random_bloch(m, rng);
      const Mat rho0 = oracle::density(r0);
      for (double t : {0.25, 0.5, 1.0}) {
        const Mat u = oracle::propagator(hm, t);
        const RVector ref = oracle::bloch(u * rho0 * u.adjoint());
        const RVector got = evolve(r0, g, t, static_cast<int>(t * kStepsPerUnitTime));
        EXPECT_LE((got - ref).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
  }
}

TEST(Evolve, Examples) {
  std::mt19937_64 rng(61);
  const RVector r = random_bloch(4, rng);
  EXPECT_LE((evolve(r, RotationGenerator{RMatrix::Zero(15, 15), 0.0}, 1.0, 10) - r).cwiseAbs().maxCoeff(), 0.0);

  const RVector d = evolve(r, RotationGenerator{RMatrix::Zero(15, 15), -0.1}, 1.0, kStepsPerUnitTime);
  EXPECT_LE((d - std::exp(-0.1) * r).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(d.squaredNorm(), std::exp(-0.2) * r.squaredNorm(), 1e-12);

  const RVector r1 = vec3(0.3, -0.4, 0.5);
  const RVector h = evolve(r1, hadamard_generator(kPi / 2.0), 1.0, kStepsPerUnitTime);
  EXPECT_LE((h - vec3(0.5, 0.4, 0.3)).cwiseAbs().maxCoeff(), 1e-8);
  const Gate hg = gate("H", {1}, 1);
  EXPECT_LE((h - hg.S * r1).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Evolve, Errors) {
  const RotationGenerator g{RMatrix::Zero(3, 3), 0.0};
  EXPECT_THROW(evolve(vec3(0, 0, 1), g, 1.0, 0), InvalidArgument);
  RotationGenerator bad{RMatrix::Zero(3, 3), 0.0};
  bad.T(0, 1) = std::nan("");
  EXPECT_THROW(evolve(vec3(0, 0, 1), bad, 1.0, 10), InvalidArgument);
  RotationGenerator sym{RMatrix::Identity(3, 3), 0.0};
  EXPECT_THROW(evolve(vec3(0, 0, 1), sym, 1.0, 10), InvalidArgument);
  EXPECT_THROW(evolve(RVector::Zero(15), g, 1.0, 10), InvalidArgument);
}

TEST(Evolve, PurityConservedForRotations) {
  std::mt19937_64 rng(62);
  for (int rep = 0; rep < 5; ++rep) {
    RotationGenerator g = random_generator(15, rng);
    g.D = 0.0;
    g.T *= 0.2;
    const RVector r = random_bloch(4, rng);
    const RVector out = evolve(r, g, 10.0, 10 * kStepsPerUnitTime);
    EXPECT_NEAR(out.squaredNorm(), r.squaredNorm(), 1e-9);
  }
}

TEST(Evolve, PurityRate) {
  std::mt19937_64 rng(63);
  const double dt = 1e-3;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = rep % 2 ? 15 : 3;
    const RotationGenerator g = random_generator(n, rng);
    const RVector r = random_bloch(n == 3 ? 2 : 4, rng);
    const double fwd = evolve(r, g, dt, 1).squaredNorm();
    const double bwd = evolve(r, g, -dt, 1).squaredNorm();
    const double rate = (fwd - bwd) / (2 * dt);
    const double expect = 2.0 * g.D * r.squaredNorm();
    EXPECT_LE(std::abs(rate - expect), 1e-6 * std::abs(expect)) << "D=" << g.D;
  }
}

TEST(EvolveDensity, AgreesWithBlochEvolution) {
  std::mt19937_64 rng(64);
  const auto basis = shared_basis(2);
  const auto gens = oracle::two_qubit_generators();
  std::normal_distribution<double> nd;
  RVector h(15);
  for (int k = 0; k < 15; ++k) h(k) = 0.3 * nd(rng);
  Mat hm = Mat::Zero(4, 4);
  for (int k = 0; k < 15; ++k) hm += h(k) * gens[static_cast<std::size_t>(k)];
  const RVector r0 = 0.5 * random_bloch(4, rng);
  const DensityMatrix rho0(oracle::density(r0));
  RotationGenerator g = rotation_from_hamiltonian(h, 0.0, *basis);
  g.D = -0.05;
  const RVector ref = evolve(r0, g, 1.0, kStepsPerUnitTime);

  const DensityMatrix a = evolve_density(rho0, hm, nullptr, -0.05, 1.0, kStepsPerUnitTime);
  EXPECT_LE((oracle::bloch(a.mat()) - ref).cwiseAbs().maxCoeff(), 1e-9);

  const DensityMap scale = [](const Matrix& dev) -> Matrix { return -0.02 * dev; };
  const DensityMatrix b = evolve_density(rho0, hm, scale, -0.03, 1.0, kStepsPerUnitTime);
  EXPECT_LE((oracle::bloch(b.mat()) - ref).cwiseAbs().maxCoeff(), 1e-9);

  const DensityMap breaks_trace = [](const Matrix& dev) -> Matrix {
    return dev + 0.1 * Matrix::Identity(dev.rows(), dev.cols());
  };
  EXPECT_THROW(evolve_density(rho0, hm, breaks_trace, 0.0, 0.1, 10), ValidationError);
  const DensityMap breaks_herm = [](const Matrix& dev) -> Matrix { return Complex(0, 1) * dev; };
  EXPECT_THROW(evolve_density(rho0, hm, breaks_herm, 0.0, 0.1, 10), ValidationError);
}

TEST(RotationFromUnitary, Examples) {
  const auto& b1 = *shared_basis(1);
  EXPECT_LE((rotation_from_unitary(Mat::Identity(2, 2), b1) - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const RMatrix s = rotation_from_unitary(h, b1);
  EXPECT_LE((s * vec3(0.3, -0.4, 0.5) - vec3(0.5, 0.4, 0.3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(rotation_from_unitary(2.0 * Mat::Identity(2, 2), b1), InvalidArgument);
  EXPECT_THROW(rotation_from_unitary(Mat::Identity(4, 4), b1), InvalidArgument);
}

TEST(RotationFromUnitary, MatchesConjugation) {
  std::mt19937_64 rng(65);
  for (int q : {1, 2}) {
    const auto& b = *shared_basis(q);
    const int m = b.dim(), n = b.size();
    for (int rep = 0; rep < 20; ++rep) {
      const Mat u = oracle::random_unitary(m, rng);
      const RMatrix s = rotation_from_unitary(u, b);
      EXPECT_LE((s * s.transpose() - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
      for (int k = 0; k < n; ++k) {
        const Mat l = oracle::generators_for_dim(m)[static_cast<std::size_t>(k)];
        const RVector ref = oracle::bloch(u * l * u.adjoint() / double(m)) ;
        EXPECT_LE((s.col(k) - ref).cwiseAbs().maxCoeff(), 1e-12);
      }
      const Mat rho = oracle::random_density(m, rng);
      const RVector r = oracle::bloch(rho);
      const RVector out = s * r;
      EXPECT_LE((out - oracle::bloch(u * rho * u.adjoint())).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_NEAR(out.squaredNorm(), r.squaredNorm(), 1e-10);
    }
  }
}

TEST(Gates, HadamardAndPhase) {
  const Gate h = gate("H", {1}, 1);
  EXPECT_LE((h.S * h.S - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
  const Gate p = gate("P4", {1}, 1);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_LE((p.S * vec3(1, 0, 0) - vec3(s, -s, 0)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((p.S * vec3(0, 0, 1) - vec3(0, 0, 1)).cwiseAbs().maxCoeff(), 1e-14);
  RMatrix p8 = RMatrix::Identity(3, 3);
  for (int i = 0; i < 8; ++i) p8 = p.S * p8;
  EXPECT_LE((p8 - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Gates, SingleQubitEmbeddingUsesQubitTriples) {
  const Gate h1 = gate("H", {1}, 2), h2 = gate("H", {2}, 2);
  // (X, Y, Z) of qubit 1 sit at (7, 8, 0), of qubit 2 at (3, 4, 1).
  const int q1[3] = {7, 8, 0}, q2[3] = {3, 4, 1};
  const Gate h = gate("H", {1}, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(h1.S(q1[i], q1[j]), h.S(i, j), 1e-14);
      EXPECT_NEAR(h2.S(q2[i], q2[j]), h.S(i, j), 1e-14);
    }
  const Gate p2 = gate("P4", {2}, 2);
  const Gate p = gate("P4", {1}, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(p2.S(q2[i], q2[j]), p.S(i, j), 1e-14);
  EXPECT_NEAR(h1.S(2, 2), 0.0, 1e-14);
}

TEST(Gates, ControlledNotPermutation) {
  const Gate c = gate("CNOT", {1, 2}, 2);
  const int pairs[6][2] = {{2, 3}, {5, 7}, {8, 12}, {9, 15}, {10, 14}, {11, 13}};
  RMatrix expect = RMatrix::Identity(15, 15);
  for (const auto& pr : pairs) {
    const int a = pr[0] - 1, b = pr[1] - 1;
    expect(a, a) = expect(b, b) = 0.0;
    expect(a, b) = expect(b, a) = 1.0;
  }
  EXPECT_EQ((c.S - expect).cwiseAbs().maxCoeff(), 0.0);
  RVector e2 = RVector::Zero(15);
  e2(1) = 1;
  RVector e3 = RVector::Zero(15);
  e3(2) = 1;
  EXPECT_EQ((c.S * e2 - e3).cwiseAbs().maxCoeff(), 0.0);

  Mat ref = Mat::Zero(4, 4);
  ref(0, 0) = ref(1, 1) = ref(2, 3) = ref(3, 2) = 1.0;
  EXPECT_LE(oracle::max_abs(c.U - ref), 0.0);
}

TEST(Gates, CompositionAndOrder) {
  std::mt19937_64 rng(66);
  const auto& b = *shared_basis(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat u1 = oracle::random_unitary(4, rng), u2 = oracle::random_unitary(4, rng);
    EXPECT_LE((rotation_from_unitary(u2 * u1, b) - rotation_from_unitary(u2, b) * rotation_from_unitary(u1, b))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
  const Gate h = gate("H", {1}, 1), p = gate("P4", {1}, 1);
  EXPECT_GT((h.S * p.S - p.S * h.S).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_LE((gate("H", {1}, 1).S * gate("H", {1}, 1).S - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gates, Errors) {
  EXPECT_THROW(gate("T", {1}, 1), InvalidArgument);
  EXPECT_THROW(gate("H", {2}, 1), InvalidArgument);
  EXPECT_THROW(gate("H", {0}, 2), InvalidArgument);
  EXPECT_THROW(gate("CNOT", {1, 1}, 2), InvalidArgument);
  EXPECT_THROW(gate("CNOT", {1}, 2), InvalidArgument);
  EXPECT_THROW(gate("P4", {1, 2}, 2), InvalidArgument);
}

TEST(Precession, Examples) {
  const auto basis = shared_basis(1);
  const BlochState r0(vec3(0.3, -0.4, 0.5), basis);
  const auto traj = precession_trajectory(r0, 1.0, 8);
  ASSERT_EQ(traj.size(), 9u);
  EXPECT_NEAR(traj.front().integrated, 0.5, 1e-15);
  EXPECT_NEAR(traj.back().phi, kPi / 2, 1e-15);
  EXPECT_NEAR(traj.back().integrated, 0.3, 1e-8);
  for (const auto& s : traj) EXPECT_NEAR(s.integrated, s.closed_form, 1e-8);

  const auto y = precession_trajectory(BlochState(vec3(0, 1, 0), basis), 2.0, 2);
  EXPECT_NEAR(y[1].phi, kPi / 4, 1e-15);
  EXPECT_NEAR(y[1].integrated, -1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(y[1].closed_form, -1.0 / std::sqrt(2.0), 1e-14);

  EXPECT_THROW(precession_trajectory(BlochState::zero(shared_basis(2)), 1.0, 4), InvalidArgument);
  EXPECT_THROW(precession_trajectory(r0, 0.0, 4), InvalidArgument);
}
