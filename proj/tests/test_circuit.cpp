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

#include <random>

#include "clsq/circuit.hpp"
#include "oracles.hpp"

using namespace clsq;
using oracle::Mat;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

Mat hadamard() {
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Mat cnot() {
  Mat c = Mat::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
  return c;
}

Mat ket_dm(int m, int idx) {
  Mat r = Mat::Zero(m, m);
  r(idx, idx) = 1;
  return r;
}

}  // namespace

TEST(ParseCircuit, Valid) {
  const Circuit c = parse_circuit(
      "# bell pair\n"
      "QUBITS 2\n"
      "INIT ZERO\n"
      "GATE H 1   # first\n"
      "\n"
      "GATE CNOT 1 2\n"
      "GATE P4 2\n"
      "READOUT 2 1\n");
  EXPECT_EQ(c.num_qubits, 2);
  EXPECT_FALSE(c.init_bloch.has_value());
  ASSERT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(c.gates[1].name, "CNOT");
  EXPECT_EQ(c.gates[1].targets, (std::vector<int>{1, 2}));
  EXPECT_EQ(c.gates[1].line, 6);
  EXPECT_EQ(c.readout, (std::vector<int>{2, 1}));

  const Circuit b = parse_circuit("QUBITS 1\nINIT BLOCH 0.1 -0.2 3e-1\n");
  ASSERT_TRUE(b.init_bloch.has_value());
  EXPECT_DOUBLE_EQ((*b.init_bloch)(2), 0.3);
}

TEST(ParseCircuit, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line(""), 0);
  EXPECT_EQ(parse_error_line("GATE H 1\n"), 1);
  EXPECT_EQ(parse_error_line("QUBITS 2\nQUBITS 2\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 5\n"), 1);
  EXPECT_EQ(parse_error_line("QUBITS two\n"), 1);
  EXPECT_EQ(parse_error_line("QUBITS 2\n\nGATE X 1\n"), 3);
  EXPECT_EQ(parse_error_line("QUBITS 2\nGATE H 3\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 2\nGATE H\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 2\nGATE CNOT 1 1\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 2\nGATE CNOT 1\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 1\nINIT BLOCH 0 0\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 1\nINIT BLOCH 0 0 x\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 1\nINIT FOO\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 1\nGATE H 1\nINIT ZERO\n"), 3);
  EXPECT_EQ(parse_error_line("QUBITS 1\nINIT ZERO\nINIT ZERO\n"), 3);
  EXPECT_EQ(parse_error_line("QUBITS 2\nREADOUT 1 1\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 2\nREADOUT 1\nREADOUT 2\n"), 3);
  EXPECT_EQ(parse_error_line("QUBITS 2\nREADOUT\n"), 2);
  EXPECT_EQ(parse_error_line("QUBITS 2\nMEASURE 1\n"), 2);
}

TEST(RunCircuit, EmptyCircuitStartsAllZero) {
  const auto rep = run_circuit(parse_circuit("QUBITS 2\n"));
  RVector init = RVector::Zero(15);
  init(0) = -1;
  init(1) = -1;
  init(2) = 1;
  EXPECT_LE((rep.initial.rho() - init).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_EQ(rep.pairs.size(), 1u);
  EXPECT_NEAR(rep.pairs[0].joint.at(-1, -1), 1.0, 1e-14);
  EXPECT_NEAR(rep.pairs[0].joint.at(1, 1), 0.0, 1e-14);
  EXPECT_NEAR(rep.pairs[0].correlation, 1.0, 1e-14);
  ASSERT_EQ(rep.qubits.size(), 2u);
  EXPECT_NEAR(rep.qubits[0].w_minus, 1.0, 1e-14);
  ASSERT_EQ(rep.audit.size(), 1u);
  EXPECT_TRUE(rep.audit[0].pass);
  EXPECT_NEAR(purity(rep.initial), 3.0, 1e-14);
}

TEST(RunCircuit, HadamardOnFirstQubit) {
  const auto rep = run_circuit(parse_circuit("QUBITS 2\nGATE H 1\n"));
  EXPECT_NEAR(rep.qubits[0].w_plus, 0.5, 1e-14);
  EXPECT_NEAR(rep.qubits[1].w_plus, 0.0, 1e-14);
  EXPECT_NEAR(rep.final_state[0], 0.0, 1e-14);
  EXPECT_NEAR(rep.final_state[7], -1.0, 1e-14);
  ASSERT_EQ(rep.audit.size(), 2u);
  for (const auto& a : rep.audit) {
    EXPECT_TRUE(a.pass);
    EXPECT_NEAR(a.purity, 3.0, 1e-12);
    EXPECT_GE(a.min_eigenvalue, -1e-12);
  }
}

TEST(RunCircuit, EntanglingCircuitMatchesUnitaryOracle) {
  const auto rep = run_circuit(parse_circuit("QUBITS 2\nGATE H 1\nGATE CNOT 1 2\nGATE P4 2\nGATE H 2\n"));
  Mat u = cnot() * oracle::tensor(hadamard(), oracle::id2());
  Mat p = Mat::Identity(2, 2);
  p(1, 1) = std::polar(1.0, -std::numbers::pi / 4);
  u = oracle::tensor(oracle::id2(), hadamard()) * oracle::tensor(oracle::id2(), p) * u;
  const Mat rho = u * ket_dm(4, 3) * u.adjoint();
  EXPECT_LE((rep.final_state.rho() - oracle::bloch(rho)).cwiseAbs().maxCoeff(), 1e-12);
  const Mat z1 = oracle::tensor(oracle::sz(), oracle::id2()), z2 = oracle::tensor(oracle::id2(), oracle::sz());
  EXPECT_NEAR(rep.qubits[0].expectation, oracle::expect(rho, z1), 1e-12);
  EXPECT_NEAR(rep.qubits[1].expectation, oracle::expect(rho, z2), 1e-12);
  for (int a : {1, -1})
    for (int b : {1, -1}) {
      const Mat proj = oracle::projector(z1, a) * oracle::projector(z2, b);
      EXPECT_NEAR(rep.pairs[0].joint.at(a, b), oracle::expect(rho, proj), 1e-12);
    }
}

TEST(RunCircuit, BellPair) {
  const auto rep = run_circuit(parse_circuit("QUBITS 2\nGATE H 1\nGATE CNOT 1 2\n"));
  const auto& j = rep.pairs[0].joint;
  EXPECT_NEAR(j.at(1, -1), 0.5, 1e-14);
  EXPECT_NEAR(j.at(-1, 1), 0.5, 1e-14);
  EXPECT_NEAR(j.at(1, 1) + j.at(-1, -1), 0.0, 1e-14);
  EXPECT_NEAR(rep.pairs[0].correlation, -1.0, 1e-14);
}

TEST(RunCircuit, ThreeQubitsAndReadoutSelection) {
  const auto rep = run_circuit(parse_circuit("QUBITS 3\nGATE H 2\nGATE CNOT 2 3\nREADOUT 3 2\n"));
  ASSERT_EQ(rep.qubits.size(), 2u);
  EXPECT_EQ(rep.qubits[0].qubit, 3);
  EXPECT_NEAR(rep.qubits[0].expectation, 0.0, 1e-12);
  ASSERT_EQ(rep.pairs.size(), 1u);
  EXPECT_EQ(rep.pairs[0].first, 3);
  EXPECT_NEAR(rep.pairs[0].correlation, -1.0, 1e-12);
}

TEST(RunCircuit, AuditRejectsInvalidInitialState) {
  EXPECT_THROW(run_circuit(parse_circuit("QUBITS 1\nINIT BLOCH 0 0 1.5\nGATE H 1\n")), ValidationError);
  const auto ok = run_circuit(parse_circuit("QUBITS 1\nINIT BLOCH 0.2 0.1 0.3\nGATE H 1\nGATE P4 1\n"));
  EXPECT_EQ(ok.audit.size(), 3u);
}

TEST(Bridge, HadamardRelabelsSystemDistribution) {
  const auto b = shared_basis(1);
  const auto dirs = DirectionSet::axes(b);
  RVector r(3);
  r << 0.3, -0.4, 0.5;
  const auto before = system_distribution(BlochState(r, b), dirs);
  const auto out = ensemble_evolution_bridge(gate("H", {1}, 1).S, before, dirs);
  EXPECT_TRUE(out.warning.empty());
  const RVector p0 = before.system(), p1 = out.dist.system();
  auto index = [](int s1, int s2, int s3) { return (s1 > 0 ? 0 : 4) + (s2 > 0 ? 0 : 2) + (s3 > 0 ? 0 : 1); };
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      for (int s3 : {1, -1}) EXPECT_NEAR(p1(index(s1, s2, s3)), p0(index(s3, -s2, s1)), 1e-14);
}

TEST(Bridge, IdentityKeepsDistribution) {
  std::mt19937_64 rng(70);
  const auto b = shared_basis(1);
  const auto dirs = DirectionSet::axes(b);
  auto dist = system_distribution(bloch_from_density(DensityMatrix(oracle::random_density(2, rng)), b), dirs);
  dist.delta = sample_environment(dist, dirs, 0.05, 3).delta;
  const auto out = ensemble_evolution_bridge(RMatrix::Identity(3, 3), dist, dirs);
  EXPECT_TRUE(out.warning.empty());
  EXPECT_LE((out.dist.total() - dist.total()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(ensemble_evolution_bridge(RMatrix::Identity(15, 15), dist, dirs), InvalidArgument);
}

TEST(Bridge, TwoQubitCircuitReadoutInvariance) {
  std::mt19937_64 rng(71);
  const auto b = shared_basis(2);
  const auto dirs = DirectionSet::axes(b);
  ASSERT_EQ(dirs.num_states(), 1LL << 15);
  const RVector r0 = 0.6 * oracle::bloch(oracle::random_density(4, rng));
  std::ostringstream text;
  text << "QUBITS 2\nINIT BLOCH";
  text.precision(17);
  for (int k = 0; k < 15; ++k) text << ' ' << r0(k);
  text << "\nGATE H 1\nGATE CNOT 1 2\nGATE P4 2\nGATE CNOT 2 1\n";
  const Circuit c = parse_circuit(text.str());
  const auto rep = run_circuit(c);

  auto dist = system_distribution(BlochState(r0, b), dirs);
  dist.delta = sample_environment(dist, dirs, 0.05, 5).delta;
  for (const auto& g : c.gates) {
    const Gate gt = gate(g.name, g.targets, 2);
    const RVector expect = gt.S * marginal_bloch(dist, dirs).rho();
    auto out = ensemble_evolution_bridge(gt.S, dist, dirs);
    EXPECT_LE((marginal_bloch(out.dist, dirs).rho() - expect).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(validate_environment(out.dist, dirs).pass);
    dist = std::move(out.dist);
  }
  const BlochState fin = marginal_bloch(dist, dirs);
  EXPECT_LE((fin.rho() - rep.final_state.rho()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(fin[0], rep.qubits[0].expectation, 1e-9);
  EXPECT_NEAR(fin[1], rep.qubits[1].expectation, 1e-9);
  EXPECT_NEAR(fin[2], rep.pairs[0].correlation, 1e-9);
}

TEST(Bridge, ControlledNotPermutesMarginals) {
  std::mt19937_64 rng(72);
  const auto b = shared_basis(2);
  const auto dirs = DirectionSet::axes(b);
  const RVector r0 = oracle::bloch(oracle::random_density(4, rng));
  const auto dist = system_distribution(BlochState(r0, b), dirs);
  const auto out = ensemble_evolution_bridge(gate("CNOT", {1, 2}, 2).S, dist, dirs);
  const RVector r1 = marginal_bloch(out.dist, dirs).rho();
  const int pairs[6][2] = {{2, 3}, {5, 7}, {8, 12}, {9, 15}, {10, 14}, {11, 13}};
  RVector expect = r0;
  for (const auto& p : pairs) std::swap(expect(p[0] - 1), expect(p[1] - 1));
  EXPECT_LE((r1 - expect).cwiseAbs().maxCoeff(), 1e-12);
}
