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

// Command implementations behind the clsq tool. Each command returns a JSON
// document and the equivalent human-readable text.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clsq/clsq.hpp"

namespace clsq::cli {

using Json = nlohmann::ordered_json;

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;

struct Options {
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct Output {
  Json json;
  std::string text;
};

namespace detail {

inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline Json vec_json(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k) == 0.0 ? 0.0 : v(k));
  return a;
}

inline std::string vec_text(const RVector& v) {
  std::string s;
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? " " : "") + num(v(k));
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double to_double(const std::string& tok, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos == tok.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("bad number '" + tok + "' in " + what);
}

inline int to_int(const std::string& tok, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("bad integer '" + tok + "' in " + what);
}

}  // namespace detail

/**
 * State specs:
 *   zero:Q        every qubit at tau_3 = -1
 *   mixed:Q       maximally mixed
 *   random:Q      random density matrix from the seed
 *   singlet[:s]   two-qubit singlet, s = +1 (default) or -1
 *   bloch:r1,r2,...  explicit Bloch vector (3 or 15 or 63 numbers)
 */
inline BlochState parse_state(const std::string& spec, const Options& opt) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto qubits = [&]() {
    const int q = detail::to_int(arg, "state spec");
    if (q < 1 || q > kMaxCircuitQubits)
      throw InvalidArgument("qubit count must be in 1.." + std::to_string(kMaxCircuitQubits));
    return q;
  };
  if (kind == "zero") return zero_state(qubits());
  if (kind == "mixed") return BlochState::zero(shared_basis(qubits()));
  if (kind == "random") {
    const auto basis = shared_basis(qubits());
    const int m = basis->dim();
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> n;
    Matrix g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = Complex(n(rng), n(rng));
    Matrix r = g * g.adjoint();
    r /= r.trace();
    return bloch_from_density(DensityMatrix(0.5 * (r + r.adjoint())), basis);
  }
  if (kind == "singlet") {
    const int eps = arg.empty() ? 1 : detail::to_int(arg, "singlet sign");
    if (eps != 1 && eps != -1) throw InvalidArgument("singlet sign must be +1 or -1");
    return singlet_state(eps).bloch;
  }
  if (kind == "bloch") {
    const auto toks = detail::split(arg, ',');
    RVector v(static_cast<Eigen::Index>(toks.size()));
    for (std::size_t k = 0; k < toks.size(); ++k)
      v(static_cast<Eigen::Index>(k)) = detail::to_double(toks[k], "Bloch vector");
    if (v.size() != 3 && v.size() != 15 && v.size() != 63)
      throw InvalidArgument("Bloch vector needs 3, 15 or 63 components, got " +
                              std::to_string(v.size()));
    return BlochState(std::move(v));
  }
  throw InvalidArgument("unknown state spec '" + spec + "'");
}

/**
 * Observable tokens: "k" or "-k" (1-based basis index), "k+l" for
 * (L_k + L_l)/sqrt2, or a signed Pauli string such as "ZI" or "-YY".
 */
inline QuantumObservable parse_observable(const std::string& tok,
                                          const std::shared_ptr<const GeneratorBasis>& basis) {
  if (tok.empty()) throw InvalidArgument("empty observable token");
  const int n = basis->size();
  RVector e = RVector::Zero(n);
  auto index = [&](const std::string& t) {
    const int k = detail::to_int(t, "observable '" + tok + "'");
    if (k < 1 || k > n)
      throw InvalidArgument("observable index " + t + " out of range 1.." + std::to_string(n));
    return k - 1;
  };
  const bool pauli = tok.find_first_of("IXYZ") != std::string::npos;
  if (pauli) {
    PauliString p;
    try {
      p = PauliString::parse(tok);
    } catch (const Error& ex) {
      throw InvalidArgument(ex.what());
    }
    if (p.num_qubits() != basis->num_qubits())
      throw InvalidArgument("Pauli string '" + tok + "' does not match the register size");
    if (p.phase() % 2 != 0) throw InvalidArgument("Pauli string '" + tok + "' is not hermitian");
    const auto [k, sign] = basis->find(p);
    if (k < 0) throw InvalidArgument("identity is not a basis observable");
    e(k) = sign;
  } else {
    const auto plus = tok.find('+', 1);
    if (plus != std::string::npos) {
      const int a = index(tok.substr(0, plus)), b = index(tok.substr(plus + 1));
      if (a == b) throw InvalidArgument("observable '" + tok + "' repeats an index");
      e(a) += 1.0 / std::sqrt(2.0);
      e(b) += 1.0 / std::sqrt(2.0);
    } else if (tok[0] == '-') {
      e(index(tok.substr(1))) = -1.0;
    } else {
      e(index(tok)) = 1.0;
    }
  }
  return QuantumObservable(std::move(e), 0.0, basis);
}

// ---------------------------------------------------------------- run

inline Output cmd_run(const Circuit& c, const Options& opt) {
  const CircuitReport rep = run_circuit(c, opt.tol);
  Output out;
  Json& j = out.json;
  j["command"] = "run";
  j["num_qubits"] = c.num_qubits;
  j["gates"] = Json::array();
  for (const auto& g : c.gates) j["gates"].push_back({{"name", g.name}, {"targets", g.targets}});
  j["initial_bloch"] = detail::vec_json(rep.initial.rho());
  j["final_bloch"] = detail::vec_json(rep.final_state.rho());
  Json audit = Json::array();
  for (const auto& a : rep.audit)
    audit.push_back({{"step", a.index},
                     {"gate", a.name},
                     {"purity", a.purity},
                     {"min_eigenvalue", a.min_eigenvalue},
                     {"pass", a.pass}});
  j["audit"] = audit;
  Json qs = Json::array();
  for (const auto& q : rep.qubits)
    qs.push_back({{"qubit", q.qubit},
                  {"expectation", q.expectation},
                  {"w_plus", q.w_plus},
                  {"w_minus", q.w_minus}});
  j["readout"] = qs;
  Json ps = Json::array();
  for (const auto& p : rep.pairs)
    ps.push_back({{"qubits", {p.first, p.second}},
                  {"correlation", p.correlation},
                  {"w_pp", p.joint.at(1, 1)},
                  {"w_pm", p.joint.at(1, -1)},
                  {"w_mp", p.joint.at(-1, 1)},
                  {"w_mm", p.joint.at(-1, -1)}});
  j["pairs"] = ps;

  std::ostringstream t;
  t << "qubits " << c.num_qubits << ", gates " << c.gates.size() << "\n";
  t << "final bloch: " << detail::vec_text(rep.final_state.rho()) << "\n";
  t << "audit:\n";
  for (const auto& a : rep.audit)
    t << "  step " << a.index << " (" << a.name << "): purity " << detail::num(a.purity)
      << ", min eigenvalue " << detail::num(a.min_eigenvalue) << ", " << (a.pass ? "ok" : "FAIL")
      << "\n";
  t << "readout:\n";
  for (const auto& q : rep.qubits)
    t << "  qubit " << q.qubit << ": <A> = " << detail::num(q.expectation) << ", w+ = "
      << detail::num(q.w_plus) << ", w- = " << detail::num(q.w_minus) << "\n";
  for (const auto& p : rep.pairs)
    t << "  pair (" << p.first << "," << p.second << "): <AB>_m = " << detail::num(p.correlation)
      << ", w++ = " << detail::num(p.joint.at(1, 1)) << ", w+- = " << detail::num(p.joint.at(1, -1))
      << ", w-+ = " << detail::num(p.joint.at(-1, 1)) << ", w-- = "
      << detail::num(p.joint.at(-1, -1)) << "\n";
  out.text = t.str();
  return out;
}

inline Output cmd_run_file(const std::string& path, const Options& opt) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open circuit file '" + path + "'");
  return cmd_run(parse_circuit(in), opt);
}

// ---------------------------------------------------------------- bell

struct BellArgs {
  std::optional<double> theta1;
  std::optional<double> theta2;
  int grid = 64;
  double lo = 0.0;
  double hi = std::numbers::pi / 2.0;
  int epsilon = 1;
};

inline Json bell_json(const BellReport& r) {
  return {{"theta1", r.theta1}, {"theta2", r.theta2}, {"c1", r.c1},   {"c2", r.c2},
          {"c12", r.c12},       {"lhs", r.lhs},       {"rhs", r.rhs}, {"violated", r.violated}};
}

inline std::string bell_row(const BellReport& r) {
  using detail::num;
  return num(r.theta1) + "\t" + num(r.theta2) + "\t" + num(r.c1) + "\t" + num(r.c2) + "\t" +
         num(r.c12) + "\t" + num(r.lhs) + "\t" + num(r.rhs) + "\t" +
         (r.violated ? "true" : "false") + "\n";
}

inline Output cmd_bell(const BellArgs& a, const Options&) {
  if (a.epsilon != 1 && a.epsilon != -1) throw InvalidArgument("--epsilon must be +1 or -1");
  if (a.theta1.has_value() != a.theta2.has_value())
    throw InvalidArgument("--theta1 and --theta2 must be given together");
  const DensityMatrix rho = density_from_bloch(singlet_state(a.epsilon).bloch);
  std::vector<BellReport> rows;
  if (a.theta1) {
    rows.push_back(bell_check(rho, *a.theta1, *a.theta2));
  } else {
    if (a.grid < 1) throw InvalidArgument("--grid must be >= 1");
    if (!(a.hi >= a.lo)) throw InvalidArgument("angle range is empty");
    rows = bell_scan(rho, a.grid, a.lo, a.hi);
  }
  const BellReport best = max_violation(rows);
  Output out;
  out.json["command"] = "bell";
  out.json["epsilon"] = a.epsilon;
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(bell_json(r));
  out.json["rows"] = arr;
  out.json["max_violation"] = bell_json(best);
  out.json["max_violation"]["margin"] = best.lhs - best.rhs;
  std::string t = "theta1\ttheta2\tc1\tc2\tc12\tlhs\trhs\tviolated\n";
  for (const auto& r : rows) t += bell_row(r);
  t += "# max lhs - rhs = " + detail::num(best.lhs - best.rhs) + " at (" +
       detail::num(best.theta1) + ", " + detail::num(best.theta2) + ")\n";
  out.text = t;
  return out;
}

// ---------------------------------------------------------------- sequence

struct SequenceArgs {
  std::string state;
  std::string obs;       // comma separated, measurement order
  std::string outcomes;  // empty: correlation mode; else one of + - * per observable
};

/// tr(K rho K^dagger) with K the ordered projector product.
inline double projector_product_probability(const DensityMatrix& rho,
                                            const std::vector<QuantumObservable>& ops,
                                            const std::vector<int>& outs) {
  const int m = rho.dim();
  Matrix k = Matrix::Identity(m, m);
  for (std::size_t i = 0; i < ops.size(); ++i)
    k = 0.5 * (Matrix::Identity(m, m) + static_cast<double>(outs[i]) * ops[i].op()) * k;
  return (k * rho.mat() * k.adjoint()).trace().real();
}

inline Output cmd_sequence(const SequenceArgs& a, const Options& opt) {
  const BlochState state = parse_state(a.state, opt);
  const auto pos = positivity_check(state, opt.tol);
  if (!pos.pass)
    throw ValidationError("state violates positivity (min eigenvalue " +
                          detail::num(pos.min_eigenvalue) + ")");
  const DensityMatrix rho = density_from_bloch(state);
  std::vector<QuantumObservable> ops;
  std::vector<std::string> names = detail::split(a.obs, ',');
  if (a.obs.empty()) throw InvalidArgument("--obs needs at least one observable");
  for (const auto& tok : names) ops.push_back(parse_observable(tok, state.basis_ptr()));
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (!ops[i].is_two_level())
      throw UnsupportedError("observable '" + names[i] +
                             "' has more than two values; sequences need two-level observables");

  Output out;
  out.json["command"] = "sequence";
  out.json["state"] = a.state;
  out.json["observables"] = names;
  std::ostringstream t;
  if (a.outcomes.empty()) {
    double trace_form = 0.0, enumerated = 0.0;
    if (ops.size() == 1) {
      trace_form = rho.expect(ops[0].op()).real();
      enumerated = sequence_probabilities(rho, ops, {1}) - sequence_probabilities(rho, ops, {-1});
    } else {
      // Measurement order is the reverse of the product order.
      const std::vector<QuantumObservable> chain(ops.rbegin(), ops.rend());
      trace_form = chain_correlation(rho, chain);
      enumerated = chain_correlation_enumerated(rho, chain);
    }
    out.json["mode"] = "correlation";
    out.json["trace_formula"] = trace_form;
    out.json["iterated_reduction"] = enumerated;
    out.json["difference"] = trace_form - enumerated;
    t << "correlation (trace formula): " << detail::num(trace_form) << "\n"
      << "correlation (iterated reduction): " << detail::num(enumerated) << "\n"
      << "difference: " << detail::num(trace_form - enumerated) << "\n";
  } else {
    std::string pat;
    for (char ch : a.outcomes)
      if (ch != ',' && ch != ' ') pat += ch;
    if (pat.size() != ops.size())
      throw InvalidArgument("--outcomes needs one of + - * per observable");
    std::vector<int> free;
    std::vector<int> outs(ops.size(), 1);
    for (std::size_t i = 0; i < pat.size(); ++i) {
      if (pat[i] == '+') outs[i] = 1;
      else if (pat[i] == '-') outs[i] = -1;
      else if (pat[i] == '*') free.push_back(static_cast<int>(i));
      else throw InvalidArgument(std::string("bad outcome symbol '") + pat[i] + "'");
    }
    double iterated = 0.0, trace_form = 0.0;
    for (unsigned mask = 0; mask < (1u << free.size()); ++mask) {
      for (std::size_t f = 0; f < free.size(); ++f)
        outs[static_cast<std::size_t>(free[f])] = (mask >> f) & 1u ? -1 : 1;
      iterated += sequence_probabilities(rho, ops, outs);
      trace_form += projector_product_probability(rho, ops, outs);
    }
    out.json["mode"] = "probability";
    out.json["outcomes"] = pat;
    out.json["iterated_reduction"] = iterated;
    out.json["trace_formula"] = trace_form;
    out.json["difference"] = iterated - trace_form;
    t << "probability of " << pat << " (iterated reduction): " << detail::num(iterated) << "\n"
      << "probability of " << pat << " (projector products): " << detail::num(trace_form) << "\n"
      << "difference: " << detail::num(iterated - trace_form) << "\n";
  }
  out.text = t.str();
  return out;
}

// ---------------------------------------------------------------- ensemble

struct EnsembleArgs {
  std::string state;
  std::string dirs = "axes";
  double env = 0.0;
  bool table = true;
};

inline Output cmd_ensemble(const EnsembleArgs& a, const Options& opt) {
  if (a.env < 0.0) throw InvalidArgument("--env must be >= 0");
  const BlochState state = parse_state(a.state, opt);
  const DirectionSet dirs = DirectionSet::preset(a.dirs, state.basis_ptr(), opt.seed);
  const ClassicalDistribution sys = system_distribution(state, dirs, opt.tol);
  ClassicalDistribution dist = sys;
  const EnvironmentSample env = sample_environment(sys, dirs, a.env, opt.seed);
  dist.delta = env.delta;
  const EnvironmentReport check = validate_environment(dist, dirs);
  if (!check.pass) throw ValidationError("environment failed validation: " + check.violations.front());

  Output out;
  Json& j = out.json;
  j["command"] = "ensemble";
  j["state"] = a.state;
  j["dirs"] = a.dirs;
  j["num_directions"] = dirs.size();
  j["num_states"] = dirs.num_states();
  j["env_magnitude"] = a.env;
  j["seed"] = opt.seed;
  if (!env.warning.empty()) j["warning"] = env.warning;

  // Marginals are only defined when every basis axis is present.
  std::optional<double> marginal_dev;
  bool all_axes = true;
  for (int k = 0; k < state.size() && all_axes; ++k) {
    RVector ax = RVector::Zero(state.size());
    ax(k) = 1.0;
    all_axes = dirs.find(ax).first >= 0;
  }
  if (all_axes) marginal_dev = (marginal_bloch(dist, dirs).rho() - state.rho()).cwiseAbs().maxCoeff();

  double born_dev = 0.0;
  const DensityMatrix rho = density_from_bloch(state);
  for (int i = 0; i < dirs.size(); ++i) {
    const RVector mass = level_mass(dist, dirs, i);
    const auto born = born_probabilities(QuantumObservable(dirs.direction(i), 0.0, state.basis_ptr()), rho);
    for (std::size_t l = 0; l < born.size(); ++l)
      born_dev = std::max(born_dev, std::abs(mass(static_cast<Eigen::Index>(l)) - born[l].probability));
  }

  // First pair of directions whose operators do not commute.
  int pa = -1, pb = -1;
  for (int i = 0; i < dirs.size() && pa < 0; ++i)
    for (int k = i + 1; k < dirs.size(); ++k) {
      const Matrix x = state.basis().expand(dirs.direction(i));
      const Matrix y = state.basis().expand(dirs.direction(k));
      if (max_abs(commutator(x, y)) > tol::kCommute) {
        pa = i;
        pb = k;
        break;
      }
    }

  Json summary;
  summary["marginal_deviation"] = marginal_dev ? Json(*marginal_dev) : Json(nullptr);
  summary["born_deviation"] = born_dev;
  summary["constraint_residual"] = check.max_constraint;
  std::ostringstream t;
  if (a.table) t << ensemble_table(dist, dirs);
  t << "# states " << dirs.num_states() << ", directions " << dirs.size() << "\n";
  if (!env.warning.empty()) t << "# warning: " << env.warning << "\n";
  t << "# marginal deviation: " << (marginal_dev ? detail::num(*marginal_dev) : "n/a") << "\n";
  t << "# born deviation: " << detail::num(born_dev) << "\n";
  t << "# constraint residual: " << detail::num(check.max_constraint) << "\n";
  if (pa >= 0) {
    const RVector ta = dirs.value_table(pa), tb = dirs.value_table(pb);
    const auto qa = QuantumObservable(dirs.direction(pa), 0.0, state.basis_ptr());
    const auto qb = QuantumObservable(dirs.direction(pb), 0.0, state.basis_ptr());
    Json pair;
    pair["directions"] = {pa + 1, pb + 1};
    Json seeds = Json::array();
    t << "# pair (" << pa + 1 << "," << pb + 1 << "):";
    if (qa.is_two_level() && qb.is_two_level()) {
      pair["measurement_correlation"] = measurement_correlation(rho, qa, qb);
      t << " <AB>_m = " << detail::num(pair["measurement_correlation"].get<double>()) << ";";
    }
    for (std::uint64_t s : {opt.seed, opt.seed + 1}) {
      ClassicalDistribution d = sys;
      d.delta = sample_environment(sys, dirs, a.env, s).delta;
      const double c = classical_correlation(ta, tb, d);
      seeds.push_back({{"seed", s}, {"classical_correlation", c}});
      t << " <A.B>[seed " << s << "] = " << detail::num(c) << ";";
    }
    t << "\n";
    pair["seeds"] = seeds;
    summary["noncommuting_pair"] = pair;
  }
  j["summary"] = summary;
  if (a.table) {
    Json rows = Json::array();
    const RVector ps = dist.system();
    for (long long tau = 0; tau < dirs.num_states(); ++tau)
      rows.push_back({{"state", dirs.label_string(tau)},
                      {"p_s", ps(tau)},
                      {"delta_p_e", dist.delta(tau)},
                      {"total", ps(tau) + dist.delta(tau)}});
    j["rows"] = rows;
  }
  out.text = t.str();
  return out;
}

}  // namespace clsq::cli
