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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli_commands.hpp"

namespace {

int fail(const std::string& kind, const std::exception& e, int code) {
  std::cerr << "clsq: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace clsq::cli;

  CLI::App app{"Bloch-vector quantum states, measurement sequences and classical ensembles"};
  app.require_subcommand(1);
  Options opt;
  bool json = false;
  app.add_flag("--json", json, "Print JSON instead of text");
  app.add_option("--tol", opt.tol, "Positivity tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "Random seed")->capture_default_str();

  std::string circuit_path;
  auto* run = app.add_subcommand("run", "Run a circuit file");
  run->add_option("file", circuit_path, "Circuit file")->required();

  BellArgs bell;
  auto* bell_cmd = app.add_subcommand("bell", "Check the Bell inequality on the singlet");
  bell_cmd->add_option("--theta1", bell.theta1, "First angle");
  bell_cmd->add_option("--theta2", bell.theta2, "Second angle");
  bell_cmd->add_option("--grid", bell.grid, "Grid points per axis")->capture_default_str();
  bell_cmd->add_option("--min", bell.lo, "Lower angle")->capture_default_str();
  bell_cmd->add_option("--max", bell.hi, "Upper angle")->capture_default_str();
  bell_cmd->add_option("--epsilon", bell.epsilon, "Singlet sign (+1 or -1)")->capture_default_str();

  SequenceArgs seq;
  auto* seq_cmd = app.add_subcommand("sequence", "Probabilities and correlations of sequences");
  seq_cmd->add_option("--state", seq.state, "State spec")->required();
  seq_cmd->add_option("--obs", seq.obs, "Observables in measurement order")->required();
  seq_cmd->add_option("--outcomes", seq.outcomes, "Outcome pattern such as +,*,-");

  EnsembleArgs ens;
  bool summary_only = false;
  auto* ens_cmd = app.add_subcommand("ensemble", "Classical ensemble of a state");
  ens_cmd->add_option("--state", ens.state, "State spec")->required();
  ens_cmd->add_option("--dirs", ens.dirs, "Direction preset (axes or m12)")->capture_default_str();
  ens_cmd->add_option("--env", ens.env, "Environment magnitude")->capture_default_str();
  ens_cmd->add_flag("--summary", summary_only, "Omit the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    Output out;
    if (*run) {
      out = cmd_run_file(circuit_path, opt);
    } else if (*bell_cmd) {
      out = cmd_bell(bell, opt);
    } else if (*seq_cmd) {
      out = cmd_sequence(seq, opt);
    } else {
      ens.table = !summary_only;
      out = cmd_ensemble(ens, opt);
    }
    if (json)
      std::cout << out.json.dump(2) << "\n";
    else
      std::cout << out.text;
    return kExitOk;
  } catch (const clsq::ParseError& e) {
    return fail("parse error", e, kExitParse);
  } catch (const clsq::InvalidArgument& e) {
    return fail("invalid argument", e, kExitParse);
  } catch (const clsq::ValidationError& e) {
    return fail("validation failed", e, kExitValidation);
  } catch (const clsq::BudgetError& e) {
    return fail("budget exceeded", e, kExitValidation);
  } catch (const clsq::UnsupportedError& e) {
    return fail("unsupported", e, kExitValidation);
  } catch (const std::exception& e) {
    return fail("error", e, 1);
  }
}
