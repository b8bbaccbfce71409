/*
 * Copyright 2026 The ngs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ngs: model generation, optimization runs, oracle validation and circuit
// export.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure (including failed validation), 4 stagnation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ngs/checkpoint.hpp"
#include "ngs/circuit.hpp"
#include "ngs/oracle.hpp"
#include "run_config.hpp"
#include "validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitStagnation = 4;

using namespace ngs;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

struct ModelArgs {
  Index sites = 2;
  double t = 1.0;
  double u = 4.0;
  double mu = 0.0;
  bool open = false;
  std::string out = "-";
};

int cmd_model(const ModelArgs& a) {
  const ManyBodyHamiltonian h = hubbard_model(a.sites, a.t, a.u, a.mu, !a.open);
  const std::string text = format_hamiltonian(h);
  if (a.out == "-") {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return kExitOk;
}

struct RunArgs {
  std::string config;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> omega_update;
  std::optional<double> c;
  std::optional<int> max_steps;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  cli::RunConfig config = cli::load_run_config(a.config);
  if (a.threads) config.optimizer.eval.threads = *a.threads;
  if (a.seed) config.init.seed = *a.seed;
  if (a.omega_update) config.optimizer.update = cli::parse_omega_update(*a.omega_update);
  if (a.c) config.optimizer.simple_c = *a.c;
  if (a.max_steps) config.optimizer.max_steps = *a.max_steps;
  cli::validate_run_config(config);

  const ManyBodyHamiltonian h = cli::build_hamiltonian(config);
  const OptimizerState initial = cli::build_initial_state(config, h);

  std::ofstream traj(config.trajectory_out);
  if (!traj) throw ConfigError("cannot write " + config.trajectory_out.string());
  if (!a.quiet) std::printf("initial energy %.17g\n", initial.energy);

  OptimizerState last = initial;
  try {
    const RunResult r = run(h, initial, config.optimizer, [&](const TrajectoryRecord& rec) {
      traj << trajectory_json(rec) << "\n";
      traj.flush();
    });
    last = r.state;
    save_checkpoint(r.state, config.checkpoint_out);
    if (!a.quiet) {
      std::printf("stop %s after %zu steps, energy %.17g\n", to_string(r.reason).c_str(),
                  r.trajectory.size(), r.state.energy);
    }
  } catch (const StagnationError&) {
    save_checkpoint(last, config.checkpoint_out);
    throw;
  }
  return kExitOk;
}

struct ValidateArgs {
  cli::ValidateOptions options;
  std::string hamiltonian;
};

int cmd_validate(const ValidateArgs& a) {
  std::optional<ManyBodyHamiltonian> h;
  cli::ValidateOptions options = a.options;
  if (!a.hamiltonian.empty()) {
    h = load_hamiltonian(a.hamiltonian);
    options.n_modes = h->n_modes();
  }
  bool ok = true;
  for (const cli::CheckResult& r : cli::run_validation(options, h)) {
    std::printf("%-22s %-4s max deviation %.3e (tolerance %.0e)\n", r.name.c_str(),
                r.passed() ? "ok" : "FAIL", r.deviation, r.tolerance);
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitNumerical;
}

struct CircuitArgs {
  std::string checkpoint;
  std::string qasm = "circuit.qasm";
  std::string report = "resources.json";
  std::string connectivity = "all-to-all";
  bool native_rzz = false;
};

int cmd_circuit(const CircuitArgs& a) {
  const OptimizerState s = load_checkpoint(a.checkpoint);
  const GateList gates = emit_ufa(s.omega);
  write_text(a.qasm, to_qasm(gates, {a.native_rzz}));
  const Connectivity conn =
      a.connectivity == "linear" ? Connectivity::Linear : Connectivity::AllToAll;
  write_text(a.report, resource_report_json(resource_report(gates, conn)) + "\n");
  std::printf("%zu rz, %zu zz gates, global phase %.17g\n", gates.rz_count(), gates.zz_count(),
              gates.global_phase);
  if (gates.n_qubits <= kMaxOracleDenseModes) {
    const double dev = verify_dense(gates, s.omega);
    std::printf("dense check max deviation %.3e\n", dev);
    if (dev > 1e-10) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Gaussian fermionic variational states"};
  app.require_subcommand(1);

  ModelArgs model;
  CLI::App* model_cmd = app.add_subcommand("model", "Generate a model Hamiltonian file");
  CLI::App* hubbard_cmd = model_cmd->add_subcommand("hubbard", "Fermi-Hubbard chain");
  model_cmd->require_subcommand(1);
  hubbard_cmd->add_option("--sites", model.sites, "Number of sites")
      ->check(CLI::Range(Index{2}, Index{1000}));
  hubbard_cmd->add_option("--t", model.t, "Hopping amplitude");
  hubbard_cmd->add_option("--u", model.u, "On-site interaction");
  hubbard_cmd->add_option("--mu", model.mu, "Chemical potential");
  hubbard_cmd->add_flag("--open", model.open, "Open instead of periodic boundaries");
  hubbard_cmd->add_option("-o,--output", model.out, "Output file, '-' for stdout");

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Optimize a variational state");
  run_cmd->add_option("--config", run_args.config, "JSON run configuration")->required();
  run_cmd->add_option("--threads", run_args.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_args.seed, "Initialization seed");
  run_cmd->add_option("--omega-update", run_args.omega_update, "hitgd, simple or frozen")
      ->check(CLI::IsMember({"hitgd", "simple", "frozen"}));
  run_cmd->add_option("--c", run_args.c, "Coefficient of the simple omega update");
  run_cmd->add_option("--max-steps", run_args.max_steps, "Step limit");
  run_cmd->add_flag("-q,--quiet", run_args.quiet, "Suppress progress output");

  ValidateArgs val;
  CLI::App* val_cmd = app.add_subcommand("validate", "Cross-check against the dense oracle");
  val_cmd->add_option("--modes", val.options.n_modes, "Number of modes");
  val_cmd->add_option("--draws", val.options.draws, "Random instances")
      ->check(CLI::PositiveNumber);
  val_cmd->add_option("--seed", val.options.seed, "Random seed");
  val_cmd->add_option("--threads", val.options.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  val_cmd->add_option("--hamiltonian", val.hamiltonian, "Hamiltonian file to check with");

  CircuitArgs circ;
  CLI::App* circ_cmd = app.add_subcommand("circuit", "Export the flux-attachment circuit");
  circ_cmd->add_option("--checkpoint", circ.checkpoint, "Checkpoint file")->required();
  circ_cmd->add_option("--qasm", circ.qasm, "OpenQASM output");
  circ_cmd->add_option("--report", circ.report, "Resource report output");
  circ_cmd->add_option("--connectivity", circ.connectivity, "all-to-all or linear")
      ->check(CLI::IsMember({"all-to-all", "linear"}));
  circ_cmd->add_flag("--native-rzz", circ.native_rzz, "Emit rzz instead of cx-rz-cx");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*model_cmd) return cmd_model(model);
    if (*run_cmd) return cmd_run(run_args);
    if (*val_cmd) return cmd_validate(val);
    if (*circ_cmd) return cmd_circuit(circ);
  } catch (const StagnationError& e) {
    std::fprintf(stderr, "stagnation: %s\n", e.what());
    return kExitStagnation;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
