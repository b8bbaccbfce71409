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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ngs/optimizer.hpp"

namespace ngs::cli {

struct HubbardSpec {
  Index sites = 2;
  double t = 1.0;
  double u = 4.0;
  double mu = 0.0;
  bool periodic = true;
};

enum class InitKind { MeanField, Random, Checkpoint };

struct InitSpec {
  InitKind kind = InitKind::MeanField;
  std::optional<Index> filling;  // particles; defaults to half the modes
  double perturbation = 0.0;     // scale of a random Gaussian rotation
  double scale = 1.0;            // random initialization only
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint;
};

// Run configuration. JSON keys:
//   hamiltonian      path to a Hamiltonian file, or
//                    {"model": "hubbard", "sites", "t", "u", "mu", "periodic"}
//   init             {"type": "mean-field" | "random" | "checkpoint",
//                     "filling", "perturbation", "scale", "seed", "path"}
//   omega_update     "hitgd" | "simple" | "frozen"; simple_c for "simple"
//   dtau_initial, dtau_min, dtau_max, dtau_growth
//   tol_grad, tol_energy, patience, max_steps, threads
//   checkpoint, trajectory   output paths
// Relative paths are resolved against the directory of the config file.
struct RunConfig {
  std::optional<std::filesystem::path> hamiltonian_file;
  HubbardSpec hubbard;
  InitSpec init;
  OptimizerConfig optimizer;
  std::filesystem::path checkpoint_out = "checkpoint.json";
  std::filesystem::path trajectory_out = "trajectory.jsonl";
};

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Checks the invariants that command-line overrides could break.
void validate_run_config(const RunConfig& config);

ManyBodyHamiltonian build_hamiltonian(const RunConfig& config);
OptimizerState build_initial_state(const RunConfig& config, const ManyBodyHamiltonian& h);

OmegaUpdate parse_omega_update(const std::string& name);

}  // namespace ngs::cli
