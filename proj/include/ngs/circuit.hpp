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

#include <string>
#include <vector>

#include "ngs/hamiltonian.hpp"

namespace ngs {

// Qubit j carries mode j with Z_j = 2 n_j - 1, so |0> is an occupied mode.
// Under this encoding
//   U_FA = e^{i phi} prod_j exp(i theta_j Z_j) prod_{j<k} exp(i theta_jk Z_j Z_k)
// with theta_j = (1/4) sum_k omega_jk, theta_jk = omega_jk / 4 and
// phi = (1/8) sum_{j != k} omega_jk.

struct Gate {
  enum class Kind { Rz, ZZ };
  Kind kind;
  Index a;
  Index b;       // unused for Rz
  double angle;  // theta in exp(i theta Z) or exp(i theta Z Z)
};

struct GateList {
  Index n_qubits = 0;
  std::vector<Gate> gates;
  double global_phase = 0.0;

  std::size_t rz_count() const;
  std::size_t zz_count() const;
};

inline constexpr double kGateAnglePrune = 1e-14;

GateList emit_ufa(const NonGaussianParams& omega);

/// Diagonal of the gate product in the occupation basis of the oracle.
CVector gate_list_diagonal(const GateList& gates, bool include_global_phase = true);

/// max_b |(gates)_bb - (U_FA)_bb| against the dense flux exponential.
double verify_dense(const GateList& gates, const NonGaussianParams& omega);

struct QasmOptions {
  bool native_rzz = false;
};

/// OpenQASM 2.0 program; exp(i theta Z) becomes rz(-2 theta).
std::string to_qasm(const GateList& gates, const QasmOptions& options = {});

/// Re-simulates the subset of OpenQASM 2.0 written by to_qasm (rz, cx, rzz)
/// and returns the diagonal in the occupation basis. rz(l) is taken as
/// exp(-i l Z / 2).
CVector simulate_qasm(const std::string& program);

enum class Connectivity { AllToAll, Linear };

struct ResourceReport {
  Index n_qubits = 0;
  std::size_t rz_count = 0;
  std::size_t zz_count = 0;
  std::size_t zz_layers = 0;     // greedy edge colouring of the ZZ graph
  std::size_t depth = 0;         // single-qubit layer plus ZZ layers
  std::size_t log2_lower_bound = 0;
  std::size_t swap_upper_bound = 0;
  std::size_t dense_zz_count = 0;  // N(N-1)/2
  Connectivity connectivity = Connectivity::AllToAll;
};

ResourceReport resource_report(const GateList& gates, Connectivity connectivity);

/// JSON text of the report.
std::string resource_report_json(const ResourceReport& report);

}  // namespace ngs
