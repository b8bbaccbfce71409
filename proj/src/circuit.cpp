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

#include "ngs/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ngs/oracle.hpp"

namespace ngs {

namespace {

std::string format_angle(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double z_value(std::uint64_t occupation, Index mode) {
  return ((occupation >> mode) & 1) ? 1.0 : -1.0;
}

}  // namespace

std::size_t GateList::rz_count() const {
  std::size_t c = 0;
  for (const Gate& g : gates) c += g.kind == Gate::Kind::Rz;
  return c;
}

std::size_t GateList::zz_count() const {
  std::size_t c = 0;
  for (const Gate& g : gates) c += g.kind == Gate::Kind::ZZ;
  return c;
}

GateList emit_ufa(const NonGaussianParams& omega) {
  const Index n = omega.n_modes();
  const RMatrix& w = omega.omega();
  GateList out;
  out.n_qubits = n;
  for (Index j = 0; j < n; ++j) {
    const double theta = 0.25 * w.row(j).sum();
    if (std::abs(theta) >= kGateAnglePrune) out.gates.push_back({Gate::Kind::Rz, j, j, theta});
  }
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      const double theta = 0.25 * w(j, k);
      if (std::abs(theta) >= kGateAnglePrune) out.gates.push_back({Gate::Kind::ZZ, j, k, theta});
    }
  }
  out.global_phase = 0.125 * (w.sum() - w.diagonal().sum());
  return out;
}

CVector gate_list_diagonal(const GateList& gates, bool include_global_phase) {
  const Index n = gates.n_qubits;
  if (n < 1 || n > kMaxOracleDenseModes) {
    throw ResourceError("gate-list diagonal limited to " +
                        std::to_string(kMaxOracleDenseModes) + " qubits");
  }
  const Index dim = Index{1} << n;
  CVector diag(dim);
  for (Index b = 0; b < dim; ++b) {
    const auto occ = static_cast<std::uint64_t>(b);
    double phase = include_global_phase ? gates.global_phase : 0.0;
    for (const Gate& g : gates.gates) {
      if (g.a < 0 || g.a >= n || g.b < 0 || g.b >= n) {
        throw DimensionError("gate qubit index out of range");
      }
      if (g.kind == Gate::Kind::Rz) {
        phase += g.angle * z_value(occ, g.a);
      } else {
        phase += g.angle * z_value(occ, g.a) * z_value(occ, g.b);
      }
    }
    diag(b) = std::polar(1.0, phase);
  }
  return diag;
}

double verify_dense(const GateList& gates, const NonGaussianParams& omega) {
  if (gates.n_qubits != omega.n_modes()) throw DimensionError("qubit count mismatch");
  return (gate_list_diagonal(gates) - flux_diagonal(omega)).cwiseAbs().maxCoeff();
}

std::string to_qasm(const GateList& gates, const QasmOptions& options) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "// global phase " << format_angle(gates.global_phase) << "\n";
  if (gates.n_qubits > 0) out << "qreg q[" << gates.n_qubits << "];\n";
  for (const Gate& g : gates.gates) {
    const std::string lambda = format_angle(-2.0 * g.angle);
    if (g.kind == Gate::Kind::Rz) {
      out << "rz(" << lambda << ") q[" << g.a << "];\n";
    } else if (options.native_rzz) {
      out << "rzz(" << lambda << ") q[" << g.a << "],q[" << g.b << "];\n";
    } else {
      out << "cx q[" << g.a << "],q[" << g.b << "];\n";
      out << "rz(" << lambda << ") q[" << g.b << "];\n";
      out << "cx q[" << g.a << "],q[" << g.b << "];\n";
    }
  }
  return out.str();
}

CVector simulate_qasm(const std::string& program) {
  struct Instr {
    enum class Op { Rz, Cx, Rzz } op;
    double lambda;
    Index a;
    Index b;
  };
  static const std::regex qreg_re(R"(^qreg\s+q\[(\d+)\]\s*;$)");
  static const std::regex rz_re(R"(^rz\(([^)]+)\)\s+q\[(\d+)\]\s*;$)");
  static const std::regex cx_re(R"(^cx\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]\s*;$)");
  static const std::regex rzz_re(R"(^rzz\(([^)]+)\)\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]\s*;$)");

  Index n = 0;
  std::vector<Instr> instrs;
  std::istringstream in(program);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("qasm line " + std::to_string(line_no) + ": " + what);
  };
  auto to_real = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') fail("invalid angle '" + s + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find("//");
    if (comment != std::string::npos) line.erase(comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::smatch m;
    if (line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) continue;
    if (std::regex_match(line, m, qreg_re)) {
      n = std::stol(m[1]);
    } else if (std::regex_match(line, m, rz_re)) {
      instrs.push_back({Instr::Op::Rz, to_real(m[1]), std::stol(m[2]), 0});
    } else if (std::regex_match(line, m, cx_re)) {
      instrs.push_back({Instr::Op::Cx, 0.0, std::stol(m[1]), std::stol(m[2])});
    } else if (std::regex_match(line, m, rzz_re)) {
      instrs.push_back({Instr::Op::Rzz, to_real(m[1]), std::stol(m[2]), std::stol(m[3])});
    } else {
      fail("unsupported statement '" + line + "'");
    }
  }
  if (n < 1 || n > kMaxOracleDenseModes) throw ResourceError("qasm register size unsupported");
  for (const Instr& i : instrs) {
    if (i.a >= n || i.b >= n) throw ParseError("qasm qubit index out of range");
  }
  const Index dim = Index{1} << n;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  CVector diag(dim);
  for (Index b = 0; b < dim; ++b) {
    // Occupied mode <-> qubit |0>.
    const std::uint64_t start = all & ~static_cast<std::uint64_t>(b);
    std::uint64_t x = start;
    double phase = 0.0;
    auto z = [&](Index q) { return ((x >> q) & 1) ? -1.0 : 1.0; };
    for (const Instr& i : instrs) {
      switch (i.op) {
        case Instr::Op::Rz:
          phase += -0.5 * i.lambda * z(i.a);
          break;
        case Instr::Op::Rzz:
          phase += -0.5 * i.lambda * z(i.a) * z(i.b);
          break;
        case Instr::Op::Cx:
          if ((x >> i.a) & 1) x ^= std::uint64_t{1} << i.b;
          break;
      }
    }
    if (x != start) throw ParseError("qasm program is not diagonal");
    diag(b) = std::polar(1.0, phase);
  }
  return diag;
}

ResourceReport resource_report(const GateList& gates, Connectivity connectivity) {
  ResourceReport r;
  const Index n = gates.n_qubits;
  r.n_qubits = n;
  r.connectivity = connectivity;
  r.rz_count = gates.rz_count();
  r.zz_count = gates.zz_count();
  r.dense_zz_count = static_cast<std::size_t>(n * (n - 1) / 2);

  // Greedy edge colouring: each ZZ takes the smallest layer free on both qubits.
  std::vector<std::set<std::size_t>> used(static_cast<std::size_t>(n));
  std::size_t layers = 0;
  std::size_t naive_swaps = 0;
  for (const Gate& g : gates.gates) {
    if (g.kind != Gate::Kind::ZZ) continue;
    std::size_t c = 0;
    while (used[g.a].count(c) || used[g.b].count(c)) ++c;
    used[g.a].insert(c);
    used[g.b].insert(c);
    layers = std::max(layers, c + 1);
    naive_swaps += 2 * static_cast<std::size_t>(std::abs(g.a - g.b) - 1);
  }
  r.zz_layers = layers;
  r.depth = (r.rz_count > 0 ? 1 : 0) + layers;
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < static_cast<std::size_t>(std::max<Index>(n, 1))) ++lg;
  r.log2_lower_bound = lg;
  if (connectivity == Connectivity::Linear) {
    // An odd-even transposition network makes every pair adjacent once.
    r.swap_upper_bound = std::min(naive_swaps, r.dense_zz_count);
  }
  return r;
}

std::string resource_report_json(const ResourceReport& r) {
  nlohmann::ordered_json j;
  j["n_qubits"] = r.n_qubits;
  j["connectivity"] = r.connectivity == Connectivity::Linear ? "linear" : "all-to-all";
  j["rz_count"] = r.rz_count;
  j["zz_count"] = r.zz_count;
  j["two_qubit_gate_count"] = r.zz_count;
  j["zz_layers"] = r.zz_layers;
  j["depth_estimate"] = r.depth;
  j["depth_lower_bound_log2"] = r.log2_lower_bound;
  j["swap_upper_bound"] = r.swap_upper_bound;
  j["dense_zz_count"] = r.dense_zz_count;
  j["note"] =
      "one ZZ gate per pair j<k with nonzero omega; omega_jj = 0, so a dense "
      "omega needs N(N-1)/2 ZZ gates rather than N(N+1)/2";
  return j.dump(2);
}

}  // namespace ngs
