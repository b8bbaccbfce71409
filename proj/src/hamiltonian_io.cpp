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

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "ngs/hamiltonian.hpp"

namespace ngs {

ManyBodyHamiltonian hubbard_model(Index sites, double t, double u, double mu,
                                  bool periodic) {
  if (sites < 2) throw ValidationError("Hubbard model needs at least 2 sites");
  const Index n = 2 * sites;
  CMatrix f = CMatrix::Zero(n, n);
  std::vector<std::pair<Index, Index>> bonds;
  for (Index i = 0; i + 1 < sites; ++i) bonds.emplace_back(i, i + 1);
  if (periodic && sites > 2) bonds.emplace_back(sites - 1, 0);
  for (Index spin = 0; spin < 2; ++spin) {
    const Index off = spin * sites;
    for (const auto& [a, b] : bonds) {
      f(off + a, off + b) += -t;
      f(off + b, off + a) += -t;
    }
    for (Index i = 0; i < sites; ++i) f(off + i, off + i) = -mu;
  }
  std::vector<double> h(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto at = [n](Index p, Index q, Index r, Index s) {
    return static_cast<std::size_t>(((p * n + q) * n + r) * n + s);
  };
  for (Index i = 0; i < sites; ++i) {
    const Index a = i;
    const Index b = sites + i;
    // U n_a n_b = (1/2) sum h_pqrs c_p^+ c_q^+ c_r c_s
    h[at(a, b, b, a)] = u / 2.0;
    h[at(b, a, a, b)] = u / 2.0;
    h[at(a, b, a, b)] = -u / 2.0;
    h[at(b, a, b, a)] = -u / 2.0;
  }
  return ManyBodyHamiltonian(n, std::move(f), std::move(h));
}

ManyBodyHamiltonian random_hamiltonian(Index n_modes, std::mt19937_64& rng) {
  if (n_modes < 1) throw DimensionError("n_modes must be positive");
  const Index n = n_modes;
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix f(n, n);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) f(p, q) = Complex(gauss(rng), gauss(rng));
  f = 0.5 * (f + f.adjoint()).eval();
  std::vector<double> h(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto at = [n](Index p, Index q, Index r, Index s) {
    return static_cast<std::size_t>(((p * n + q) * n + r) * n + s);
  };
  std::vector<bool> done(h.size(), false);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      for (Index r = 0; r < n; ++r) {
        for (Index s = 0; s < n; ++s) {
          if (p == q || r == s || done[at(p, q, r, s)]) continue;
          const double v = gauss(rng);
          const std::tuple<Index, Index, Index, Index, double> orbit[] = {
              {p, q, r, s, v},  {q, p, r, s, -v}, {p, q, s, r, -v}, {q, p, s, r, v},
              {s, r, q, p, v},  {r, s, q, p, -v}, {s, r, p, q, -v}, {r, s, p, q, v}};
          for (const auto& [a, b, c, d, x] : orbit) {
            h[at(a, b, c, d)] = x;
            done[at(a, b, c, d)] = true;
          }
        }
      }
    }
  }
  return ManyBodyHamiltonian(n, std::move(f), std::move(h));
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ": " << what;
  throw ParseError(msg.str());
}

double parse_real(const std::string& token, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
    parse_fail(line, "invalid number '" + token + "'");
  }
  return v;
}

Index parse_index(const std::string& token, std::size_t line, Index n) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
    parse_fail(line, "invalid index '" + token + "'");
  }
  if (v < 1 || v > n) {
    std::ostringstream msg;
    msg << "index " << v << " out of range 1.." << n;
    parse_fail(line, msg.str());
  }
  return static_cast<Index>(v - 1);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ManyBodyHamiltonian parse_hamiltonian(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  Index n = 0;
  CMatrix f;
  std::vector<double> h;
  std::set<std::tuple<Index, Index>> seen_f;
  std::set<std::tuple<Index, Index, Index, Index>> seen_h;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string s; fields >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    if (n == 0) {
      if (tok[0] != "NMODES" || tok.size() != 2) {
        parse_fail(line_no, "expected 'NMODES <n>' header");
      }
      errno = 0;
      char* end = nullptr;
      const long v = std::strtol(tok[1].c_str(), &end, 10);
      if (*end != '\0' || v < 1 || v > 64) parse_fail(line_no, "invalid mode count");
      n = static_cast<Index>(v);
      f = CMatrix::Zero(n, n);
      h.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
      continue;
    }
    if (tok[0] == "F") {
      if (tok.size() != 5) parse_fail(line_no, "expected 'F p q re im'");
      const Index p = parse_index(tok[1], line_no, n);
      const Index q = parse_index(tok[2], line_no, n);
      if (!seen_f.insert({p, q}).second) parse_fail(line_no, "duplicate F entry");
      f(p, q) = Complex(parse_real(tok[3], line_no), parse_real(tok[4], line_no));
    } else if (tok[0] == "H") {
      if (tok.size() != 6) parse_fail(line_no, "expected 'H p q r s value'");
      const Index p = parse_index(tok[1], line_no, n);
      const Index q = parse_index(tok[2], line_no, n);
      const Index r = parse_index(tok[3], line_no, n);
      const Index s = parse_index(tok[4], line_no, n);
      if (!seen_h.insert({p, q, r, s}).second) parse_fail(line_no, "duplicate H entry");
      h[static_cast<std::size_t>(((p * n + q) * n + r) * n + s)] =
          parse_real(tok[5], line_no);
    } else if (tok[0] == "NMODES") {
      parse_fail(line_no, "repeated NMODES header");
    } else {
      parse_fail(line_no, "unknown record '" + tok[0] + "'");
    }
  }
  if (n == 0) throw ParseError("missing NMODES header");
  return ManyBodyHamiltonian(n, std::move(f), std::move(h));
}

std::string format_hamiltonian(const ManyBodyHamiltonian& h) {
  std::ostringstream out;
  out << "NMODES " << h.n_modes() << "\n";
  for (const auto& t : h.one_body_terms()) {
    out << "F " << t.p + 1 << " " << t.q + 1 << " " << format_real(t.value.real())
        << " " << format_real(t.value.imag()) << "\n";
  }
  for (const auto& t : h.two_body_terms()) {
    out << "H " << t.p + 1 << " " << t.q + 1 << " " << t.r + 1 << " " << t.s + 1
        << " " << format_real(t.value) << "\n";
  }
  return out.str();
}

ManyBodyHamiltonian load_hamiltonian(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_hamiltonian(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_hamiltonian(const ManyBodyHamiltonian& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << format_hamiltonian(h);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ngs
