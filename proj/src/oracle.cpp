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

#include "ngs/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace ngs {

namespace {

void require_modes(Index n_modes, Index cap, const char* what) {
  if (n_modes < 1) throw DimensionError("n_modes must be positive");
  if (n_modes > cap) {
    std::ostringstream msg;
    msg << what << " limited to " << cap << " modes, got " << n_modes;
    throw ResourceError(msg.str());
  }
}

Index state_modes(Index dim) {
  Index n = 0;
  while ((Index{1} << n) < dim) ++n;
  if ((Index{1} << n) != dim) throw DimensionError("state dimension is not a power of two");
  return n;
}

double jw_sign(std::uint64_t basis, Index mode) {
  const std::uint64_t below = basis & ((std::uint64_t{1} << mode) - 1);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

DenseOperatorSet::DenseOperatorSet(Index n_modes) : n_modes_(n_modes) {
  require_modes(n_modes, kMaxOracleOperatorModes, "ladder operators");
  const Index d = dim();
  annihilators_.reserve(n_modes);
  for (Index j = 0; j < n_modes; ++j) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(d / 2);
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (Index b = 0; b < d; ++b) {
      const auto basis = static_cast<std::uint64_t>(b);
      if (basis & bit) {
        triplets.emplace_back(static_cast<Index>(basis ^ bit), b, jw_sign(basis, j));
      }
    }
    SparseMatrix c(d, d);
    c.setFromTriplets(triplets.begin(), triplets.end());
    annihilators_.push_back(std::move(c));
  }
}

DenseOperatorSet fock_operators(Index n_modes) { return DenseOperatorSet(n_modes); }

Index DenseState::n_modes() const { return state_modes(amplitudes.size()); }

DenseState dense_vacuum(Index n_modes) {
  require_modes(n_modes, kMaxOracleOperatorModes, "dense states");
  CVector psi = CVector::Zero(Index{1} << n_modes);
  psi(0) = 1.0;
  return {psi};
}

CVector apply_ladder(const CVector& psi, Ladder op, Index n_modes) {
  if (op.mode < 0 || op.mode >= n_modes) throw DimensionError("mode out of range");
  const std::uint64_t bit = std::uint64_t{1} << op.mode;
  CVector out = CVector::Zero(psi.size());
  for (Index b = 0; b < psi.size(); ++b) {
    if (psi(b) == Complex{0.0, 0.0}) continue;
    const auto basis = static_cast<std::uint64_t>(b);
    const bool occupied = (basis & bit) != 0;
    if (occupied == op.dagger) continue;
    out(static_cast<Index>(basis ^ bit)) += jw_sign(basis, op.mode) * psi(b);
  }
  return out;
}

CVector apply_string(const CVector& psi, const OperatorString& s, Index n_modes) {
  CVector out = psi;
  const auto& f = s.factors();
  for (auto it = f.rbegin(); it != f.rend(); ++it) out = apply_ladder(out, *it, n_modes);
  return out;
}

CVector apply_majorana(const CVector& psi, Index k, Index n_modes) {
  if (k < 0 || k >= 2 * n_modes) throw DimensionError("Majorana index out of range");
  const Index j = k % n_modes;
  const std::uint64_t bit = std::uint64_t{1} << j;
  CVector out = CVector::Zero(psi.size());
  for (Index b = 0; b < psi.size(); ++b) {
    if (psi(b) == Complex{0.0, 0.0}) continue;
    const auto basis = static_cast<std::uint64_t>(b);
    const bool occupied = (basis & bit) != 0;
    Complex w = jw_sign(basis, j);
    // A_j = c^+ + c; A_{N+j} = i c^+ - i c
    if (k >= n_modes) w *= occupied ? -kI : kI;
    out(static_cast<Index>(basis ^ bit)) += w * psi(b);
  }
  return out;
}

CMatrix gaussian_generator(const GaussianParams& xi) {
  const Index n = xi.n_modes();
  require_modes(n, kMaxOracleDenseModes, "dense exponentials");
  const Index dim = Index{1} << n;
  CMatrix gen = CMatrix::Zero(dim, dim);
  for (Index b = 0; b < dim; ++b) {
    CVector e = CVector::Zero(dim);
    e(b) = 1.0;
    for (Index k = 0; k < 2 * n; ++k) {
      const CVector ak = apply_majorana(e, k, n);
      for (Index j = 0; j < 2 * n; ++j) {
        const Complex x = xi.xi()(j, k);
        if (x == Complex{0.0, 0.0}) continue;
        gen.col(b) += (0.25 * kI * x) * apply_majorana(ak, j, n);
      }
    }
  }
  return gen;
}

CMatrix gaussian_unitary(const GaussianParams& xi) {
  const CMatrix gen = gaussian_generator(xi);
  return gen.exp();
}

CVector flux_diagonal(const NonGaussianParams& omega) {
  const Index n = omega.n_modes();
  require_modes(n, kMaxOracleDenseModes, "dense exponentials");
  const Index dim = Index{1} << n;
  CVector diag(dim);
  for (Index b = 0; b < dim; ++b) {
    double phase = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (!((b >> j) & 1)) continue;
      for (Index k = j + 1; k < n; ++k) {
        if ((b >> k) & 1) phase += omega.omega()(j, k);
      }
    }
    diag(b) = std::polar(1.0, phase);
  }
  return diag;
}

DenseState dense_state(const GaussianParams& xi, const NonGaussianParams& omega) {
  if (xi.n_modes() != omega.n_modes()) throw DimensionError("mode count mismatch");
  const CMatrix u = gaussian_unitary(xi);
  const CVector psi = flux_diagonal(omega).cwiseProduct(u.col(0));
  return {psi};
}

Complex dense_expectation(const DenseState& state, const PhaseVector& alpha,
                          const OperatorString& s) {
  const Index n = state.n_modes();
  if (alpha.size() != n) throw DimensionError("phase vector size mismatch");
  CVector phi = apply_string(state.amplitudes, s, n);
  for (Index b = 0; b < phi.size(); ++b) {
    double a = 0.0;
    for (Index j = 0; j < n; ++j) {
      if ((b >> j) & 1) a += alpha(j);
    }
    phi(b) *= std::polar(1.0, a);
  }
  return state.amplitudes.dot(phi);
}

CVector apply_hamiltonian(const ManyBodyHamiltonian& h, const CVector& psi) {
  const Index n = h.n_modes();
  CVector out = CVector::Zero(psi.size());
  for (const auto& t : h.one_body_terms()) {
    const CVector x = apply_ladder(apply_ladder(psi, annihilate(t.q), n), create(t.p), n);
    out += t.value * x;
  }
  for (const auto& t : h.two_body_terms()) {
    const OperatorString s({create(t.p), create(t.q), annihilate(t.r), annihilate(t.s)});
    out += (0.5 * t.value) * apply_string(psi, s, n);
  }
  return out;
}

Complex dense_energy(const DenseState& state, const ManyBodyHamiltonian& h) {
  return state.amplitudes.dot(apply_hamiltonian(h, state.amplitudes));
}

CMatrix dense_hamiltonian(const ManyBodyHamiltonian& h) {
  const Index n = h.n_modes();
  require_modes(n, kMaxOracleDenseModes, "dense Hamiltonians");
  const Index dim = Index{1} << n;
  CMatrix m(dim, dim);
  for (Index b = 0; b < dim; ++b) {
    CVector e = CVector::Zero(dim);
    e(b) = 1.0;
    m.col(b) = apply_hamiltonian(h, e);
  }
  return m;
}

GroundState dense_ground(const ManyBodyHamiltonian& h) {
  const CMatrix m = dense_hamiltonian(h);
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  return {eig.eigenvalues()(0), {eig.eigenvectors().col(0)}};
}

double overlap(const DenseState& a, const DenseState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) {
    throw DimensionError("overlap of states with different dimensions");
  }
  return std::abs(a.amplitudes.dot(b.amplitudes));
}

}  // namespace ngs
