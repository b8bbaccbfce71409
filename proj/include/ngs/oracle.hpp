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
#include <vector>

#include <Eigen/SparseCore>

#include "ngs/gaussian.hpp"
#include "ngs/hamiltonian.hpp"
#include "ngs/wick.hpp"

namespace ngs {

// Brute-force Fock-space reference. Basis state b has mode j occupied when
// bit j of b is set (mode 0 least significant); the Jordan-Wigner sign of a
// ladder operator on mode j is (-1)^(number of occupied modes below j).

/// Largest mode count for which ladder operators are materialized.
inline constexpr Index kMaxOracleOperatorModes = 12;
/// Largest mode count for dense matrix exponentials and diagonalization.
inline constexpr Index kMaxOracleDenseModes = 10;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class DenseOperatorSet {
 public:
  explicit DenseOperatorSet(Index n_modes);

  Index n_modes() const { return n_modes_; }
  Index dim() const { return Index{1} << n_modes_; }

  /// c_j; creation operators are the transposes (all entries real).
  const SparseMatrix& annihilator(Index j) const { return annihilators_.at(j); }
  SparseMatrix creator(Index j) const { return annihilators_.at(j).transpose(); }

 private:
  Index n_modes_;
  std::vector<SparseMatrix> annihilators_;
};

DenseOperatorSet fock_operators(Index n_modes);

struct DenseState {
  CVector amplitudes;
  Index n_modes() const;
};

/// Vacuum |0...0>.
DenseState dense_vacuum(Index n_modes);

/// Applies a single ladder operator to a Fock-space vector.
CVector apply_ladder(const CVector& psi, Ladder op, Index n_modes);

/// Applies the product s = f_1 f_2 ... f_k (rightmost acts first).
CVector apply_string(const CVector& psi, const OperatorString& s, Index n_modes);

/// Majorana A_k on a Fock-space vector, k in [0, 2N).
CVector apply_majorana(const CVector& psi, Index k, Index n_modes);

/// Dense generator (i/4) sum_jk xi_jk A_j A_k of U_GS.
CMatrix gaussian_generator(const GaussianParams& xi);

/// U_GS = exp((i/4) sum_jk xi_jk A_j A_k).
CMatrix gaussian_unitary(const GaussianParams& xi);

/// Diagonal of U_FA = exp(i sum_{j<k} omega_jk n_j n_k).
CVector flux_diagonal(const NonGaussianParams& omega);

/// U_FA U_GS |0>.
DenseState dense_state(const GaussianParams& xi, const NonGaussianParams& omega);

/// <psi| e^{i sum alpha n} s |psi>.
Complex dense_expectation(const DenseState& state, const PhaseVector& alpha,
                          const OperatorString& s);

/// H|psi> term by term.
CVector apply_hamiltonian(const ManyBodyHamiltonian& h, const CVector& psi);

/// <psi|H|psi>.
Complex dense_energy(const DenseState& state, const ManyBodyHamiltonian& h);

CMatrix dense_hamiltonian(const ManyBodyHamiltonian& h);

struct GroundState {
  double energy;
  DenseState state;
};

GroundState dense_ground(const ManyBodyHamiltonian& h);

/// |<a|b>|
double overlap(const DenseState& a, const DenseState& b);

}  // namespace ngs
