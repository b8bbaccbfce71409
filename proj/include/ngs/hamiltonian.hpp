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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ngs/gaussian.hpp"
#include "ngs/types.hpp"
#include "ngs/wick.hpp"

namespace ngs {

/// H = sum_pq f_pq c_p^+ c_q + (1/2) sum_pqrs h_pqrs c_p^+ c_q^+ c_r c_s
///
/// f must be Hermitian and h real with h_pqrs = -h_qprs = -h_pqsr = h_qpsr
/// and h_pqrs = h_srqp; both are validated (tolerance 1e-10), not repaired.
class ManyBodyHamiltonian {
 public:
  struct OneBodyTerm {
    Index p, q;
    Complex value;
  };
  struct TwoBodyTerm {
    Index p, q, r, s;
    double value;
  };

  ManyBodyHamiltonian(Index n_modes, CMatrix f, std::vector<double> h);
  static ManyBodyHamiltonian zero(Index n_modes);

  Index n_modes() const { return n_; }
  const CMatrix& f() const { return f_; }
  const std::vector<double>& h_data() const { return h_; }
  double h(Index p, Index q, Index r, Index s) const {
    return h_[static_cast<std::size_t>(((p * n_ + q) * n_ + r) * n_ + s)];
  }

  /// Nonzero entries in row-major index order.
  const std::vector<OneBodyTerm>& one_body_terms() const { return one_body_; }
  const std::vector<TwoBodyTerm>& two_body_terms() const { return two_body_; }

 private:
  Index n_;
  CMatrix f_;
  std::vector<double> h_;
  std::vector<OneBodyTerm> one_body_;
  std::vector<TwoBodyTerm> two_body_;
};

/// Flux-attachment parameters: real symmetric omega with zero diagonal.
class NonGaussianParams {
 public:
  explicit NonGaussianParams(RMatrix omega);
  static NonGaussianParams zero(Index n_modes);

  Index n_modes() const { return omega_.rows(); }
  const RMatrix& omega() const { return omega_; }

 private:
  RMatrix omega_;
};

/// Coefficients of U_FA^+ H U_FA written as phase-dressed strings:
///   f^FA_pq e^{i sum_k alpha_pq(k) n_k} c_p^+ c_q
///   (1/2) h^FA_pqrs e^{i sum_k beta_pqrs(k) n_k} c_p^+ c_q^+ c_r c_s
/// with alpha_pq(k) = omega_kq - omega_kp and
/// beta_pqrs(k) = alpha_ps(k) + alpha_qr(k).
class RotatedCoefficients {
 public:
  RotatedCoefficients(const ManyBodyHamiltonian& h, const NonGaussianParams& omega);

  PhaseVector alpha(Index p, Index q) const;
  PhaseVector beta(Index p, Index q, Index r, Index s) const;

  /// f_pq e^{-i omega_pq}
  Complex f_fa(Index p, Index q) const;

  /// h_pqrs e^{i(omega_pq + omega_rs - omega_pr - omega_ps - omega_qr - omega_qs)}
  Complex h_fa(Index p, Index q, Index r, Index s) const;

  /// Terms with nonzero coefficient, in the order of the source Hamiltonian.
  std::size_t one_body_count() const { return h_.one_body_terms().size(); }
  std::size_t two_body_count() const { return h_.two_body_terms().size(); }

 private:
  const ManyBodyHamiltonian& h_;
  RMatrix omega_;
};

struct EvalOptions {
  int threads = 1;
  InversePath path = InversePath::Auto;
};

struct EnergyTerms {
  double e1 = 0.0;
  double e2 = 0.0;
  double total = 0.0;
  double imag_residue = 0.0;  // |Im E| before it is discarded
};

/// E = <Psi_NGS|H|Psi_NGS> with Psi_NGS = U_FA U_GS |0>.
EnergyTerms energy(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                   const ManyBodyHamiltonian& h, const EvalOptions& options = {});

/// Partial derivatives dE/domega_ij treating omega_ij and omega_ji as
/// independent entries; symmetric with zero diagonal. A symmetric
/// perturbation of both entries by eps changes E by 2 eps grad_ij.
RMatrix energy_gradient_omega(const CovarianceMatrix& gamma,
                              const NonGaussianParams& omega,
                              const ManyBodyHamiltonian& h,
                              const EvalOptions& options = {});

/// The three grouped contributions to energy_gradient_omega before their
/// imaginary parts are taken, per ordered pair (i, j). Each group is the
/// half difference of its expectation sum and that sum's Hermitian
/// conjugate, so all entries are purely imaginary.
struct GradientBrackets {
  CMatrix one_body;
  CMatrix two_body_pair;
  CMatrix two_body_triple;
};

GradientBrackets energy_gradient_brackets(const CovarianceMatrix& gamma,
                                          const NonGaussianParams& omega,
                                          const ManyBodyHamiltonian& h,
                                          const EvalOptions& options = {});

/// H_FA_m = 4 dE/dGamma (structured derivative): real skew-symmetric.
RMatrix mean_field_h(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                     const ManyBodyHamiltonian& h, const EvalOptions& options = {});

/// O_m for the operator (i/2) sum_{i != j} domega_ij :n_i n_j:, built from
/// G = Gamma + Upsilon and g_j = Gamma[j, N+j] + 1. i*O_m is real skew.
CMatrix mean_field_o(const CovarianceMatrix& gamma, const RMatrix& dtau_omega);

/// Fermi-Hubbard chain with L sites, modes 0..L-1 spin up and L..2L-1 spin
/// down. Hopping -t between neighbours, -mu on site, U n_up n_down. With
/// periodic boundaries the closing bond is added only for L > 2.
ManyBodyHamiltonian hubbard_model(Index sites, double t, double u, double mu,
                                  bool periodic);

/// Random instance: Hermitian f with Gaussian real and imaginary parts, and
/// real h with Gaussian entries spread over each symmetry orbit.
ManyBodyHamiltonian random_hamiltonian(Index n_modes, std::mt19937_64& rng);

/// Text format: `NMODES n`, then `F p q re im` and `H p q r s value` lines
/// with 1-based indices; `#` starts a comment.
ManyBodyHamiltonian parse_hamiltonian(const std::string& text);
std::string format_hamiltonian(const ManyBodyHamiltonian& h);
ManyBodyHamiltonian load_hamiltonian(const std::filesystem::path& path);
void save_hamiltonian(const ManyBodyHamiltonian& h, const std::filesystem::path& path);

}  // namespace ngs
