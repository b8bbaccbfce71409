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

#include <random>

#include "ngs/types.hpp"

namespace ngs {

/// Upsilon = sigma (x) 1_N with sigma = [[0, 1], [-1, 0]].
///
/// Majorana ordering throughout: A_j = c_j^+ + c_j for j < N and
/// A_{N+j} = i (c_j^+ - c_j), modes 0-based.
RMatrix symplectic_form(Index n_modes);

/// Gaussian variational parameters: Hermitian, antisymmetric 2N x 2N xi.
class GaussianParams {
 public:
  GaussianParams(Index n_modes, CMatrix xi);
  static GaussianParams zero(Index n_modes);

  Index n_modes() const { return n_modes_; }
  const CMatrix& xi() const { return xi_; }

 private:
  Index n_modes_;
  CMatrix xi_;
};

/// Real antisymmetric covariance matrix Gamma_kl = (i/2) <[A_k, A_l]>.
///
/// Construction checks skewness only. Purity (Gamma^2 = -1) is reported by
/// purity_error() and enforced where a pure state is required (purify,
/// checkpoint loading); derivative checks need off-manifold points.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(RMatrix gamma);
  static CovarianceMatrix vacuum(Index n_modes);
  static CovarianceMatrix fully_occupied(Index n_modes);

  Index n_modes() const { return gamma_.rows() / 2; }
  const RMatrix& gamma() const { return gamma_; }

  /// ||Gamma^2 + 1||_F
  double purity_error() const;

 private:
  RMatrix gamma_;
};

/// Gamma = -U Upsilon U^T with U = exp(i xi).
CovarianceMatrix covariance_from_xi(const GaussianParams& params);

/// U Gamma U^T with U = exp(i xi); maps pure states to pure states.
CovarianceMatrix rotate_covariance(const CovarianceMatrix& gamma, const GaussianParams& xi);

/// Nearest pure covariance: spectral sign projection of the Hermitian matrix
/// i*Gamma_raw. Throws DegeneracyError when an eigenvalue lies within 1e-8 of
/// zero.
CovarianceMatrix purify(const RMatrix& gamma_raw);

/// <n_j> = (1 + Gamma[j, N+j]) / 2.
RVector occupation_numbers(const CovarianceMatrix& gamma);

/// Covariance of a number-conserving Gaussian state with one-body density
/// rho_ij = <c_i^+ c_j>.
CovarianceMatrix covariance_from_density(const CMatrix& rho);

/// Slater determinant filling the `n_particles` lowest eigenvectors of the
/// Hermitian one-body matrix f.
CovarianceMatrix mean_field_covariance(const CMatrix& f, Index n_particles);

/// Random Hermitian antisymmetric xi with entries of i*xi ~ N(0, scale^2).
GaussianParams random_gaussian_params(Index n_modes, std::mt19937_64& rng,
                                      double scale = 1.0);

}  // namespace ngs
