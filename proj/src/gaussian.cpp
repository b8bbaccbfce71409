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

#include "ngs/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "ngs/linalg.hpp"

namespace ngs {

RMatrix symplectic_form(Index n_modes) {
  RMatrix upsilon = RMatrix::Zero(2 * n_modes, 2 * n_modes);
  for (Index j = 0; j < n_modes; ++j) {
    upsilon(j, n_modes + j) = 1.0;
    upsilon(n_modes + j, j) = -1.0;
  }
  return upsilon;
}

GaussianParams::GaussianParams(Index n_modes, CMatrix xi)
    : n_modes_(n_modes), xi_(std::move(xi)) {
  if (n_modes < 1) throw DimensionError("n_modes must be positive");
  if (xi_.rows() != 2 * n_modes || xi_.cols() != 2 * n_modes) {
    std::ostringstream msg;
    msg << "xi must be " << 2 * n_modes << "x" << 2 * n_modes << ", got "
        << xi_.rows() << "x" << xi_.cols();
    throw DimensionError(msg.str());
  }
  const double herm = (xi_ - xi_.adjoint()).cwiseAbs().maxCoeff();
  const double anti = (xi_ + xi_.transpose()).cwiseAbs().maxCoeff();
  if (herm > kStructureTolerance || anti > kStructureTolerance) {
    throw ValidationError("xi must be Hermitian and antisymmetric");
  }
}

GaussianParams GaussianParams::zero(Index n_modes) {
  return GaussianParams(n_modes, CMatrix::Zero(2 * n_modes, 2 * n_modes));
}

CovarianceMatrix::CovarianceMatrix(RMatrix gamma) : gamma_(std::move(gamma)) {
  if (gamma_.rows() != gamma_.cols() || gamma_.rows() % 2 != 0 ||
      gamma_.rows() == 0) {
    std::ostringstream msg;
    msg << "covariance matrix must be 2N x 2N, got " << gamma_.rows() << "x"
        << gamma_.cols();
    throw DimensionError(msg.str());
  }
  if (!gamma_.allFinite()) throw ValidationError("covariance matrix is not finite");
  const double dev = (gamma_ + gamma_.transpose()).cwiseAbs().maxCoeff();
  if (dev > kStructureTolerance) {
    std::ostringstream msg;
    msg << "covariance matrix is not antisymmetric (max |G + G^T| = " << dev
        << ")";
    throw ValidationError(msg.str());
  }
  gamma_ = 0.5 * (gamma_ - gamma_.transpose()).eval();
}

CovarianceMatrix CovarianceMatrix::vacuum(Index n_modes) {
  return CovarianceMatrix(-symplectic_form(n_modes));
}

CovarianceMatrix CovarianceMatrix::fully_occupied(Index n_modes) {
  return CovarianceMatrix(symplectic_form(n_modes));
}

double CovarianceMatrix::purity_error() const {
  const Index d = gamma_.rows();
  return (gamma_ * gamma_ + RMatrix::Identity(d, d)).norm();
}

CovarianceMatrix covariance_from_xi(const GaussianParams& params) {
  const RMatrix u = skew_exp(params.xi());
  const RMatrix upsilon = symplectic_form(params.n_modes());
  return CovarianceMatrix(-u * upsilon * u.transpose());
}

CovarianceMatrix rotate_covariance(const CovarianceMatrix& gamma, const GaussianParams& xi) {
  if (xi.n_modes() != gamma.n_modes()) throw DimensionError("rotation has the wrong mode count");
  const RMatrix u = skew_exp(xi.xi());
  RMatrix g = u * gamma.gamma() * u.transpose();
  return CovarianceMatrix(0.5 * (g - g.transpose()));
}

CovarianceMatrix purify(const RMatrix& gamma_raw) {
  if (gamma_raw.rows() != gamma_raw.cols() || gamma_raw.rows() % 2 != 0) {
    throw DimensionError("purify expects a 2N x 2N matrix");
  }
  const CMatrix herm = kI * gamma_raw.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const RVector& lambda = eig.eigenvalues();
  RVector signs(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k) {
    if (std::abs(lambda(k)) < 1e-8) {
      std::ostringstream msg;
      msg << "covariance matrix is degenerate: eigenvalue " << lambda(k)
          << " of i*Gamma too close to zero";
      throw DegeneracyError(msg.str());
    }
    signs(k) = lambda(k) > 0.0 ? 1.0 : -1.0;
  }
  const CMatrix& v = eig.eigenvectors();
  // Gamma = -i V sign(Lambda) V^+
  const CMatrix projected = -kI * (v * signs.asDiagonal() * v.adjoint());
  RMatrix gamma = projected.real();
  gamma = 0.5 * (gamma - gamma.transpose()).eval();
  return CovarianceMatrix(std::move(gamma));
}

RVector occupation_numbers(const CovarianceMatrix& gamma) {
  const Index n = gamma.n_modes();
  RVector occ(n);
  for (Index j = 0; j < n; ++j) occ(j) = 0.5 * (1.0 + gamma.gamma()(j, n + j));
  return occ;
}

CovarianceMatrix covariance_from_density(const CMatrix& rho) {
  const Index n = rho.rows();
  if (rho.cols() != n) throw DimensionError("density matrix must be square");
  RMatrix gamma(2 * n, 2 * n);
  const RMatrix im = rho.imag();
  const RMatrix re = rho.real();
  const RMatrix off = 2.0 * re - RMatrix::Identity(n, n);
  gamma.topLeftCorner(n, n) = -2.0 * im;
  gamma.bottomRightCorner(n, n) = -2.0 * im;
  gamma.topRightCorner(n, n) = off;
  gamma.bottomLeftCorner(n, n) = -off.transpose();
  return CovarianceMatrix(std::move(gamma));
}

CovarianceMatrix mean_field_covariance(const CMatrix& f, Index n_particles) {
  const Index n = f.rows();
  if (n_particles < 0 || n_particles > n) {
    std::ostringstream msg;
    msg << "filling " << n_particles << " out of range for " << n << " modes";
    throw ValidationError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(f);
  const CMatrix& v = eig.eigenvectors();  // ascending eigenvalues
  CMatrix rho = CMatrix::Zero(n, n);
  for (Index k = 0; k < n_particles; ++k) {
    rho += v.col(k).conjugate() * v.col(k).transpose();
  }
  return covariance_from_density(rho);
}

GaussianParams random_gaussian_params(Index n_modes, std::mt19937_64& rng,
                                      double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  const Index d = 2 * n_modes;
  RMatrix x = RMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      x(i, j) = normal(rng);
      x(j, i) = -x(i, j);
    }
  }
  // i*xi = x  =>  xi = -i x
  return GaussianParams(n_modes, -kI * x.cast<Complex>());
}

}  // namespace ngs
