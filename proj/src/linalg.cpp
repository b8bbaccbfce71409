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

#include "ngs/linalg.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace ngs {

double wrap_phase(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

namespace {

void require_square_even(Index rows, Index cols) {
  if (rows != cols) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << rows << "x" << cols;
    throw DimensionError(msg.str());
  }
  if (rows % 2 != 0) {
    std::ostringstream msg;
    msg << "skew-symmetric matrix must have even dimension, got " << rows;
    throw DimensionError(msg.str());
  }
}

// Pfaffian of a skew matrix, destroying `a`.
Complex pfaffian_in_place(CMatrix& a) {
  const Index n = a.rows();
  Complex pf{1.0, 0.0};
  for (Index k = 0; k + 1 < n; k += 2) {
    Index pivot = k + 1;
    a.col(k).segment(k + 1, n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      pf = -pf;
    }
    if (a(k + 1, k) == Complex{0.0, 0.0}) return Complex{0.0, 0.0};
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Index rest = n - k - 2;
      const CVector tau = a.row(k).segment(k + 2, rest).transpose() / a(k, k + 1);
      const CVector col = a.col(k + 1).segment(k + 2, rest);
      a.block(k + 2, k + 2, rest, rest) +=
          tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace

SkewMatrix::SkewMatrix(CMatrix entries) : entries_(std::move(entries)) {
  require_square_even(entries_.rows(), entries_.cols());
  if (entries_.size() == 0) return;
  const double dev = (entries_ + entries_.transpose()).cwiseAbs().maxCoeff();
  if (dev > kStructureTolerance) {
    std::ostringstream msg;
    msg << "matrix is not skew-symmetric (max |S + S^T| = " << dev << ")";
    throw ValidationError(msg.str());
  }
  entries_ = 0.5 * (entries_ - entries_.transpose()).eval();
}

SkewMatrix SkewMatrix::from_real(const RMatrix& entries) {
  return SkewMatrix(entries.cast<Complex>());
}

Complex pfaffian(const SkewMatrix& s) {
  CMatrix work = s.entries();
  return pfaffian_in_place(work);
}

Complex pfaffian(const CMatrix& s) { return pfaffian(SkewMatrix(s)); }

RMatrix skew_exp(const CMatrix& xi) {
  if (xi.rows() != xi.cols()) throw DimensionError("xi must be square");
  if (xi.size() == 0) return RMatrix(0, 0);
  const double herm = (xi - xi.adjoint()).cwiseAbs().maxCoeff();
  const double anti = (xi + xi.transpose()).cwiseAbs().maxCoeff();
  if (herm > kStructureTolerance || anti > kStructureTolerance) {
    std::ostringstream msg;
    msg << "xi must be Hermitian and antisymmetric (|xi - xi^+| = " << herm
        << ", |xi + xi^T| = " << anti << ")";
    throw ValidationError(msg.str());
  }
  // i*xi is real antisymmetric
  RMatrix generator = (kI * xi).real();
  generator = 0.5 * (generator - generator.transpose()).eval();
  return generator.exp();
}

ContractionVectors contraction_vectors(Index n_modes, BlockContractionKind kind,
                                       Index p, Index q) {
  if (p < 0 || q < 0 || p >= n_modes || q >= n_modes) {
    std::ostringstream msg;
    msg << "mode index out of range: p=" << p << ", q=" << q
        << ", n_modes=" << n_modes;
    throw DimensionError(msg.str());
  }
  ContractionVectors v{CVector::Zero(2 * n_modes), CVector::Zero(2 * n_modes)};
  Complex left_weight = kI;
  Complex right_weight = -kI;
  switch (kind) {
    case BlockContractionKind::PlusMinus:
      left_weight = kI;
      right_weight = -kI;
      break;
    case BlockContractionKind::MinusPlus:
      left_weight = -kI;
      right_weight = kI;
      break;
    case BlockContractionKind::PlusPlus:
      left_weight = -kI;
      right_weight = -kI;
      break;
    case BlockContractionKind::MinusMinus:
      left_weight = kI;
      right_weight = kI;
      break;
  }
  v.left(q) = 1.0;
  v.left(n_modes + q) = left_weight;
  v.right(p) = 1.0;
  v.right(n_modes + p) = right_weight;
  return v;
}

Complex block_contract(const CMatrix& m, BlockContractionKind kind, Index p,
                       Index q) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw DimensionError("block_contract expects a square 2N x 2N matrix");
  }
  const Index n = m.rows() / 2;
  const ContractionVectors v = contraction_vectors(n, kind, p, q);
  // Only four entries contribute.
  const Complex a = m(q, p);
  const Complex b = m(q, n + p);
  const Complex c = m(n + q, p);
  const Complex d = m(n + q, n + p);
  const Complex lw = v.left(n + q);
  const Complex rw = v.right(n + p);
  return a + b * rw + lw * c + lw * d * rw;
}

CMatrix miller_inverse_strict(const CMatrix& base_inverse,
                              std::span<const RankOneUpdate> updates) {
  CMatrix inv = base_inverse;
  std::size_t step = 0;
  for (const RankOneUpdate& u : updates) {
    ++step;
    if (u.beta == Complex{0.0, 0.0}) continue;
    // tr(C^{-1} beta |row><col|) = beta * C^{-1}[col, row]
    const Complex denom = 1.0 + u.beta * inv(u.col, u.row);
    if (std::abs(denom) < kMillerDenominatorFloor) {
      std::ostringstream msg;
      msg << "rank-1 update " << step << " is singular (|1 + tr(C^-1 B)| = "
          << std::abs(denom) << ")";
      throw SingularUpdateError(step, msg.str());
    }
    const Complex g = u.beta / denom;
    const CVector col = inv.col(u.row);
    const Eigen::RowVectorXcd row = inv.row(u.col);
    inv.noalias() -= g * col * row;
  }
  return inv;
}

MillerResult miller_inverse(const CMatrix& base_inverse,
                            std::span<const RankOneUpdate> updates) {
  try {
    return {miller_inverse_strict(base_inverse, updates), false, 0};
  } catch (const SingularUpdateError& e) {
    CMatrix full = base_inverse.inverse();
    for (const RankOneUpdate& u : updates) full(u.row, u.col) += u.beta;
    return {full.inverse(), true, e.step()};
  }
}

namespace {

template <typename Matrix>
Matrix pseudo_inverse_impl(const Matrix& m, double rcond) {
  if (m.size() == 0) return Matrix(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cutoff = rcond * (s.size() > 0 ? s(0) : 0.0);
  RVector s_inv = RVector::Zero(s.size());
  for (Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff && s(k) > 0.0) s_inv(k) = 1.0 / s(k);
  }
  const Index r = s.size();
  return svd.matrixV().leftCols(r) * s_inv.asDiagonal() *
         svd.matrixU().leftCols(r).adjoint();
}

}  // namespace

RMatrix pseudo_inverse(const RMatrix& m, double rcond) {
  return pseudo_inverse_impl(m, rcond);
}

CMatrix pseudo_inverse(const CMatrix& m, double rcond) {
  return pseudo_inverse_impl(m, rcond);
}

double skew_deviation(const RMatrix& m) {
  return (m + m.transpose()).norm();
}

double skew_deviation(const CMatrix& m) {
  return (m + m.transpose()).norm();
}

}  // namespace ngs
