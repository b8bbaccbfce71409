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

#include "ngs/wick.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace ngs {

namespace {

constexpr double kMillerPhaseFloor = 1e-12;
constexpr double kMaxCondition = 1e12;
constexpr double kOverlapFloor = 1e-13;
constexpr double kPureForMiller = 1e-10;

void build_pairings(std::vector<int>& remaining,
                    std::vector<std::pair<int, int>>& current, int sign,
                    std::vector<Pairing>& out) {
  if (remaining.empty()) {
    out.push_back({current, sign});
    return;
  }
  const int first = remaining.front();
  for (std::size_t j = 1; j < remaining.size(); ++j) {
    const int partner = remaining[j];
    std::vector<int> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      if (k != j) rest.push_back(remaining[k]);
    }
    current.emplace_back(first, partner);
    // Moving the partner next to the first element passes j-1 operators.
    build_pairings(rest, current, (j % 2 == 1) ? sign : -sign, out);
    current.pop_back();
  }
}

std::vector<Pairing> make_pairings(std::size_t length) {
  std::vector<int> items(length);
  for (std::size_t k = 0; k < length; ++k) items[k] = static_cast<int>(k);
  std::vector<std::pair<int, int>> current;
  std::vector<Pairing> out;
  build_pairings(items, current, 1, out);
  return out;
}

CMatrix sigma_kron_diag(const CVector& d) {
  const Index n = d.size();
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    m(j, n + j) = d(j);
    m(n + j, j) = -d(j);
  }
  return m;
}

double lu_condition(const Eigen::PartialPivLU<CMatrix>& lu) {
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

}  // namespace

PhaseVector::PhaseVector(RVector alpha) : alpha_(std::move(alpha)) {
  for (Index j = 0; j < alpha_.size(); ++j) {
    if (!std::isfinite(alpha_(j))) throw ValidationError("phase is not finite");
    alpha_(j) = wrap_phase(alpha_(j));
  }
}

PhaseVector PhaseVector::zero(Index n_modes) {
  return PhaseVector(RVector::Zero(n_modes));
}

bool PhaseVector::is_zero() const {
  return alpha_.size() == 0 || alpha_.cwiseAbs().maxCoeff() == 0.0;
}

OperatorString::OperatorString(std::vector<Ladder> factors)
    : factors_(std::move(factors)) {
  if (factors_.size() % 2 != 0) {
    std::ostringstream msg;
    msg << "operator string has odd length " << factors_.size();
    throw ParityError(msg.str());
  }
}

OperatorString OperatorString::adjoint() const {
  std::vector<Ladder> out(factors_.rbegin(), factors_.rend());
  for (Ladder& f : out) f.dagger = !f.dagger;
  return OperatorString(std::move(out));
}

const std::vector<Pairing>& enumerate_pairings(std::size_t length) {
  if (length % 2 != 0) {
    std::ostringstream msg;
    msg << "cannot pair a string of odd length " << length;
    throw ParityError(msg.str());
  }
  if (length > kMaxStringLength) {
    std::ostringstream msg;
    msg << "string length " << length << " exceeds " << kMaxStringLength;
    throw DimensionError(msg.str());
  }
  static const std::array<std::vector<Pairing>, kMaxStringLength / 2 + 1>
      cache = [] {
        std::array<std::vector<Pairing>, kMaxStringLength / 2 + 1> c;
        for (std::size_t k = 0; k <= kMaxStringLength / 2; ++k) {
          c[k] = make_pairings(2 * k);
        }
        return c;
      }();
  return cache[length / 2];
}

int overlap_sign(Index n_modes) {
  const Index e = (n_modes % 2 == 0) ? n_modes / 2 : (n_modes + 1) / 2;
  return (e % 2 == 0) ? 1 : -1;
}

WickContext::WickContext(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                         InversePath path)
    : n_(gamma.n_modes()), gamma_(gamma.gamma()), alpha_(alpha), path_(path) {
  if (alpha_.size() != n_) {
    std::ostringstream msg;
    msg << "phase vector has " << alpha_.size() << " entries for " << n_
        << " modes";
    throw DimensionError(msg.str());
  }
  phase_.resize(n_);
  k_.resize(2 * n_);
  dsqrt_.resize(2 * n_);
  for (Index j = 0; j < n_; ++j) {
    phase_(j) = std::polar(1.0, alpha_(j));
    const Complex k = 1.0 - phase_(j);
    k_(j) = k_(n_ + j) = k;
    dsqrt_(j) = dsqrt_(n_ + j) = std::sqrt(k);
  }
  gamma_f_ = dsqrt_.asDiagonal() * gamma_.cast<Complex>() * dsqrt_.asDiagonal();
  gamma_f_ -= sigma_kron_diag(CVector::Ones(n_) + phase_);
  gamma_f_ = 0.5 * (gamma_f_ - gamma_f_.transpose()).eval();
  CMatrix work = gamma_f_;
  a_ = static_cast<double>(overlap_sign(n_)) * std::pow(0.5, static_cast<double>(n_)) *
       pfaffian(SkewMatrix(std::move(work)));
}

std::string WickContext::describe_alpha() const {
  std::ostringstream msg;
  msg.precision(17);
  msg << "alpha = (";
  for (Index j = 0; j < n_; ++j) msg << (j ? ", " : "") << alpha_(j);
  msg << ")";
  return msg.str();
}

void WickContext::compute_g() const {
  const Index d = 2 * n_;
  const RMatrix upsilon = symplectic_form(n_);
  const CMatrix m = (gamma_ + upsilon).cast<Complex>();

  bool miller_allowed = true;
  for (Index j = 0; j < n_; ++j) {
    if (std::abs(k_(j)) <= kMillerPhaseFloor) miller_allowed = false;
  }
  const bool use_miller = path_ == InversePath::Miller ||
                          (path_ == InversePath::Auto && miller_allowed);
  if (use_miller) {
    // G = -Upsilon (C_1 + sum_m B_m)^{-1}, C_1^{-1} = Upsilon (Gamma + Upsilon),
    // B_m = (1/2)(1 - e^{i alpha}) |m><m|.
    std::vector<RankOneUpdate> updates;
    updates.reserve(d);
    for (Index m_idx = 0; m_idx < d; ++m_idx) {
      updates.push_back({0.5 * k_(m_idx), m_idx, m_idx});
    }
    try {
      const CMatrix inv = miller_inverse_strict(upsilon.cast<Complex>() * m, updates);
      if (inv.allFinite()) {
        CMatrix g = -upsilon.cast<Complex>() * inv;
        g_ = 0.5 * (g - g.transpose());
        g_miller_ = true;
        return;
      }
    } catch (const SingularUpdateError&) {
      if (path_ == InversePath::Miller) throw;
    }
  }
  CMatrix denom = CMatrix::Identity(d, d);
  denom += 0.5 * k_.asDiagonal() *
           (upsilon * gamma_ - RMatrix::Identity(d, d)).cast<Complex>();
  // G = M D^{-1}  <=>  D^T G^T = M^T
  Eigen::PartialPivLU<CMatrix> lu(denom.transpose());
  const double cond = lu_condition(lu);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "contraction denominator is singular (condition " << cond << ") at "
        << describe_alpha();
    throw SingularContractionError(msg.str());
  }
  CMatrix g = lu.solve(m.transpose()).transpose();
  g_ = 0.5 * (g - g.transpose());
  g_miller_ = false;
}

const CMatrix& WickContext::g() const {
  if (!g_) compute_g();
  return *g_;
}

const CMatrix& WickContext::l() const {
  if (!l_) {
    const Index d = 2 * n_;
    const RMatrix upsilon = symplectic_form(n_);
    l_ = CMatrix::Identity(d, d) -
         0.5 * g() * k_.asDiagonal() * upsilon.cast<Complex>();
  }
  return *l_;
}

void WickContext::compute_q() const {
  const Index d = 2 * n_;
  bool miller_allowed = true;
  for (Index j = 0; j < n_; ++j) {
    if (std::abs(k_(j)) <= kMillerPhaseFloor) miller_allowed = false;
  }
  const RMatrix id = RMatrix::Identity(d, d);
  const bool pure = (gamma_ * gamma_ + id).norm() < kPureForMiller;
  const bool use_miller = path_ == InversePath::Miller ||
                          (path_ == InversePath::Auto && miller_allowed && pure);
  if (use_miller) {
    // Q = -(1/2)(Gamma - sigma (x) diag(b))^{-1}, b = (1 + e)/(1 - e),
    // starting from Gamma^{-1} = -Gamma.
    std::vector<RankOneUpdate> updates;
    updates.reserve(d);
    for (Index j = 0; j < n_; ++j) {
      const Complex b = (1.0 + phase_(j)) / k_(j);
      updates.push_back({-b, j, n_ + j});
      updates.push_back({b, n_ + j, j});
    }
    try {
      const CMatrix inv =
          miller_inverse_strict((-gamma_).cast<Complex>(), updates);
      if (inv.allFinite()) {
        CMatrix q = -0.5 * inv;
        q_ = 0.5 * (q - q.transpose());
        q_miller_ = true;
        return;
      }
    } catch (const SingularUpdateError&) {
      if (path_ == InversePath::Miller) throw;
    }
  }
  Eigen::PartialPivLU<CMatrix> lu(gamma_f_);
  const double cond = lu_condition(lu);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "Gamma_F is singular (condition " << cond << ") at "
        << describe_alpha();
    throw SingularContractionError(msg.str());
  }
  const CMatrix inv = lu.inverse();
  CMatrix q = -0.5 * dsqrt_.asDiagonal() * inv * dsqrt_.asDiagonal();
  q_ = 0.5 * (q - q.transpose());
  q_miller_ = false;
}

const CMatrix& WickContext::q() const {
  if (!q_) compute_q();
  return *q_;
}

bool WickContext::g_used_miller() const {
  g();
  return g_miller_;
}

bool WickContext::q_used_miller() const {
  q();
  return q_miller_;
}

WickContext::ContractionForm WickContext::contraction_form(Ladder a,
                                                           Ladder b) const {
  const Complex quarter_i = 0.25 * kI;
  if (a.dagger && !b.dagger) {
    return {0.0, quarter_i * phase_(a.mode), BlockContractionKind::PlusMinus,
            a.mode, b.mode};
  }
  if (a.dagger && b.dagger) {
    return {0.0, quarter_i * phase_(a.mode) * phase_(b.mode),
            BlockContractionKind::PlusPlus, a.mode, b.mode};
  }
  if (!a.dagger && !b.dagger) {
    return {0.0, quarter_i, BlockContractionKind::MinusMinus, a.mode, b.mode};
  }
  // c_a c_b^+ = delta_ab - c_b^+ c_a
  return {a.mode == b.mode ? Complex{1.0, 0.0} : Complex{0.0, 0.0},
          -quarter_i * phase_(b.mode), BlockContractionKind::PlusMinus, b.mode,
          a.mode};
}

Complex WickContext::contraction(Ladder a, Ladder b) const {
  const ContractionForm f = contraction_form(a, b);
  return f.offset + f.scale * block_contract(g(), f.kind, f.p, f.q);
}

Complex WickContext::pair_expectation(PairKind kind, Index p, Index q) const {
  if (p < 0 || q < 0 || p >= n_ || q >= n_) {
    throw DimensionError("mode index out of range in pair_expectation");
  }
  Ladder a{p, true};
  Ladder b{q, false};
  switch (kind) {
    case PairKind::DagPlain:
      break;
    case PairKind::DagDag:
      b.dagger = true;
      break;
    case PairKind::PlainPlain:
      a.dagger = false;
      break;
  }
  return a_ * contraction(a, b);
}

void WickContext::check_modes(const OperatorString& s) const {
  for (const Ladder& f : s.factors()) {
    if (f.mode < 0 || f.mode >= n_) {
      std::ostringstream msg;
      msg << "mode " << f.mode << " out of range for " << n_ << " modes";
      throw DimensionError(msg.str());
    }
  }
}

Complex WickContext::expectation(const OperatorString& s) const {
  check_modes(s);
  if (s.empty()) return a_;
  const std::size_t len = s.size();
  if (len > 2 && std::abs(a_) < kOverlapFloor) {
    std::ostringstream msg;
    msg << "overlap coefficient vanishes (|A| = " << std::abs(a_) << ") at "
        << describe_alpha();
    throw SingularContractionError(msg.str());
  }
  const auto& factors = s.factors();
  CMatrix c = CMatrix::Zero(len, len);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      c(i, j) = contraction(factors[i], factors[j]);
    }
  }
  Complex sum{0.0, 0.0};
  for (const Pairing& pairing : enumerate_pairings(len)) {
    Complex prod{static_cast<double>(pairing.sign), 0.0};
    for (const auto& [i, j] : pairing.pairs) prod *= c(i, j);
    sum += prod;
  }
  return a_ * sum;
}

WickContext::ValueAndDerivative WickContext::expectation_with_derivative(
    const OperatorString& s) const {
  check_modes(s);
  if (s.empty()) return {a_, a_ * q()};
  const std::size_t len = s.size();
  if (std::abs(a_) < kOverlapFloor) {
    std::ostringstream msg;
    msg << "overlap coefficient vanishes (|A| = " << std::abs(a_) << ") at "
        << describe_alpha();
    throw SingularContractionError(msg.str());
  }
  const auto& factors = s.factors();
  CMatrix c = CMatrix::Zero(len, len);
  std::vector<ContractionForm> forms(len * len);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      forms[i * len + j] = contraction_form(factors[i], factors[j]);
      const ContractionForm& f = forms[i * len + j];
      c(i, j) = f.offset + f.scale * block_contract(g(), f.kind, f.p, f.q);
    }
  }
  // W = sum_pi sgn prod c; dW/dc_ij accumulated per pair.
  Complex w{0.0, 0.0};
  CMatrix dw = CMatrix::Zero(len, len);
  for (const Pairing& pairing : enumerate_pairings(len)) {
    const std::size_t np = pairing.pairs.size();
    Complex prod{static_cast<double>(pairing.sign), 0.0};
    for (const auto& [i, j] : pairing.pairs) prod *= c(i, j);
    w += prod;
    for (std::size_t k = 0; k < np; ++k) {
      Complex others{static_cast<double>(pairing.sign), 0.0};
      for (std::size_t m = 0; m < np; ++m) {
        if (m != k) others *= c(pairing.pairs[m].first, pairing.pairs[m].second);
      }
      dw(pairing.pairs[k].first, pairing.pairs[k].second) += others;
    }
  }
  const Index d = 2 * n_;
  CMatrix dcontr = CMatrix::Zero(d, d);
  const CMatrix lt = l().transpose();
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      const Complex weight = dw(i, j);
      if (weight == Complex{0.0, 0.0}) continue;
      const ContractionForm& f = forms[i * len + j];
      const ContractionVectors uv = contraction_vectors(n_, f.kind, f.p, f.q);
      const CVector a = lt * uv.left;
      const CVector b = lt * uv.right;
      dcontr += (weight * f.scale * 0.5) *
                (a * b.transpose() - b * a.transpose());
    }
  }
  return {a_ * w, a_ * (w * q() + dcontr)};
}

SkewMatrix gamma_F(const CovarianceMatrix& gamma, const PhaseVector& alpha) {
  return SkewMatrix(WickContext(gamma, alpha).gamma_f());
}

Complex a_coeff(const CovarianceMatrix& gamma, const PhaseVector& alpha) {
  return WickContext(gamma, alpha).a_coeff();
}

SkewMatrix g_matrix(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                    InversePath path) {
  return SkewMatrix(WickContext(gamma, alpha, path).g());
}

CMatrix q_matrix(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                 InversePath path) {
  return WickContext(gamma, alpha, path).q();
}

Complex pair_expectation(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                         PairKind kind, Index p, Index q) {
  return WickContext(gamma, alpha).pair_expectation(kind, p, q);
}

Complex expectation(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                    const OperatorString& s) {
  return WickContext(gamma, alpha).expectation(s);
}

Complex plain_wick_expectation(const CovarianceMatrix& gamma,
                               const OperatorString& s) {
  const Index n = gamma.n_modes();
  const Index d = 2 * n;
  // <A_k A_l> = delta_kl - i Gamma_kl
  const CMatrix majorana =
      CMatrix::Identity(d, d) - kI * gamma.gamma().cast<Complex>();
  // c = (A_j + i A_{N+j})/2, c^+ = (A_j - i A_{N+j})/2
  auto coefficients = [&](const Ladder& f) {
    if (f.mode < 0 || f.mode >= n) throw DimensionError("mode out of range");
    CVector v = CVector::Zero(d);
    v(f.mode) = 0.5;
    v(n + f.mode) = f.dagger ? -0.5 * kI : 0.5 * kI;
    return v;
  };
  const std::size_t len = s.size();
  if (len == 0) return 1.0;
  std::vector<CVector> coeffs;
  coeffs.reserve(len);
  for (const Ladder& f : s.factors()) coeffs.push_back(coefficients(f));
  CMatrix c = CMatrix::Zero(len, len);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      c(i, j) = coeffs[i].transpose() * majorana * coeffs[j];
    }
  }
  Complex sum{0.0, 0.0};
  for (const Pairing& pairing : enumerate_pairings(len)) {
    Complex prod{static_cast<double>(pairing.sign), 0.0};
    for (const auto& [i, j] : pairing.pairs) prod *= c(i, j);
    sum += prod;
  }
  return sum;
}

}  // namespace ngs
