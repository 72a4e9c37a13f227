// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace pvm {

using cplx = std::complex<double>;

namespace fock {

/// Pure state of the two transverse pointer modes in a truncated Fock basis.
///
/// coeffs()(n, m) is the amplitude of |n>_a |m>_b with n < na(), m < nb().
/// sigma() is the beam waist that sets the coordinate scale of both modes.
/// The b-mode never needs more than {|0>, |1>} for the states built here, but
/// any nb >= 2 is accepted.
class TwoModeState {
 public:
  TwoModeState(Eigen::MatrixXcd coeffs, double sigma)
      : coeffs_(std::move(coeffs)), sigma_(sigma) {
    if (coeffs_.rows() < 1) throw std::invalid_argument("TwoModeState: Na must be >= 1");
    if (coeffs_.cols() < 2) throw std::invalid_argument("TwoModeState: Nb must be >= 2");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
      throw std::invalid_argument("TwoModeState: sigma must be positive and finite");
    }
    if (!coeffs_.allFinite()) throw std::invalid_argument("TwoModeState: non-finite amplitude");
  }

  static TwoModeState zero(int na, int nb, double sigma) {
    if (na < 1) throw std::invalid_argument("TwoModeState: Na must be >= 1");
    if (nb < 2) throw std::invalid_argument("TwoModeState: Nb must be >= 2");
    return TwoModeState(Eigen::MatrixXcd::Zero(na, nb), sigma);
  }

  int na() const { return static_cast<int>(coeffs_.rows()); }
  int nb() const { return static_cast<int>(coeffs_.cols()); }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  cplx operator()(int n, int m) const { return coeffs_(n, m); }

  double norm() const { return coeffs_.norm(); }
  double squared_norm() const { return coeffs_.squaredNorm(); }

  /// Throws if the state is (numerically) the zero vector.
  TwoModeState normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw std::domain_error("TwoModeState: cannot normalize the zero state");
    return TwoModeState(coeffs_ / n, sigma_);
  }

  /// Same basis and waist, new amplitudes.
  TwoModeState with_coeffs(Eigen::MatrixXcd c) const {
    if (c.rows() != coeffs_.rows() || c.cols() != coeffs_.cols()) {
      throw std::invalid_argument("TwoModeState: coefficient shape mismatch");
    }
    return TwoModeState(std::move(c), sigma_);
  }

  bool same_space(const TwoModeState& o) const {
    return na() == o.na() && nb() == o.nb() && sigma_ == o.sigma_;
  }

  /// Probability carried by the highest a-mode level, used as a truncation audit.
  double top_level_occupation() const { return coeffs_.row(na() - 1).squaredNorm(); }

 private:
  Eigen::MatrixXcd coeffs_;
  double sigma_;
};

inline void require_same_space(const TwoModeState& u, const TwoModeState& v) {
  if (!u.same_space(v)) {
    throw std::invalid_argument("two-mode states live in different spaces (Na, Nb, sigma)");
  }
}

inline TwoModeState operator+(const TwoModeState& u, const TwoModeState& v) {
  require_same_space(u, v);
  return u.with_coeffs(u.coeffs() + v.coeffs());
}

inline TwoModeState operator-(const TwoModeState& u, const TwoModeState& v) {
  require_same_space(u, v);
  return u.with_coeffs(u.coeffs() - v.coeffs());
}

inline TwoModeState operator*(cplx z, const TwoModeState& u) {
  return u.with_coeffs(z * u.coeffs());
}

inline TwoModeState vacuum(int na, int nb, double sigma) {
  if (na < 1) throw std::invalid_argument("vacuum: Na must be >= 1");
  if (nb < 2) throw std::invalid_argument("vacuum: Nb must be >= 2");
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(na, nb);
  c(0, 0) = 1.0;
  return TwoModeState(std::move(c), sigma);
}

/// Basis state |n>_a |m>_b.
inline TwoModeState basis_state(int na, int nb, double sigma, int n, int m) {
  auto s = TwoModeState::zero(na, nb, sigma);
  if (n < 0 || n >= na || m < 0 || m >= nb) throw std::out_of_range("basis_state: index");
  Eigen::MatrixXcd c = s.coeffs();
  c(n, m) = 1.0;
  return s.with_coeffs(std::move(c));
}

/// <u|v> = sum conj(u_nm) v_nm.
inline cplx inner(const TwoModeState& u, const TwoModeState& v) {
  require_same_space(u, v);
  return (u.coeffs().array().conjugate() * v.coeffs().array()).sum();
}

inline double distance(const TwoModeState& u, const TwoModeState& v) {
  require_same_space(u, v);
  return (u.coeffs() - v.coeffs()).norm();
}

inline double max_abs_difference(const TwoModeState& u, const TwoModeState& v) {
  require_same_space(u, v);
  return (u.coeffs() - v.coeffs()).cwiseAbs().maxCoeff();
}

enum class Ladder { a, a_dag, b, b_dag };

/// Applies one ladder operator. Creation on the top truncation level drops
/// that amplitude; callers choose cutoffs so this loss is negligible.
inline TwoModeState apply_ladder(const TwoModeState& s, Ladder op) {
  const Eigen::MatrixXcd& c = s.coeffs();
  const int na = s.na();
  const int nb = s.nb();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(na, nb);
  switch (op) {
    case Ladder::a:
      for (int n = 1; n < na; ++n) out.row(n - 1) = std::sqrt(static_cast<double>(n)) * c.row(n);
      break;
    case Ladder::a_dag:
      for (int n = 0; n + 1 < na; ++n) out.row(n + 1) = std::sqrt(n + 1.0) * c.row(n);
      break;
    case Ladder::b:
      for (int m = 1; m < nb; ++m) out.col(m - 1) = std::sqrt(static_cast<double>(m)) * c.col(m);
      break;
    case Ladder::b_dag:
      for (int m = 0; m + 1 < nb; ++m) out.col(m + 1) = std::sqrt(m + 1.0) * c.col(m);
      break;
  }
  return s.with_coeffs(std::move(out));
}

/// Applies ops right to left, like an operator product: {a_dag, a} gives a†a.
inline TwoModeState apply_word(TwoModeState s, std::initializer_list<Ladder> ops) {
  for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) s = apply_ladder(s, *it);
  return s;
}

}  // namespace fock
}  // namespace pvm
