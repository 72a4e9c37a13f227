// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "pvm/fock/special.hpp"
#include "pvm/fock/state.hpp"

namespace pvm::fock {

enum class DisplacementMethod {
  closed_form,  ///< exact Fock matrix elements from generalized Laguerre polynomials
  series,       ///< scaled-and-squared Taylor exponential of the truncated generator
};

namespace detail {

// e^{-x/2} sqrt(lo! / (lo + d)!) |alpha|^d for x = |alpha|^2, in log space.
inline double displaced_magnitude(double abs_alpha, int lo, int d) {
  const double x = abs_alpha * abs_alpha;
  if (d == 0) return std::exp(-0.5 * x);
  return std::exp(-0.5 * x + d * std::log(abs_alpha) -
                  0.5 * (std::lgamma(lo + d + 1.0) - std::lgamma(lo + 1.0)));
}

}  // namespace detail

/// <k|D(alpha)|n> for k = 0..K-1.
///
/// k >= n: e^{-|a|^2/2} sqrt(n!/k!) a^{k-n} L_n^{(k-n)}(|a|^2)
/// k <  n: e^{-|a|^2/2} sqrt(k!/n!) (-a*)^{n-k} L_k^{(n-k)}(|a|^2)
inline Eigen::VectorXcd displaced_fock_overlaps(cplx alpha, int n, int K) {
  if (n < 0) throw std::invalid_argument("displaced_fock_overlaps: n must be >= 0");
  if (K <= n) throw std::invalid_argument("displaced_fock_overlaps: K must exceed n");
  Eigen::VectorXcd out(K);
  const double r = std::abs(alpha);
  const double x = r * r;
  if (r == 0.0) {
    out.setZero();
    out(n) = 1.0;
    return out;
  }
  const double theta = std::arg(alpha);
  for (int k = 0; k < K; ++k) {
    const int lo = std::min(k, n);
    const int d = std::abs(k - n);
    const double mag = detail::displaced_magnitude(r, lo, d) * special::laguerre(lo, d, x);
    // a^d = r^d e^{i d theta};  (-a*)^d = r^d (-1)^d e^{-i d theta}
    const double phase = k >= n ? d * theta : -d * theta;
    const double sign = (k < n && (d % 2)) ? -1.0 : 1.0;
    out(k) = sign * std::polar(mag, phase);
  }
  return out;
}

/// Calls visit(k, n, <k|D(alpha)|n>) for every k, n < K. Each diagonal
/// k - n = const is walked with one Laguerre recurrence, so the cost is O(K^2).
template <class Visit>
void for_each_displacement_element(cplx alpha, int K, Visit&& visit) {
  const double r = std::abs(alpha);
  if (r == 0.0) {
    for (int n = 0; n < K; ++n) visit(n, n, cplx(1.0));
    return;
  }
  const double x = r * r;
  const double theta = std::arg(alpha);
  for (int d = 0; d < K; ++d) {
    const int len = K - d;
    const auto L = special::laguerre_sequence(len - 1, d, x);
    const cplx lower_phase = std::polar(1.0, d * theta);                    // a^d / r^d
    const cplx upper_phase = std::polar((d % 2) ? -1.0 : 1.0, -d * theta);  // (-a*)^d / r^d
    double mag = detail::displaced_magnitude(r, 0, d);
    for (int lo = 0; lo < len; ++lo) {
      if (lo > 0) mag *= std::sqrt(static_cast<double>(lo) / (lo + d));
      const double v = mag * L[lo];
      visit(lo + d, lo, v * lower_phase);
      if (d > 0) visit(lo, lo + d, v * upper_phase);
    }
  }
}

/// Exact K x K block of D(alpha) in the Fock basis: element (k, n) = <k|D|n>.
inline Eigen::MatrixXcd displacement_matrix(cplx alpha, int K) {
  if (K < 1) throw std::invalid_argument("displacement_matrix: K must be >= 1");
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(K, K);
  for_each_displacement_element(alpha, K, [&](int k, int n, cplx v) { D(k, n) = v; });
  return D;
}

/// exp(alpha a† - alpha* a) with a truncated to K levels. Unitary by
/// construction, but differs from the exact block near the top levels.
inline Eigen::MatrixXcd displacement_series(cplx alpha, int K) {
  if (K < 1) throw std::invalid_argument("displacement_series: K must be >= 1");
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(K, K);
  for (int n = 0; n + 1 < K; ++n) {
    const double s = std::sqrt(n + 1.0);
    G(n + 1, n) = alpha * s;            // alpha a†
    G(n, n + 1) = -std::conj(alpha) * s;  // -alpha* a
  }
  const double gnorm = G.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (gnorm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(gnorm / 0.5)));
  G /= std::ldexp(1.0, squarings);

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(K, K);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(K, K);
  for (int j = 1; j < 64; ++j) {
    term = (term * G) / static_cast<double>(j);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

inline Eigen::MatrixXcd displacement_operator(cplx alpha, int K, DisplacementMethod method) {
  return method == DisplacementMethod::closed_form ? displacement_matrix(alpha, K)
                                                   : displacement_series(alpha, K);
}

/// Result of displacing the a-mode, with the norm audit.
struct Displaced {
  TwoModeState state;
  double norm_drift = 0.0;  ///< | ||D psi|| - ||psi|| |

  static constexpr double kDriftTolerance = 1e-8;
  bool truncation_suspect() const { return norm_drift > kDriftTolerance; }
};

/// Applies D(alpha) to the a-mode only.
inline Displaced displace_a(const TwoModeState& s, cplx alpha,
                            DisplacementMethod method = DisplacementMethod::closed_form) {
  const Eigen::MatrixXcd D = displacement_operator(alpha, s.na(), method);
  TwoModeState out = s.with_coeffs(D * s.coeffs());
  const double drift = std::abs(out.norm() - s.norm());
  return {std::move(out), drift};
}

}  // namespace pvm::fock
