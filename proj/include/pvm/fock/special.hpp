// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace pvm::special {

/// L_0^{(a)}(x), ..., L_{n_max}^{(a)}(x) by the three-term recurrence in the
/// degree.
inline std::vector<double> laguerre_sequence(int n_max, double a, double x) {
  std::vector<double> L(static_cast<std::size_t>(n_max) + 1);
  L[0] = 1.0;
  if (n_max >= 1) L[1] = 1.0 + a - x;
  for (int n = 1; n < n_max; ++n) {
    L[n + 1] = ((2.0 * n + 1.0 + a - x) * L[n] - (n + a) * L[n - 1]) / (n + 1.0);
  }
  return L;
}

inline double laguerre(int n, double a, double x) {
  return laguerre_sequence(n, a, x).back();
}

/// Orthonormal Hermite functions h_n(xi) = (2^n n! sqrt(pi))^{-1/2} H_n(xi)
/// e^{-xi^2/2} for n = 0..n_max. The recurrence runs on the normalized
/// functions, so no factorials appear and n up to a few hundred is safe.
inline std::vector<double> hermite_functions(int n_max, double xi) {
  std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  if (n_max >= 1) h[1] = std::numbers::sqrt2 * xi * h[0];
  for (int n = 1; n < n_max; ++n) {
    h[n + 1] = std::sqrt(2.0 / (n + 1.0)) * xi * h[n] -
               std::sqrt(static_cast<double>(n) / (n + 1.0)) * h[n - 1];
  }
  return h;
}

}  // namespace pvm::special
