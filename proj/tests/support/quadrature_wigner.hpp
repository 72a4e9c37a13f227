// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pvm/field.hpp"
#include "pvm/fock/displacement.hpp"
#include "pvm/oracle/oracle.hpp"
#include "pvm/parallel.hpp"

// Second Wigner path for tests only: the symmetric characteristic function
// C(l) = Tr[rho D(l)] sampled on a box, then Fourier transformed with
// trapezoid weights. It shares nothing with the displaced-parity route except
// the displacement matrix elements.

namespace pvm::testing {

struct QuadratureBox {
  double half_width = 6.0;
  int n = 241;
};

inline RealField quadrature_wigner(const Eigen::MatrixXcd& rho, const GridSpec& grid,
                                   QuadratureBox box = {}) {
  int K = static_cast<int>(rho.rows());
  while (K > 1 && std::abs(rho(K - 1, K - 1)) < 1e-32) --K;
  const double h = 2.0 * box.half_width / (box.n - 1);
  std::vector<double> nodes(static_cast<std::size_t>(box.n));
  std::vector<double> weights(nodes.size(), h);
  for (int k = 0; k < box.n; ++k) nodes[k] = -box.half_width + k * h;
  weights.front() = weights.back() = 0.5 * h;

  // C(l', l'') with l = l' + i l''.
  Eigen::MatrixXcd C(box.n, box.n);
  parallel_for(static_cast<std::size_t>(box.n), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int k = 0; k < box.n; ++k) {
      cplx acc = 0.0;
      fock::for_each_displacement_element({nodes[j], nodes[k]}, K,
                                          [&](int r, int c, cplx v) { acc += rho(c, r) * v; });
      C(j, k) = weights[j] * weights[k] * acc;
    }
  });

  // alpha l* - alpha* l = 2i (p l' - x l''), which factorizes over the axes.
  Eigen::MatrixXcd Ep(grid.ny, box.n);
  Eigen::MatrixXcd Ex(box.n, grid.nx);
  for (int k = 0; k < box.n; ++k) {
    for (int j = 0; j < grid.ny; ++j) Ep(j, k) = std::polar(1.0, 2.0 * grid.y(j) * nodes[k]);
    for (int i = 0; i < grid.nx; ++i) Ex(k, i) = std::polar(1.0, -2.0 * grid.x(i) * nodes[k]);
  }
  const Eigen::MatrixXcd Wt = Ep * C * Ex;  // (ny, nx)
  const double scale = 1.0 / (std::numbers::pi * std::numbers::pi);
  Eigen::MatrixXd W(grid.nx, grid.ny);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) W(i, j) = scale * Wt(j, i).real();
  }
  return {grid, std::move(W), FieldKind::wigner};
}

/// Reduced a-mode position density at x = xi / sqrt2, rescaled so that it is
/// the p-marginal of the Wigner function in the alpha = x + i p convention.
inline double wigner_marginal_reference(const Eigen::MatrixXcd& rho, double x) {
  const double xi = std::numbers::sqrt2 * x;
  const auto hf = special::hermite_functions(static_cast<int>(rho.rows()) - 1, xi);
  cplx acc = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) {
    for (Eigen::Index k = 0; k < rho.cols(); ++k) acc += rho(n, k) * hf[n] * hf[k];
  }
  return std::numbers::sqrt2 * acc.real();
}

}  // namespace pvm::testing
