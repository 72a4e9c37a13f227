// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pvm/field.hpp"
#include "pvm/fock/special.hpp"
#include "pvm/fock/state.hpp"

namespace pvm::fock {

/// u_n(t) = sigma^{-1/2} h_n(t / sigma) for n < levels, sampled at the given
/// points; row i holds one sample point.
inline Eigen::MatrixXd hermite_gauss_table(const Eigen::VectorXd& points, int levels,
                                           double sigma) {
  Eigen::MatrixXd U(points.size(), levels);
  const double scale = 1.0 / std::sqrt(sigma);
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    const auto h = special::hermite_functions(levels - 1, points(i) / sigma);
    for (int n = 0; n < levels; ++n) U(i, n) = scale * h[n];
  }
  return U;
}

inline Eigen::VectorXd grid_axis_x(const GridSpec& g) {
  Eigen::VectorXd v(g.nx);
  for (int i = 0; i < g.nx; ++i) v(i) = g.x(i);
  return v;
}

inline Eigen::VectorXd grid_axis_y(const GridSpec& g) {
  Eigen::VectorXd v(g.ny);
  for (int j = 0; j < g.ny; ++j) v(j) = g.y(j);
  return v;
}

/// Psi(x, y) = sum_nm c_nm u_n(x) u_m(y).
inline ComplexField coordinate_wavefunction(const TwoModeState& s, const GridSpec& grid) {
  grid.validate();
  const Eigen::MatrixXd Ux = hermite_gauss_table(grid_axis_x(grid), s.na(), s.sigma());
  const Eigen::MatrixXd Uy = hermite_gauss_table(grid_axis_y(grid), s.nb(), s.sigma());
  Eigen::MatrixXcd psi = Ux.cast<cplx>() * s.coeffs() * Uy.transpose().cast<cplx>();
  return {grid, std::move(psi), FieldKind::wavefunction};
}

/// |Psi(x, y)|^2 without renormalization.
inline RealField coordinate_density(const TwoModeState& s, const GridSpec& grid) {
  const ComplexField psi = coordinate_wavefunction(s, grid);
  return {grid, psi.values.cwiseAbs2(), FieldKind::intensity};
}

}  // namespace pvm::fock
