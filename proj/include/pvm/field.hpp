// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string_view>
#include <type_traits>

namespace pvm {

/// Rectangular sampling grid. For Wigner fields the y axis is momentum p.
struct GridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double y_min = -6.0;
  double y_max = 6.0;
  int nx = 241;
  int ny = 241;

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw std::invalid_argument("GridSpec: need x_min < x_max and y_min < y_max");
    }
    if (nx < 2 || ny < 2) throw std::invalid_argument("GridSpec: nx and ny must be >= 2");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max)) {
      throw std::invalid_argument("GridSpec: bounds must be finite");
    }
  }

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return i == nx - 1 ? x_max : x_min + i * dx(); }
  double y(int j) const { return j == ny - 1 ? y_max : y_min + j * dy(); }

  static GridSpec square(double half_width, int n) {
    return {-half_width, half_width, -half_width, half_width, n, n};
  }
};

enum class FieldKind { intensity, wigner, wavefunction };

inline std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::intensity: return "intensity";
    case FieldKind::wigner: return "wigner";
    case FieldKind::wavefunction: return "wavefunction";
  }
  return "?";
}

/// Samples of a function on a GridSpec; values(i, j) sits at (x(i), y(j)).
template <class T>
struct ScalarField {
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  GridSpec grid;
  Matrix values;
  FieldKind kind = FieldKind::intensity;

  ScalarField(GridSpec g, Matrix v, FieldKind k) : grid(g), values(std::move(v)), kind(k) {
    grid.validate();
    if (values.rows() != grid.nx || values.cols() != grid.ny) {
      throw std::invalid_argument("ScalarField: value shape does not match grid");
    }
  }

  /// Trapezoid rule over the full rectangle.
  T integral() const {
    Eigen::VectorXd wx = Eigen::VectorXd::Constant(grid.nx, grid.dx());
    Eigen::VectorXd wy = Eigen::VectorXd::Constant(grid.ny, grid.dy());
    wx(0) *= 0.5;
    wx(grid.nx - 1) *= 0.5;
    wy(0) *= 0.5;
    wy(grid.ny - 1) *= 0.5;
    return (wx.cast<T>().transpose() * values * wy.cast<T>())(0, 0);
  }

  T min() const requires std::is_floating_point_v<T> { return values.minCoeff(); }
  T max() const requires std::is_floating_point_v<T> { return values.maxCoeff(); }
};

using RealField = ScalarField<double>;
using ComplexField = ScalarField<std::complex<double>>;

/// Largest pointwise |u - v|; the grids must coincide.
template <class T>
double max_abs_difference(const ScalarField<T>& u, const ScalarField<T>& v) {
  if (u.values.rows() != v.values.rows() || u.values.cols() != v.values.cols()) {
    throw std::invalid_argument("max_abs_difference: field shapes differ");
  }
  return (u.values - v.values).cwiseAbs().maxCoeff();
}

/// Rescales a non-negative field so that its grid integral is one.
inline RealField normalized_to_unit_integral(RealField f) {
  const double s = f.integral();
  if (!(s > 0.0)) throw std::domain_error("field has non-positive integral");
  f.values /= s;
  return f;
}

}  // namespace pvm
