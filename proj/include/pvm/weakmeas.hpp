// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pvm/errors.hpp"
#include "pvm/expectation.hpp"
#include "pvm/fock/displacement.hpp"
#include "pvm/fock/state.hpp"

namespace pvm {

/// One experiment configuration. Gamma is the dimensionless coupling g t / sigma.
struct MeasurementParams {
  double Gamma = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
  double sigma = 1.0;

  void validate() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(Gamma) || Gamma < 0.0) throw std::invalid_argument("Gamma must be >= 0");
    if (!finite(alpha) || alpha < 0.0 || alpha >= std::numbers::pi) {
      throw std::invalid_argument("alpha must lie in [0, pi)");
    }
    if (!finite(delta) || delta < 0.0 || delta > two_pi) {
      throw std::invalid_argument("delta must lie in [0, 2 pi]");
    }
    if (!finite(phi) || phi < 0.0 || phi >= two_pi) {
      throw std::invalid_argument("phi must lie in [0, 2 pi)");
    }
    if (!finite(gamma) || gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (!finite(sigma) || !(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  }
};

struct WeakValue {
  cplx value;  ///< e^{i delta} tan(alpha / 2)
  double ps;   ///< cos^2(alpha / 2)
};

inline WeakValue weak_value(double alpha, double delta) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= std::numbers::pi) {
    throw std::invalid_argument("weak_value: alpha must lie in [0, pi)");
  }
  if (!std::isfinite(delta)) throw std::invalid_argument("weak_value: delta must be finite");
  const double c = std::cos(0.5 * alpha);
  return {std::polar(std::tan(0.5 * alpha), delta), c * c};
}

inline int default_cutoff(double gamma_max) {
  const double r = std::abs(gamma_max) / 2.0 + 6.0;
  return std::max(40, static_cast<int>(std::ceil(r * r)));
}

inline constexpr int kPointerNb = 2;

/// N [ (|0> + c|1>)|0>_b + i c |0>|1>_b ] with c = gamma e^{i phi} / sqrt 2.
inline fock::TwoModeState initial_pointer(const MeasurementParams& p, int na) {
  p.validate();
  if (na < 2) throw std::invalid_argument("initial_pointer: Na must be >= 2");
  const double norm = 1.0 / std::sqrt(1.0 + p.gamma * p.gamma);
  const cplx c = std::polar(p.gamma / std::numbers::sqrt2, p.phi);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(na, kPointerNb);
  m(0, 0) = norm;
  m(1, 0) = norm * c;
  m(0, 1) = norm * cplx(0.0, 1.0) * c;
  return {std::move(m), p.sigma};
}

/// System-pointer state after the coupling, written in the sigma_x eigenbasis
/// {|D>, |A>} of the system: amp_plus |D> branch_plus + amp_minus |A> branch_minus.
struct JointState {
  fock::TwoModeState branch_plus;   ///< D(Gamma/2) |Psi_i>
  fock::TwoModeState branch_minus;  ///< D(-Gamma/2) |Psi_i>
  cplx amp_plus;                    ///< <D|psi_i>
  cplx amp_minus;                   ///< <A|psi_i>
  double norm_drift = 0.0;          ///< worst displacement norm change

  double norm() const {
    return std::sqrt(std::norm(amp_plus) * branch_plus.squared_norm() +
                     std::norm(amp_minus) * branch_minus.squared_norm());
  }
};

/// The preselected system state is cos(alpha/2)|H> + e^{i delta} sin(alpha/2)|V>.
inline JointState evolve_joint(const fock::TwoModeState& pointer, const MeasurementParams& p,
                               fock::DisplacementMethod method =
                                   fock::DisplacementMethod::closed_form) {
  p.validate();
  const double s = 0.5 * p.Gamma;
  auto plus = fock::displace_a(pointer, s, method);
  auto minus = fock::displace_a(pointer, -s, method);
  const double c = std::cos(0.5 * p.alpha);
  const cplx e = std::polar(std::sin(0.5 * p.alpha), p.delta);
  const double r = 1.0 / std::numbers::sqrt2;
  return {std::move(plus.state), std::move(minus.state), r * (c + e), r * (c - e),
          std::max(plus.norm_drift, minus.norm_drift)};
}

struct Postselected {
  fock::TwoModeState state;    ///< normalized final pointer
  double lambda;               ///< normalizer of (1/2)[(1+w)D + (1-w)D†]|Psi_i>
  double success_probability;  ///< ||<H|Phi>||^2, includes the interaction
  double ideal_probability;    ///< cos^2(alpha/2)
};

inline constexpr double kPostselectionFloor = 1e-14;

/// Projects the system onto |H>.
inline Postselected postselect(const JointState& j, const MeasurementParams& p) {
  const WeakValue wv = weak_value(p.alpha, p.delta);
  const cplx w = wv.value;
  const fock::TwoModeState u =
      0.5 * ((1.0 + w) * j.branch_plus + (1.0 - w) * j.branch_minus);
  const double un = u.norm();
  if (!(un >= kPostselectionFloor)) {
    throw PostselectionError("postselect: projected pointer state vanishes");
  }
  return {u.with_coeffs(u.coeffs() / un), 1.0 / un, wv.ps * un * un, wv.ps};
}

/// Convenience: initial pointer, coupling and postselection in one call.
inline Postselected run_measurement(const MeasurementParams& p, int na,
                                    fock::DisplacementMethod method =
                                        fock::DisplacementMethod::closed_form) {
  return postselect(evolve_joint(initial_pointer(p, na), p, method), p);
}

/// Pointer moments of the joint state with the system traced out.
inline ExpectationSet nonpostselected_moments(const JointState& j) {
  const double wp = std::norm(j.amp_plus);
  const double wm = std::norm(j.amp_minus);
  const auto mp = fock::state_moments(j.branch_plus).values();
  const auto mm = fock::state_moments(j.branch_minus).values();
  std::array<cplx, ExpectationSet::size> v{};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = wp * mp[i] + wm * mm[i];
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

}  // namespace pvm
