// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>
#include <utility>

#include "pvm/closedform/kernels.hpp"
#include "pvm/closedform/printed.hpp"
#include "pvm/errors.hpp"
#include "pvm/expectation.hpp"
#include "pvm/field.hpp"
#include "pvm/parallel.hpp"
#include "pvm/weakmeas.hpp"

namespace pvm::closedform {

/// Which set of analytic expressions to evaluate.
enum class Transcription {
  derived,  ///< branch-kernel closed forms; agree with the oracle
  printed,  ///< the article's formulas verbatim
};

/// How <X^2> is built from the moments in the SNR ratio.
enum class PositionConvention {
  printed,        ///< (sigma^2/2) {<a†a> + Re<a^2> + 2}
  operator_form,  ///< sigma^2 {2<a†a> + 2 Re<a^2> + 1}, from X = sigma (a + a†)
};

struct Formulas {
  Transcription transcription = Transcription::derived;
  PositionConvention position = PositionConvention::printed;
};

inline std::string_view to_string(Transcription t) {
  return t == Transcription::derived ? "derived" : "printed";
}

inline std::string_view to_string(PositionConvention c) {
  return c == PositionConvention::printed ? "printed" : "operator";
}

inline HelperTerms helper_terms(const MeasurementParams& p) {
  p.validate();
  return printed::helper_terms(p);
}

/// 1/lambda^2. The derived form is the unit-operator kernel contracted with w;
/// it equals (1/2)[1 + |w|^2 + (1 - |w|^2) Re I1 + 2 Im(w) Im(I2)].
inline double inverse_lambda_squared(const MeasurementParams& p,
                                     Transcription t = Transcription::derived) {
  p.validate();
  if (t == Transcription::printed) return printed::lambda_bracket(p);
  const cplx w = weak_value(p.alpha, p.delta).value;
  return 0.25 * weak_value_contraction(branch_kernels(p.Gamma, p.phi, p.gamma).one, w).real();
}

inline double lambda_norm(const MeasurementParams& p, Transcription t = Transcription::derived) {
  const double b = inverse_lambda_squared(p, t);
  if (!(b > kPostselectionFloor * kPostselectionFloor)) {
    throw PostselectionError("lambda: non-positive normalization bracket");
  }
  return 1.0 / std::sqrt(b);
}

/// Exact probability of the |H> outcome, cos^2(alpha/2) / lambda^2.
inline double success_probability(const MeasurementParams& p,
                                  Transcription t = Transcription::derived) {
  return weak_value(p.alpha, p.delta).ps * inverse_lambda_squared(p, t);
}

inline ExpectationSet expectations(const MeasurementParams& p,
                                   Transcription t = Transcription::derived) {
  p.validate();
  const double lambda = lambda_norm(p, t);
  if (t == Transcription::printed) return printed::moments(p, lambda);
  const cplx w = weak_value(p.alpha, p.delta).value;
  const auto ks = branch_kernels(p.Gamma, p.phi, p.gamma).moments();
  std::array<cplx, ExpectationSet::size> v{};
  const double scale = lambda * lambda / 4.0;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * weak_value_contraction(ks[i], w);
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

/// Moments of the pointer without postselection (system traced out).
inline ExpectationSet nonpostselected_expectations(const MeasurementParams& p) {
  p.validate();
  const double k = std::sin(p.alpha) * std::cos(p.delta);
  const auto ks = branch_kernels(p.Gamma, p.phi, p.gamma).moments();
  std::array<cplx, ExpectationSet::size> v{};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mixture_contraction(ks[i], k);
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

/// Moments of the initial pointer |Psi_i>.
inline ExpectationSet initial_expectations(const MeasurementParams& p) {
  MeasurementParams z = p;
  z.Gamma = 0.0;
  return nonpostselected_expectations(z);
}

inline printed::PositionMoments nonpostselected_position_moments(
    const MeasurementParams& p, Transcription t = Transcription::derived) {
  if (t == Transcription::printed) {
    p.validate();
    return printed::nonpostselected(p);
  }
  const ExpectationSet m = nonpostselected_expectations(p);
  return {m.a, m.adag_a, m.a2};
}

struct Squeezing {
  double Q1, Q2;
};

/// Q_i = Var(F_i) - 1/4 written in terms of the moments.
inline Squeezing squeezing_from_moments(const ExpectationSet& m) {
  const double n = m.adag_a.real() + m.bdag_b.real();
  const double hop = 2.0 * m.adag_b.real();
  const double pair = 2.0 * m.ab.real();
  const double sq = m.a2.real() + m.b2.real();
  const double re = m.a.real() + m.b.real();
  const double im = m.a.imag() + m.b.imag();
  return {0.25 * (n + hop + pair) + 0.25 * sq - 0.5 * re * re,
          0.25 * (n + hop - pair) - 0.25 * sq - 0.5 * im * im};
}

inline Squeezing squeezing(const MeasurementParams& p, Transcription t = Transcription::derived) {
  const ExpectationSet m = expectations(p, t);
  if (t == Transcription::printed) {
    const auto [q1, q2] = printed::squeezing(m);
    return {q1, q2};
  }
  return squeezing_from_moments(m);
}

inline constexpr double kPhotonFloor = 1e-12;

inline double g2_from_moments(const ExpectationSet& m) {
  const double na = m.adag_a.real();
  const double nb = m.bdag_b.real();
  if (!(na > kPhotonFloor) || !(nb > kPhotonFloor)) {
    throw UndefinedCorrelation("g2: a mean photon number is zero");
  }
  return m.adaga_bdagb.real() / (na * nb);
}

inline double g2_cross(const MeasurementParams& p, Transcription t = Transcription::derived) {
  return g2_from_moments(expectations(p, t));
}

/// <Psi_i|D(beta)|Psi_i> for real beta.
inline cplx initial_overlap(const MeasurementParams& p, double beta) {
  const double q = 1.0 + p.gamma * p.gamma;
  const cplx i(0.0, 1.0);
  return std::exp(-0.5 * beta * beta) *
         (1.0 - (i * std::numbers::sqrt2 * beta * p.gamma * std::sin(p.phi) +
                 0.5 * p.gamma * p.gamma * beta * beta) /
                    q);
}

/// |<Psi_i|Psi>|^2.
inline double fidelity(const MeasurementParams& p, Transcription t = Transcription::derived) {
  p.validate();
  const double lambda = lambda_norm(p, t);
  if (t == Transcription::printed) return printed::fidelity(p, lambda);
  const cplx w = weak_value(p.alpha, p.delta).value;
  const double s = 0.5 * p.Gamma;
  return std::norm(lambda / 2.0 *
                   ((1.0 + w) * initial_overlap(p, s) + (1.0 - w) * initial_overlap(p, -s)));
}

inline double position_second_moment(cplx adag_a, cplx a2, double sigma, PositionConvention c) {
  if (c == PositionConvention::printed) return printed::position_second_moment(adag_a, a2, sigma);
  return sigma * sigma * (2.0 * adag_a.real() + 2.0 * a2.real() + 1.0);
}

struct SnrRatio {
  double chi;  ///< Rp / Rn
  double Rp;   ///< sqrt(N Ps) |dx| / Dx
  double Rn;   ///< sqrt(N) |dx'| / Dx'
};

inline constexpr double kShiftFloor = 1e-14;

/// Assembles the SNR ratio from position moments. chi is formed from the
/// N-free per-shot ratios, so it does not depend on N at all.
inline SnrRatio snr_from_moments(cplx a_final, cplx n_final, cplx a2_final, cplx a_phi,
                                 cplx n_phi, cplx a2_phi, cplx a_initial, double ps, double sigma,
                                 long long N, PositionConvention c) {
  if (N < 1) throw std::invalid_argument("snr_ratio: N must be positive");
  const double x_final = 2.0 * sigma * a_final.real();
  const double x_phi = 2.0 * sigma * a_phi.real();
  const double x_init = 2.0 * sigma * a_initial.real();
  const double dx = x_final - x_init;
  const double dxp = x_phi - x_init;
  if (std::abs(dxp) / sigma < kShiftFloor) {
    throw DegenerateShift("snr_ratio: non-postselected shift vanishes");
  }
  const double var = position_second_moment(n_final, a2_final, sigma, c) - x_final * x_final;
  const double varp = position_second_moment(n_phi, a2_phi, sigma, c) - x_phi * x_phi;
  if (!(var > 0.0) || !(varp > 0.0)) {
    throw VarianceCollapse("snr_ratio: position variance is not positive");
  }
  const double per_shot_p = std::sqrt(ps) * std::abs(dx) / std::sqrt(var);
  const double per_shot_n = std::abs(dxp) / std::sqrt(varp);
  const double rootN = std::sqrt(static_cast<double>(N));
  return {per_shot_p / per_shot_n, rootN * per_shot_p, rootN * per_shot_n};
}

inline SnrRatio snr_ratio(const MeasurementParams& p, long long N, Formulas f = {}) {
  const ExpectationSet m = expectations(p, f.transcription);
  const auto phi = nonpostselected_position_moments(p, f.transcription);
  MeasurementParams z = p;
  z.Gamma = 0.0;
  const cplx a0 = nonpostselected_position_moments(z, f.transcription).a;
  return snr_from_moments(m.a, m.adag_a, m.a2, phi.a, phi.adag_a, phi.a2, a0,
                          weak_value(p.alpha, p.delta).ps, p.sigma, N, f.position);
}

inline constexpr double kWignerImagTolerance = 1e-9;

/// Closed-form reduced a-mode Wigner function on a (x, p) grid.
inline RealField wigner_field(const MeasurementParams& p, const GridSpec& grid,
                              Transcription t = Transcription::derived) {
  p.validate();
  grid.validate();
  const double lambda = lambda_norm(p, t);
  Eigen::MatrixXd W(grid.nx, grid.ny);
  double worst_imag = 0.0;
  std::vector<double> row_imag(static_cast<std::size_t>(grid.nx), 0.0);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < grid.ny; ++j) {
      const cplx v = printed::wigner_point(p, lambda, grid.x(i), grid.y(j));
      W(i, j) = v.real();
      row_imag[ii] = std::max(row_imag[ii], std::abs(v.imag()));
    }
  });
  for (double r : row_imag) worst_imag = std::max(worst_imag, r);
  if (worst_imag > kWignerImagTolerance) {
    throw ConsistencyError("wigner_field: imaginary residue exceeds tolerance");
  }
  return {grid, std::move(W), FieldKind::wigner};
}

/// Pointer amplitude Psi(x, y) from the two displaced branches:
/// (lambda / (2 sqrt q)) sum_pm t_pm phi_{pm s}(x) psi(y)
///   [1 + gamma e^{i phi} (x/sigma -+ sqrt2 s) + i gamma e^{i phi} y/sigma].
inline cplx wavefunction_point(const MeasurementParams& p, double lambda, double x, double y) {
  using std::numbers::pi;
  using std::numbers::sqrt2;
  const cplx w = weak_value(p.alpha, p.delta).value;
  const double sig = p.sigma;
  const double s = 0.5 * p.Gamma;
  const cplx ge = std::polar(p.gamma, p.phi);
  const double norm4 = std::pow(pi * sig * sig, -0.25);
  const double psi_y = norm4 * std::exp(-0.5 * y * y / (sig * sig));
  const cplx i(0.0, 1.0);
  cplx total = 0.0;
  for (double sign : {+1.0, -1.0}) {
    const double shift = x / sig - sign * sqrt2 * s;
    const double phi_s = norm4 * std::exp(-0.5 * shift * shift);
    total += (1.0 + sign * w) * phi_s * (1.0 + ge * shift + i * ge * (y / sig));
  }
  return lambda / (2.0 * std::sqrt(1.0 + p.gamma * p.gamma)) * psi_y * total;
}

/// Pointer intensity |Psi(x, y)|^2 rescaled to unit grid integral.
inline RealField intensity_field(const MeasurementParams& p, const GridSpec& grid,
                                 Transcription t = Transcription::derived) {
  p.validate();
  grid.validate();
  const double lambda = t == Transcription::derived ? lambda_norm(p, t) : 1.0;
  Eigen::MatrixXd I(grid.nx, grid.ny);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < grid.ny; ++j) {
      const cplx v = t == Transcription::derived
                         ? wavefunction_point(p, lambda, grid.x(i), grid.y(j))
                         : printed::intensity_amplitude(p, grid.x(i), grid.y(j));
      I(i, j) = std::norm(v);
    }
  });
  return normalized_to_unit_integral({grid, std::move(I), FieldKind::intensity});
}

}  // namespace pvm::closedform
