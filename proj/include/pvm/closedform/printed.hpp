// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "pvm/errors.hpp"
#include "pvm/expectation.hpp"
#include "pvm/weakmeas.hpp"

// Formulas exactly as they are typeset in the source article. Several of them
// disagree with the state-vector oracle; the validation report measures by
// how much. Nothing here is corrected.

namespace pvm::closedform {

struct HelperTerms {
  cplx I1, I2, II, III_plus, III_minus, B_plus, B_minus, M_plus, M_minus, M1, M2, T_plus,
      T_minus, T, IV1, IV2, V_plus, V_minus;
};

namespace printed {

inline HelperTerms helper_terms(const MeasurementParams& p) {
  using std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  const double G = p.Gamma;
  const double g = p.gamma;
  const double q = 1.0 + g * g;
  const double E = std::exp(-0.5 * G * G);
  const cplx ep = std::polar(1.0, p.phi);
  const cplx em = std::polar(1.0, -p.phi);
  const double sp = std::sin(p.phi);
  const double cp = std::cos(p.phi);

  HelperTerms h{};
  h.I1 = (1.0 - (i * sqrt2 * G * g * sp + (g * G) * (g * G) / 2.0) / q) * E;
  h.I2 = (q + i * sqrt2 * G * g * sp - g * g * G * G / 2.0) / q * E;
  h.II = g * ep * E / (sqrt2 * q);
  h.III_plus = E / q * (g * g / 2.0 * (1.0 - G * G) + g * ep / sqrt2 * G);
  h.III_minus = E / q * (g * g / 2.0 * (1.0 - G * G) - g * ep / sqrt2 * G);
  h.B_plus = i * g * E / q * (g / 2.0 * (1.0 - G * G) - ep / sqrt2 * G);
  h.B_minus = -i * g * E / q * (g / 2.0 * (1.0 - G * G) - em / sqrt2 * G);
  h.M_plus = G * G * g * g / (2.0 * q) + G * G * G * g * cp / (2.0 * sqrt2 * q) +
             std::pow(G, 4) / 16.0;
  h.M_minus = G * G * g * g / (2.0 * q) - G * G * G * g * cp / (2.0 * sqrt2 * q) +
              std::pow(G, 4) / 16.0;
  h.T_plus = g * ep * G / q * (G / sqrt2 - g * em * (1.0 - G * G / 2.0)) * E;
  h.T_minus = g * ep * G / q * (G / sqrt2 + g * em * (1.0 - G * G / 2.0)) * E;
  h.T = G * G / q * (1.0 + g * g * (2.0 - G * G / 2.0)) * E;
  h.IV1 = E / q * (g * g / 2.0 * (1.0 - G * G) - g * ep / sqrt2 * G);
  h.IV2 = E / q * (g * g / 2.0 * (1.0 - G * G) + g * ep / sqrt2 * G);
  const double vtail = G * g * g * (1.0 + (2.0 - G * G) / sqrt2);
  h.V_plus = E / (2.0 * q) * (G * G * g * ep + sqrt2 * g * em * (1.0 - G * G) - 2.0 * G - vtail);
  h.V_minus = E / (2.0 * q) * (G * G * g * ep + sqrt2 * g * em * (1.0 - G * G) + 2.0 * G + vtail);
  h.M1 = G * h.T_plus + G * G / 4.0 * (h.T + 4.0 * h.IV1) + G * G * G / 4.0 * (h.V_plus + h.II) +
         std::pow(G, 4) * h.I1 / 16.0;
  // The typeset M2 has no operator between "-Gamma T_-" and "Gamma^2/4 (T + 4 IV2)";
  // juxtaposition is read as a product.
  h.M2 = -G * h.T_minus * (G * G / 4.0) * (h.T + 4.0 * h.IV2) -
         G * G * G / 4.0 * (h.V_minus + h.II) + std::pow(G, 4) * h.I2 / 16.0;
  return h;
}

/// Bracket of the typeset normalization; lambda = bracket^{-1/2}.
inline double lambda_bracket(const MeasurementParams& p) {
  const double w2 = std::norm(weak_value(p.alpha, p.delta).value);
  return 0.5 * (1.0 + w2 + (1.0 - w2) * helper_terms(p).I1.real());
}

inline double lambda_norm(const MeasurementParams& p) {
  const double b = lambda_bracket(p);
  if (!(b > 0.0)) throw PostselectionError("lambda: non-positive normalization bracket");
  return 1.0 / std::sqrt(b);
}

/// Printed moments with |lambda'| read as the given lambda.
inline ExpectationSet moments(const MeasurementParams& p, double lambda) {
  using std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  const HelperTerms h = helper_terms(p);
  const cplx w = weak_value(p.alpha, p.delta).value;
  const cplx wc = std::conj(w);
  const double aw2 = std::norm(w);
  const double G = p.Gamma;
  const double g = p.gamma;
  const double q = 1.0 + g * g;
  const double E = std::exp(-0.5 * G * G);
  const cplx ep = std::polar(1.0, p.phi);
  const double L = lambda * lambda;
  const cplx pm = (1.0 + wc) * (1.0 - w);  // (1 + w*)(1 - w)
  const cplx mp = (1.0 - wc) * (1.0 + w);  // (1 - w*)(1 + w)

  ExpectationSet r{};
  r.a = L / 2.0 * ((1.0 + aw2) * g * ep / (sqrt2 * q) + (1.0 - aw2) * h.II +
                   G * (1.0 - h.I2) * w.real());
  r.b = L * i * sqrt2 * g * ep / (4.0 * q) * (1.0 + aw2 + (1.0 - aw2) * E) -
        i * L * g * g * G / (2.0 * q) * w.imag() * E;
  r.a2 = L * G / 2.0 * ((sqrt2 * g * ep / q + 2.0 * h.II) * w.real() + (1.0 + aw2) * G / 4.0) +
         L * G * G / 16.0 * (pm * h.I2 + mp * h.I1);
  r.b2 = 0.0;
  r.adag_a = L / 2.0 * (1.0 + aw2) * (g * g / (2.0 * q) + G * G / 4.0) +
             i * L * G * g * std::cos(p.phi) / (2.0 * sqrt2 * q) * w.imag() +
             L / 4.0 * pm * h.III_plus + L / 4.0 * (1.0 - std::norm(wc)) * h.III_minus +
             L * G * G / 16.0 * (pm * h.I2 + mp * h.I1) +
             L * G / 8.0 * (mp * (h.IV1 + h.II) - pm * (h.IV2 + h.II));
  r.bdag_b = L / 4.0 * ((1.0 + aw2) * g * g / q + (1.0 - aw2) * g * g / q * E);
  r.adag_b = L / 4.0 *
                 ((1.0 + aw2) * i * g * g / q + w.imag() * i * G * g * ep / (sqrt2 * q) * (1.0 + E) +
                  (1.0 - aw2) * g * g * G * G * E / (2.0 * q)) +
             L / 4.0 * (pm * h.B_plus + mp * h.B_minus);
  r.ab = L * g * G / (8.0 * q) *
         (2.0 * sqrt2 * i * ep * (w.real() + i * w.imag() * E) + (1.0 - aw2) * g * G * E);
  r.adaga_bdagb = L * G * G * g * g / (16.0 * q) * (1.0 + aw2 - (1.0 - aw2) * E);
  r.adag2a2 = L / 4.0 * ((1.0 - wc) * (1.0 - w) * h.M_minus + (1.0 + wc) * (1.0 + w) * h.M_plus) +
              L / 4.0 * (mp * h.M1 + pm * h.M2);
  r.bdag2b2 = 0.0;
  return r;
}

/// F = |lambda/2 [(1 - w) I2 + (1 + w) I1]|^2 with I1, I2 evaluated at Gamma.
inline double fidelity(const MeasurementParams& p, double lambda) {
  const HelperTerms h = helper_terms(p);
  const cplx w = weak_value(p.alpha, p.delta).value;
  return std::norm(lambda / 2.0 * ((1.0 - w) * h.I2 + (1.0 + w) * h.I1));
}

/// Non-postselected position moments: <a>, <a†a>, <a^2>.
struct PositionMoments {
  cplx a, adag_a, a2;
};

inline PositionMoments nonpostselected(const MeasurementParams& p) {
  using std::numbers::sqrt2;
  const double G = p.Gamma;
  const double g = p.gamma;
  const double q = 1.0 + g * g;
  const cplx ep = std::polar(1.0, p.phi);
  const double k = std::sin(p.alpha) * std::cos(p.delta);
  return {g * ep / (sqrt2 * q) + G / 2.0 * k, G * G / 4.0 + g * g / (2.0 * q),
          G * G / 4.0 + G * g * ep * (1.0 + k) / (sqrt2 * q)};
}

/// Quadrature squeezing assembled as typeset.
inline std::pair<double, double> squeezing(const ExpectationSet& m) {
  const cplx ab_dag = std::conj(m.adag_b);  // <a b†>
  const cplx adag_bdag = std::conj(m.ab);   // <a† b†>
  const cplx first = 0.25 * (m.adag_a + m.bdag_b + m.adag_b + ab_dag + m.ab + adag_bdag);
  const cplx second = 0.125 * (m.a2 + std::conj(m.a2) + m.b2 + std::conj(m.b2));
  const cplx mean = m.a + std::conj(m.a) + m.b + std::conj(m.b);
  const cplx third = 0.125 * mean * mean;
  return {(first + second - third).real(), (first - second + third).real()};
}

/// <X^2> = (sigma^2/2) {<a†a> + Re<a^2> + 2}.
inline double position_second_moment(cplx adag_a, cplx a2, double sigma) {
  return sigma * sigma / 2.0 * (adag_a.real() + a2.real() + 2.0);
}

/// Bracketed sum of W_+, W_-, W_1 terms with the |lambda'|^2/4 prefactor.
/// Returns the complex value so callers can audit the imaginary residue.
inline cplx wigner_point(const MeasurementParams& p, double lambda, double x, double pp) {
  using std::numbers::pi;
  using std::numbers::sqrt2;
  const cplx w = weak_value(p.alpha, p.delta).value;
  const double G = p.Gamma;
  const double g = p.gamma;
  const double q = 1.0 + g * g;
  const double cp = std::cos(p.phi);
  const double sp = std::sin(p.phi);
  auto W_pm = [&](double sign) {
    const double u = 2.0 * x + sign * G;
    return 1.0 / pi *
           (2.0 + 2.0 * g * sqrt2 / q * (u * cp + 2.0 * pp * sp) +
            g * g / q * (4.0 * pp * pp + u * u - 2.0)) *
           std::exp(-2.0 * pp * pp - u * u / 2.0);
  };
  auto W_1 = [&](double Gs) {
    const cplx shift(2.0 * pp, -Gs);
    return std::exp(-Gs * Gs / 2.0) / pi *
           (2.0 + 4.0 * g * sqrt2 / q * (x * cp + pp * sp) +
            2.0 * g * g / q * (2.0 * x * x + 2.0 * pp * pp - 1.0)) *
           std::exp(-2.0 * x * x - shift * shift / 2.0);
  };
  // 2 Re[z] is written as z + z*, where z* comes from the conjugate
  // coefficient and W_1 at -Gamma; a transcription slip shows up as Im != 0.
  const cplx cross = (1.0 + std::conj(w)) * (1.0 - w) * W_1(G) +
                     (1.0 - std::conj(w)) * (1.0 + w) * W_1(-G);
  return lambda * lambda / 4.0 *
         (std::norm(1.0 - w) * W_pm(+1.0) + std::norm(1.0 + w) * W_pm(-1.0) + cross);
}

/// Unnormalized coordinate amplitude, without the undefined prefactor kappa.
inline cplx intensity_amplitude(const MeasurementParams& p, double x, double y) {
  using std::numbers::pi;
  using std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  const cplx w = weak_value(p.alpha, p.delta).value;
  const double sig = p.sigma;
  const double s = p.Gamma / 2.0;
  const double g = p.gamma;
  const cplx ge = std::polar(g, p.phi);
  const double norm4 = std::pow(1.0 / (pi * sig * sig), 0.25);
  auto phi_s = [&](double ss) {
    const double d = x / sig - ss / sqrt2;
    return norm4 * std::exp(-ss * ss / 2.0 + x * x / (2.0 * sig * sig) - d * d);
  };
  const double psi_y = norm4 * std::exp(-y * y / (2.0 * sig * sig));
  cplx total = 0.0;
  for (double sign : {+1.0, -1.0}) {
    const cplx t = 1.0 + sign * w;
    const double M = phi_s(sign * s) * psi_y;
    const cplx T = ge / sqrt2 * (sign * (1.0 - sqrt2) * s + 2.0 * x / sig) * M;
    const cplx K = i * (sqrt2 * y / sig) * ge * M;
    total += t * (M + T + K);
  }
  return total / std::sqrt(1.0 + g * g);
}

}  // namespace printed
}  // namespace pvm::closedform
