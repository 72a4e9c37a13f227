// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "pvm/expectation.hpp"

// Analytic moments of the postselected pointer built from the two displaced
// branches chi_pm = D(+-Gamma/2)|Psi_i>. For an operator O, let
// G_jk = <chi_j|O|chi_k>. Each kernel stores
//   Sd = G_++ + G_--,  Ad = G_++ - G_--,  Sc = G_+- + G_-+,  Ac = G_+- - G_-+
// as functions of (Gamma, phi, gamma) only; the weak value enters through
//   <O> = (lambda^2/4) [(1+|w|^2) Sd + 2 Re(w) Ad + (1-|w|^2) Sc - 2i Im(w) Ac].

namespace pvm::closedform {

struct BranchKernel {
  cplx Sd, Ad, Sc, Ac;
};

/// Kernels for the unit operator and the eleven moments.
struct KernelTable {
  BranchKernel one;
  BranchKernel a, b, a2, b2, adag_a, bdag_b, adag_b, ab, adaga_bdagb, adag2a2, bdag2b2;

  std::array<BranchKernel, ExpectationSet::size> moments() const {
    return {a, b, a2, b2, adag_a, bdag_b, adag_b, ab, adaga_bdagb, adag2a2, bdag2b2};
  }
};

inline KernelTable branch_kernels(double Gamma, double phi, double gamma) {
  using std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  const double G = Gamma;
  const double G2 = G * G;
  const double G3 = G2 * G;
  const double G4 = G2 * G2;
  const double g = gamma;
  const double g2 = g * g;
  const double q = 1.0 + g2;
  const double E = std::exp(-0.5 * G2);
  const cplx e = std::polar(1.0, phi);
  const cplx ec = std::conj(e);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const cplx zero{};

  KernelTable k{};
  k.one = {2.0, zero, 2.0 * E * (q - 0.5 * g2 * G2) / q, 2.0 * sqrt2 * i * G * g * sp * E / q};
  k.a = {sqrt2 * g * e / q, G, g * E / (sqrt2 * q) * ((2.0 - G2) * e + G2 * ec),
         G * E * (g2 * G2 - 4.0 * g2 - 2.0) / (2.0 * q)};
  k.b = {sqrt2 * i * g * e / q, zero, sqrt2 * i * g * e * E / q, -i * G * g2 * E / q};
  k.a2 = {0.5 * G2, sqrt2 * G * g * e / q, G2 * E * (2.0 + 6.0 * g2 - g2 * G2) / (4.0 * q),
          sqrt2 * G * g * E * ((G2 - 4.0) * e - G2 * ec) / (4.0 * q)};
  k.b2 = {zero, zero, zero, zero};
  k.adag_a = {(G2 * q + 2.0 * g2) / (2.0 * q), sqrt2 * G * g * cp / q,
              E * (g2 * G4 - 6.0 * g2 * G2 - 2.0 * G2 + 4.0 * g2) / (4.0 * q),
              -i * sqrt2 * G * g * (G2 - 2.0) * E * sp / (2.0 * q)};
  k.bdag_b = {g2 / q, zero, g2 * E / q, zero};
  k.adag_b = {i * g2 / q, i * sqrt2 * G * g * e / (2.0 * q), -i * g2 * (G2 - 2.0) * E / (2.0 * q),
              i * sqrt2 * G * g * e * E / (2.0 * q)};
  k.ab = {zero, i * sqrt2 * G * g * e / (2.0 * q), i * G2 * g2 * E / (2.0 * q),
          -i * sqrt2 * G * g * e * E / (2.0 * q)};
  k.adaga_bdagb = {G2 * g2 / (4.0 * q), zero, -G2 * g2 * E / (4.0 * q), zero};
  k.adag2a2 = {G2 * (G2 * q + 8.0 * g2) / (8.0 * q), sqrt2 * G3 * g * cp / (2.0 * q),
               -G2 * E * (g2 * G4 - 10.0 * g2 * G2 - 2.0 * G2 + 16.0 * g2) / (16.0 * q),
               i * sqrt2 * G3 * g * (G2 - 4.0) * E * sp / (8.0 * q)};
  k.bdag2b2 = {zero, zero, zero, zero};
  return k;
}

/// (1+|w|^2) Sd + 2 Re(w) Ad + (1-|w|^2) Sc - 2i Im(w) Ac
inline cplx weak_value_contraction(const BranchKernel& k, cplx w) {
  const double w2 = std::norm(w);
  return (1.0 + w2) * k.Sd + 2.0 * w.real() * k.Ad + (1.0 - w2) * k.Sc -
         cplx(0.0, 2.0) * w.imag() * k.Ac;
}

/// Moment under the mixture |amp+|^2 chi_+ + |amp-|^2 chi_- with
/// |amp+-|^2 = (1 +- k)/2: (Sd + k Ad) / 2.
inline cplx mixture_contraction(const BranchKernel& kern, double k) {
  return 0.5 * (kern.Sd + k * kern.Ad);
}

}  // namespace pvm::closedform
