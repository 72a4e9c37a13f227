// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>

#include "pvm/errors.hpp"
#include "pvm/expectation.hpp"
#include "pvm/field.hpp"
#include "pvm/fock/coordinate.hpp"
#include "pvm/fock/displacement.hpp"
#include "pvm/fock/state.hpp"
#include "pvm/parallel.hpp"
#include "pvm/weakmeas.hpp"

// State-vector ground truth. Nothing in this header uses an analytic moment
// formula: every number comes from ladder operators, displacement matrices
// and inner products on truncated Fock vectors.

namespace pvm::oracle {

inline constexpr double kTopOccupationLimit = 1e-8;

/// True when the top a-mode level carries enough probability that truncation
/// could bias the result.
inline bool truncation_suspect(const fock::TwoModeState& s) {
  return s.top_level_occupation() > kTopOccupationLimit * s.squared_norm();
}

inline ExpectationSet oracle_expectations(const fock::TwoModeState& s) {
  return fock::state_moments(s);
}

/// rho_a = Tr_b |s><s|.
inline Eigen::MatrixXcd reduced_density_a(const fock::TwoModeState& s) {
  return s.coeffs() * s.coeffs().adjoint();
}

/// Same amplitudes in a basis with extra empty levels, so that one creation
/// operator never falls off the top.
inline fock::TwoModeState padded(const fock::TwoModeState& s, int extra_a, int extra_b) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(s.na() + extra_a, s.nb() + extra_b);
  c.topLeftCorner(s.na(), s.nb()) = s.coeffs();
  return {std::move(c), s.sigma()};
}

/// (2/pi) Tr[D(2 alpha) P rho] with P the a-mode parity. Levels whose
/// population is below `floor` are skipped.
inline double displaced_parity(const Eigen::MatrixXcd& rho, cplx alpha, double floor = 1e-32) {
  int K = static_cast<int>(rho.rows());
  while (K > 1 && std::abs(rho(K - 1, K - 1)) < floor) --K;
  cplx acc = 0.0;
  fock::for_each_displacement_element(2.0 * alpha, K, [&](int k, int n, cplx v) {
    acc += (n % 2 ? -v : v) * rho(n, k);
  });
  return 2.0 / std::numbers::pi * acc.real();
}

/// Reduced a-mode Wigner function on an (x, p) grid, alpha = x + i p.
inline RealField oracle_wigner(const fock::TwoModeState& s, const GridSpec& grid) {
  grid.validate();
  const Eigen::MatrixXcd rho = reduced_density_a(s);
  Eigen::MatrixXd W(grid.nx, grid.ny);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < grid.ny; ++j) W(i, j) = displaced_parity(rho, {grid.x(i), grid.y(j)});
  });
  return {grid, std::move(W), FieldKind::wigner};
}

/// |Psi(x, y)|^2 of the state, rescaled to unit grid integral.
inline RealField oracle_intensity(const fock::TwoModeState& s, const GridSpec& grid) {
  return normalized_to_unit_integral(fock::coordinate_density(s, grid));
}

/// Var(F_1) - 1/4 and Var(F_2) - 1/4 from the quadrature operators applied
/// to the state vector.
inline std::pair<double, double> oracle_squeezing(const fock::TwoModeState& state) {
  using L = fock::Ladder;
  const fock::TwoModeState s = padded(state, 1, 1);
  const auto a = fock::apply_ladder(s, L::a);
  const auto ad = fock::apply_ladder(s, L::a_dag);
  const auto b = fock::apply_ladder(s, L::b);
  const auto bd = fock::apply_ladder(s, L::b_dag);
  const double scale = 1.0 / (2.0 * std::numbers::sqrt2);
  const auto f1 = scale * (a + b + ad + bd);
  const auto f2 = cplx(0.0, -scale) * (a + b - ad - bd);
  auto variance = [&](const fock::TwoModeState& fs) {
    const double mean = fock::inner(s, fs).real();
    return fs.squared_norm() - mean * mean;
  };
  return {variance(f1) - 0.25, variance(f2) - 0.25};
}

/// <X> and <X^2> for X = sigma (a + a†).
struct PositionStats {
  double mean = 0.0;
  double second = 0.0;
};

inline PositionStats oracle_position(const fock::TwoModeState& state) {
  using L = fock::Ladder;
  const fock::TwoModeState s = padded(state, 1, 0);
  const auto xs = s.sigma() * (fock::apply_ladder(s, L::a) + fock::apply_ladder(s, L::a_dag));
  return {fock::inner(s, xs).real(), xs.squared_norm()};
}

/// A scalar that may be undefined at a parameter point.
struct MaybeValue {
  std::optional<double> value;
  std::string reason;  ///< why the value is undefined; empty otherwise

  bool defined() const { return value.has_value(); }
};

template <class F>
MaybeValue guarded(F&& f) {
  try {
    return {f(), {}};
  } catch (const UndefinedCorrelation& e) {
    return {std::nullopt, e.what()};
  } catch (const DegenerateShift& e) {
    return {std::nullopt, e.what()};
  } catch (const VarianceCollapse& e) {
    return {std::nullopt, e.what()};
  }
}

/// SNR ratio from state vectors, X = sigma (a + a†).
inline double oracle_chi(const fock::TwoModeState& initial, const JointState& joint,
                         const fock::TwoModeState& final_state, double ps) {
  const double sigma = initial.sigma();
  const PositionStats i = oracle_position(initial);
  const PositionStats f = oracle_position(final_state);
  const PositionStats bp = oracle_position(joint.branch_plus);
  const PositionStats bm = oracle_position(joint.branch_minus);
  const double wp = std::norm(joint.amp_plus);
  const double wm = std::norm(joint.amp_minus);
  const double phi_mean = wp * bp.mean + wm * bm.mean;
  const double phi_second = wp * bp.second + wm * bm.second;
  const double dx = f.mean - i.mean;
  const double dxp = phi_mean - i.mean;
  if (std::abs(dxp) / sigma < 1e-14) throw DegenerateShift("chi: non-postselected shift vanishes");
  const double var = f.second - f.mean * f.mean;
  const double varp = phi_second - phi_mean * phi_mean;
  if (!(var > 0.0) || !(varp > 0.0)) throw VarianceCollapse("chi: position variance collapsed");
  return std::sqrt(ps) * std::abs(dx) / std::sqrt(var) / (std::abs(dxp) / std::sqrt(varp));
}

inline double g2_from(const ExpectationSet& m) {
  const double na = m.adag_a.real();
  const double nb = m.bdag_b.real();
  if (!(na > 1e-12) || !(nb > 1e-12)) throw UndefinedCorrelation("g2: a mean photon number is zero");
  return m.adaga_bdagb.real() / (na * nb);
}

struct OracleOptions {
  int na = 0;  ///< 0 selects default_cutoff(Gamma)
  fock::DisplacementMethod method = fock::DisplacementMethod::closed_form;
  std::optional<GridSpec> intensity_grid;
  std::optional<GridSpec> wigner_grid;
};

struct OracleRecord {
  MeasurementParams params;
  int na = 0;
  double lambda = 0.0;
  double success_probability = 0.0;
  cplx I1, I2;
  ExpectationSet moments{};
  ExpectationSet nonpostselected{};
  double Q1 = 0.0, Q2 = 0.0;
  MaybeValue g2;
  double fidelity = 0.0;
  MaybeValue chi;  ///< operator-form position moments
  double norm_drift = 0.0;
  bool truncation_warning = false;
  std::optional<RealField> intensity;
  std::optional<RealField> wigner;
};

inline OracleRecord oracle_quantities(const MeasurementParams& p, const OracleOptions& opt = {}) {
  p.validate();
  OracleRecord r;
  r.params = p;
  r.na = opt.na > 0 ? opt.na : default_cutoff(p.Gamma);
  const fock::TwoModeState psi_i = initial_pointer(p, r.na);
  const JointState joint = evolve_joint(psi_i, p, opt.method);
  const Postselected post = postselect(joint, p);
  const fock::TwoModeState& psi = post.state;

  r.lambda = post.lambda;
  r.success_probability = post.success_probability;
  r.I1 = fock::inner(psi_i, fock::displace_a(psi_i, p.Gamma, opt.method).state);
  r.I2 = fock::inner(psi_i, fock::displace_a(psi_i, -p.Gamma, opt.method).state);
  r.moments = oracle_expectations(psi);
  r.nonpostselected = nonpostselected_moments(joint);
  std::tie(r.Q1, r.Q2) = oracle_squeezing(psi);
  r.g2 = guarded([&] { return g2_from(r.moments); });
  r.fidelity = std::norm(fock::inner(psi_i, psi));
  r.chi = guarded([&] { return oracle_chi(psi_i, joint, psi, post.ideal_probability); });
  r.norm_drift = joint.norm_drift;
  r.truncation_warning = truncation_suspect(psi) || joint.norm_drift > fock::Displaced::kDriftTolerance;
  if (opt.intensity_grid) r.intensity = oracle_intensity(psi, *opt.intensity_grid);
  if (opt.wigner_grid) r.wigner = oracle_wigner(psi, *opt.wigner_grid);
  return r;
}

}  // namespace pvm::oracle
