// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pvm/weakmeas.hpp"

namespace pvm {
namespace {

using std::numbers::pi;

MeasurementParams params(double Gamma, double alpha, double delta, double phi, double gamma) {
  MeasurementParams p;
  p.Gamma = Gamma;
  p.alpha = alpha;
  p.delta = delta;
  p.phi = phi;
  p.gamma = gamma;
  return p;
}

TEST(WeakValue, PaperValues) {
  EXPECT_NEAR(weak_value(8.0 * pi / 9.0, 0.0).value.real(), 5.671, 1e-3);
  EXPECT_NEAR(weak_value(11.0 * pi / 12.0, 0.0).value.real(), 7.596, 1e-3);
  EXPECT_EQ(weak_value(0.0, 1.3).value, cplx(0.0));
}

TEST(WeakValue, BackSolvedAngle) {
  // 7.596 is rounded to four digits; the inverse lands within the rounding band.
  const double lo = 2.0 * std::atan(7.5955);
  const double hi = 2.0 * std::atan(7.5965);
  EXPECT_LT(lo, 11.0 * pi / 12.0);
  EXPECT_GT(hi, 11.0 * pi / 12.0);
}

TEST(WeakValue, PhaseAndProbability) {
  const auto wv = weak_value(pi / 2.0, pi / 2.0);
  EXPECT_NEAR(wv.value.real(), 0.0, 1e-15);
  EXPECT_NEAR(wv.value.imag(), 1.0, 1e-15);
  EXPECT_NEAR(wv.ps, 0.5, 1e-15);
  EXPECT_THROW(weak_value(pi, 0.0), std::invalid_argument);
  EXPECT_THROW(weak_value(-0.1, 0.0), std::invalid_argument);
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(params(1.0, 1.0, 0.0, 0.0, 1.0).validate());
  EXPECT_THROW(params(-1.0, 1.0, 0.0, 0.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, pi, 0.0, 0.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, 1.0, 0.0, 0.0, -1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, 1.0, 0.0, 2.0 * pi, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(NAN, 1.0, 0.0, 0.0, 1.0).validate(), std::invalid_argument);
  auto p = params(1.0, 1.0, 0.0, 0.0, 1.0);
  p.sigma = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Cutoff, DefaultPolicy) {
  EXPECT_EQ(default_cutoff(0.0), 40);
  EXPECT_EQ(default_cutoff(2.0), 49);
  EXPECT_EQ(default_cutoff(4.0), 64);
}

TEST(InitialPointer, Examples) {
  const auto g0 = initial_pointer(params(0.0, 0.0, 0.0, 0.0, 0.0), 10);
  EXPECT_EQ(g0(0, 0), cplx(1.0));
  EXPECT_DOUBLE_EQ(g0.norm(), 1.0);

  const auto g1 = initial_pointer(params(0.0, 0.0, 0.0, 0.0, 1.0), 10);
  EXPECT_NEAR(std::abs(g1(0, 0) - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g1(1, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g1(0, 1) - cplx(0.0, 0.5)), 0.0, 1e-15);
  EXPECT_THROW(initial_pointer(params(0.0, 0.0, 0.0, 0.0, 1.0), 1), std::invalid_argument);
}

TEST(InitialPointer, BModeOccupation) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double gamma = 2.0 * u(rng);
    const auto s = initial_pointer(params(0.0, 0.0, 0.0, 2.0 * pi * u(rng) * 0.999, gamma), 8);
    const cplx nb = fock::inner(s, fock::apply_word(s, {fock::Ladder::b_dag, fock::Ladder::b}));
    EXPECT_NEAR(nb.real(), gamma * gamma / (2.0 * (1.0 + gamma * gamma)), 1e-14);
  }
}

TEST(Evolve, ZeroCouplingLeavesBranchesEqual) {
  const auto p = params(0.0, 1.0, 0.3, 0.5, 1.2);
  const auto psi = initial_pointer(p, 40);
  const auto j = evolve_joint(psi, p);
  EXPECT_EQ(fock::max_abs_difference(j.branch_plus, psi), 0.0);
  EXPECT_EQ(fock::max_abs_difference(j.branch_minus, psi), 0.0);
  EXPECT_NEAR(j.norm(), 1.0, 1e-14);
}

TEST(Evolve, GaussianPointerBranchesAreCoherent) {
  const auto p = params(1.0, 0.7, 0.0, 0.0, 0.0);
  const auto j = evolve_joint(initial_pointer(p, 40), p);
  const auto plus = fock::displace_a(fock::vacuum(40, 2, 1.0), 0.5).state;
  const auto minus = fock::displace_a(fock::vacuum(40, 2, 1.0), -0.5).state;
  EXPECT_LT(fock::distance(j.branch_plus, plus), 1e-14);
  EXPECT_LT(fock::distance(j.branch_minus, minus), 1e-14);
  const cplx a = fock::inner(j.branch_plus, fock::apply_ladder(j.branch_plus, fock::Ladder::a));
  EXPECT_NEAR(a.real(), 0.5, 1e-12);
}

TEST(Postselect, IdentityAtZeroCoupling) {
  const auto p = params(0.0, 2.0, pi / 2.0, 1.0, 0.8);
  const auto psi = initial_pointer(p, 40);
  const auto post = run_measurement(p, 40);
  EXPECT_LT(fock::distance(post.state, psi), 1e-14);
  EXPECT_NEAR(post.lambda, 1.0, 1e-14);
  EXPECT_NEAR(post.success_probability, std::pow(std::cos(1.0), 2), 1e-15);
}

TEST(Postselect, SmallCouplingIsContinuous) {
  const auto p = params(1e-6, 8.0 * pi / 9.0, 0.0, pi / 2.0, 1.0);
  const auto post = run_measurement(p, 40);
  EXPECT_LT(fock::distance(post.state, initial_pointer(p, 40)), 1e-5);
}

TEST(Postselect, ZeroWeakValueGivesSymmetricCat) {
  const auto p = params(1.2, 0.0, 0.0, 0.0, 0.0);
  const auto post = run_measurement(p, 40);
  const auto vac = fock::vacuum(40, 2, 1.0);
  const auto cat = fock::displace_a(vac, 0.6).state + fock::displace_a(vac, -0.6).state;
  const auto expect = cat.normalized();
  EXPECT_LT(fock::distance(post.state, expect), 1e-13);
  // Odd Fock components vanish for the even cat.
  for (int n = 1; n < 40; n += 2) EXPECT_LT(std::abs(post.state(n, 0)), 1e-15);
}

TEST(Postselect, ProbabilityTimesLambdaSquared) {
  for (double G : {0.2, 1.0, 2.0}) {
    const auto p = params(G, 2.5, pi / 2.0, pi / 2.0, 0.7);
    const auto post = run_measurement(p, default_cutoff(G));
    EXPECT_NEAR(post.success_probability * post.lambda * post.lambda, post.ideal_probability,
                1e-13);
    EXPECT_EQ(post.ideal_probability, weak_value(p.alpha, p.delta).ps);
  }
}

TEST(Postselect, MethodsAgree) {
  const auto p = params(1.5, 2.0, 0.0, pi / 2.0, 1.0);
  const auto a = run_measurement(p, 49, fock::DisplacementMethod::closed_form);
  const auto b = run_measurement(p, 49, fock::DisplacementMethod::series);
  EXPECT_LT(fock::distance(a.state, b.state), 1e-10);
  EXPECT_NEAR(a.lambda, b.lambda, 1e-10);
}

TEST(Nonpostselected, MixtureIsNormalized) {
  const auto p = params(0.8, 1.1, 0.4, 1.0, 1.3);
  const auto j = evolve_joint(initial_pointer(p, 40), p);
  const auto m = nonpostselected_moments(j);
  EXPECT_NEAR(j.norm(), 1.0, 1e-14);
  EXPECT_NEAR(m.bdag_b.real(), 1.69 / (2.0 * 2.69), 1e-14);
}

}  // namespace
}  // namespace pvm
