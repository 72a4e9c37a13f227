// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pvm/closedform/closedform.hpp"
#include "pvm/oracle/oracle.hpp"
#include "pvm/oracle/validation.hpp"
#include "quadrature_wigner.hpp"

namespace pvm::oracle {
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

TEST(Expectations, Vacuum) {
  const auto m = oracle_expectations(fock::vacuum(10, 2, 1.0)).values();
  for (const cplx v : m) EXPECT_EQ(v, cplx(0.0));
}

TEST(Expectations, CoherentState) {
  const auto s = fock::displace_a(fock::vacuum(40, 2, 1.0), 0.5).state;
  const auto m = oracle_expectations(s);
  EXPECT_NEAR(std::abs(m.a - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.adag_a - 0.25), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.a2 - 0.25), 0.0, 1e-12);
}

TEST(Expectations, InitialPointerHopping) {
  const auto m = oracle_expectations(initial_pointer(params(0.0, 0.0, 0.0, 0.0, 1.0), 10));
  EXPECT_NEAR(std::abs(m.adag_b - cplx(0.0, 0.25)), 0.0, 1e-15);
}

TEST(Wigner, VacuumAndFockOne) {
  const GridSpec g = GridSpec::square(3.0, 31);
  const auto W = oracle_wigner(fock::vacuum(20, 2, 1.0), g);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
      EXPECT_NEAR(W.values(i, j), 2.0 / pi * std::exp(-2.0 * r2), 1e-14);
    }
  }
  const auto W1 = oracle_wigner(fock::basis_state(20, 2, 1.0, 1, 0), g);
  EXPECT_NEAR(W1.values(15, 15), -2.0 / pi, 1e-14);
}

TEST(Wigner, ReducedTraceIsOne) {
  const auto s = run_measurement(params(1.7, 2.5, pi / 2.0, pi / 2.0, 1.5), 40).state;
  EXPECT_NEAR(reduced_density_a(s).trace().real(), 1.0, 1e-12);
}

TEST(Wigner, NormalizationAndMarginal) {
  const auto s = run_measurement(params(1.0, 8.0 * pi / 9.0, 0.0, 0.0, 1.0), 40).state;
  const GridSpec g = GridSpec::square(6.0, 241);
  const auto W = oracle_wigner(s, g);
  EXPECT_NEAR(W.integral(), 1.0, 1e-6);
  const Eigen::MatrixXcd rho = reduced_density_a(s);
  for (int i = 0; i < g.nx; i += 4) {
    double marginal = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      const double wt = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      marginal += wt * g.dy() * W.values(i, j);
    }
    EXPECT_NEAR(marginal, testing::wigner_marginal_reference(rho, g.x(i)), 1e-6);
  }
}

TEST(Wigner, DisplacedParityMatchesCharacteristicQuadrature) {
  const GridSpec spot = GridSpec::square(6.0, 61);
  for (double G : {0.0, 0.3}) {
    const auto s = run_measurement(params(G, 8.0 * pi / 9.0, 0.0, 0.0, 1.0), 40).state;
    const auto Wq = testing::quadrature_wigner(reduced_density_a(s), spot);
    EXPECT_LT(max_abs_difference(oracle_wigner(s, spot), Wq), 1e-6) << "Gamma " << G;
  }
}

TEST(Wigner, QuadratureNeedsWiderBoxAtStrongCoupling) {
  const GridSpec spot = GridSpec::square(6.0, 61);
  for (double G : {1.0, 2.0}) {
    const auto s = run_measurement(params(G, 8.0 * pi / 9.0, 0.0, 0.0, 1.0), default_cutoff(G)).state;
    const auto Wq = testing::quadrature_wigner(reduced_density_a(s), spot, {8.0, 321});
    EXPECT_LT(max_abs_difference(oracle_wigner(s, spot), Wq), 1e-6) << "Gamma " << G;
  }
}

TEST(Quantities, IdentityRegime) {
  const auto p = params(0.0, 2.0, pi / 2.0, 1.0, 1.2);
  const auto r = oracle_quantities(p);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-14);
  EXPECT_NEAR(r.lambda, 1.0, 1e-14);
  const auto init = closedform::squeezing_from_moments(closedform::initial_expectations(p));
  EXPECT_NEAR(r.Q1, init.Q1, 1e-14);
  EXPECT_NEAR(r.Q2, init.Q2, 1e-14);
  EXPECT_FALSE(r.chi.defined());
  EXPECT_FALSE(r.truncation_warning);
}

TEST(Quantities, GaussianPointerChiIsFinite) {
  for (double G : {0.2, 1.0, 2.0}) {
    const auto r = oracle_quantities(params(G, 0.5, 0.0, 0.0, 0.0));
    ASSERT_TRUE(r.chi.defined()) << r.chi.reason;
    EXPECT_TRUE(std::isfinite(*r.chi.value));
    EXPECT_FALSE(r.g2.defined());
  }
}

TEST(Quantities, CutoffDoublingIsStable) {
  for (double G : {0.5, 1.0, 2.0}) {
    const auto p = params(G, 8.0 * pi / 9.0, pi / 2.0, pi / 2.0, 2.0);
    OracleOptions base, twice;
    base.na = default_cutoff(G);
    twice.na = 2 * base.na;
    const auto a = oracle_quantities(p, base);
    const auto b = oracle_quantities(p, twice);
    EXPECT_LT(std::abs(a.lambda - b.lambda), 1e-10);
    EXPECT_LT(std::abs(a.Q1 - b.Q1), 1e-10);
    EXPECT_LT(std::abs(a.Q2 - b.Q2), 1e-10);
    EXPECT_LT(std::abs(a.fidelity - b.fidelity), 1e-10);
    EXPECT_LT(std::abs(*a.g2.value - *b.g2.value), 1e-10);
    const auto ma = a.moments.values();
    const auto mb = b.moments.values();
    for (std::size_t i = 0; i < ma.size(); ++i) EXPECT_LT(std::abs(ma[i] - mb[i]), 1e-10);
  }
}

TEST(Quantities, FieldsOnRequest) {
  OracleOptions opt;
  opt.intensity_grid = GridSpec::square(5.0, 41);
  opt.wigner_grid = GridSpec::square(4.0, 21);
  const auto r = oracle_quantities(params(0.5, 1.0, 0.0, 0.0, 1.0), opt);
  ASSERT_TRUE(r.intensity && r.wigner);
  EXPECT_NEAR(r.intensity->integral(), 1.0, 1e-12);
  EXPECT_EQ(r.wigner->kind, FieldKind::wigner);
}

TEST(Quantities, TruncationWarning) {
  OracleOptions opt;
  opt.na = 6;
  EXPECT_TRUE(oracle_quantities(params(2.0, 1.0, 0.0, 0.0, 1.0), opt).truncation_warning);
}

TEST(Compare, IdentityPointPassesEverything) {
  const auto report = compare({params(0.0, pi / 3.0, 0.0, 0.0, 1.0)}, 1e-10, 1e-8);
  EXPECT_TRUE(report.passed());
  for (const auto& e : report.entries) {
    if (e.closed && e.oracle) {
      EXPECT_TRUE(e.pass) << e.quantity;
    }
  }
}

TEST(Compare, EmptySetIsRejected) {
  EXPECT_THROW(compare({}, 1e-10, 1e-8), std::invalid_argument);
}

TEST(Compare, ZeroToleranceFails) {
  CompareOptions opt;
  opt.cutoff_check_points = 0;
  opt.field_grid.reset();
  const auto report = compare(validation_set(4), 0.0, 0.0, opt);
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.unexpected_failures().empty());
}

TEST(Compare, SummaryCountsMatchEntries) {
  CompareOptions opt;
  opt.cutoff_check_points = 2;
  const auto report = compare(validation_set(8), 1e-10, 1e-8, opt);
  std::map<std::string, std::size_t> counts;
  for (const auto& e : report.entries) ++counts[e.quantity];
  for (const auto& [name, s] : report.summary) {
    EXPECT_EQ(s.pass + s.fail + s.undefined, counts[name]) << name;
  }
  for (const auto& e : report.entries) {
    if (e.closed && e.oracle) {
      EXPECT_EQ(e.pass, report.tolerances.accepts(e.abs_delta, e.rel_delta)) << e.quantity;
    }
  }
  ASSERT_TRUE(report.cutoff_check);
  EXPECT_TRUE(report.cutoff_check->pass);
}

TEST(Compare, EntriesAreDeterministic) {
  CompareOptions opt;
  opt.cutoff_check_points = 0;
  opt.field_grid.reset();
  const auto a = to_json(compare(validation_set(6), 1e-10, 1e-8, opt));
  const auto b = to_json(compare(validation_set(6), 1e-10, 1e-8, opt));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_TRUE(a.contains("tolerances"));
  EXPECT_TRUE(a.contains("entries"));
  EXPECT_TRUE(a.contains("summary"));
}

TEST(Compare, PrintedTranscriptionIsAudited) {
  CompareOptions opt;
  opt.cutoff_check_points = 0;
  opt.field_grid.reset();
  const auto report = compare(validation_set(16), 1e-10, 1e-8, opt);
  ASSERT_TRUE(report.transcription_audit.contains("adag2a2"));
  EXPECT_GT(report.transcription_audit.at("adag2a2").max_abs_residual, 1e-3);
  EXPECT_LT(report.transcription_audit.at("I1").max_abs_residual, 1e-12);
}

TEST(ValidationSet, Shape) {
  const auto pts = validation_set(200);
  ASSERT_EQ(pts.size(), 200u);
  for (const auto& p : pts) {
    EXPECT_NO_THROW(p.validate());
    EXPECT_LE(p.Gamma, 2.0);
    EXPECT_LE(p.alpha, 0.95 * pi);
    EXPECT_LE(p.gamma, 2.0);
    EXPECT_TRUE(p.delta == 0.0 || p.delta == pi / 2.0);
    EXPECT_TRUE(p.phi == 0.0 || p.phi == pi / 2.0);
  }
  EXPECT_EQ(pts.front().Gamma, 1.0);
}

}  // namespace
}  // namespace pvm::oracle
