// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/random/sobol.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvm/closedform/closedform.hpp"
#include "pvm/oracle/oracle.hpp"
#include "pvm/parallel.hpp"

namespace pvm::oracle {

/// Sobol points over (Gamma in [0,2], alpha in [0, 0.95 pi], gamma in [0,2]);
/// (delta, phi) cycle through {0, pi/2}^2 with the point index.
inline std::vector<MeasurementParams> validation_set(std::size_t count = 200) {
  boost::random::sobol engine(3);
  boost::random::uniform_01<double> u01;
  std::vector<MeasurementParams> out;
  out.reserve(count);
  const double half_pi = std::numbers::pi / 2.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = u01(engine);
    const double v = u01(engine);
    const double w = u01(engine);
    MeasurementParams p;
    p.Gamma = 2.0 * u;
    p.alpha = 0.95 * std::numbers::pi * v;
    p.gamma = 2.0 * w;
    p.delta = (i % 2) ? half_pi : 0.0;
    p.phi = ((i / 2) % 2) ? half_pi : 0.0;
    out.push_back(p);
  }
  return out;
}

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-8;

  bool accepts(double abs_delta, double rel_delta) const {
    return abs_delta <= abs || rel_delta <= rel;
  }
};

/// One closed-form vs oracle comparison. Field entries carry the field maxima
/// as values and the pointwise max |closed - oracle| as abs_delta.
struct ValidationEntry {
  std::string quantity;
  std::size_t point = 0;
  MeasurementParams params;
  std::optional<cplx> closed;
  std::optional<cplx> oracle;
  bool complex_valued = false;
  double abs_delta = 0.0;
  double rel_delta = 0.0;
  bool pass = false;
  std::string note;
};

struct QuantitySummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t undefined = 0;
  double max_abs_delta = 0.0;
  double max_rel_delta = 0.0;
  bool whitelisted = false;
};

/// Residual of the article's formulas against the oracle, per quantity.
struct TranscriptionResidual {
  double max_abs_residual = 0.0;
  std::size_t worst_point = 0;
  std::size_t failing_points = 0;
  std::size_t evaluated_points = 0;
  std::size_t defined_in_one_engine_only = 0;
};

struct CutoffCheck {
  std::vector<std::size_t> points;
  int base_cutoff = 0;  ///< 0 means per-point default
  double max_change = 0.0;
  std::string worst_quantity;
  double tolerance = 1e-9;
  bool pass = true;
};

struct ValidationReport {
  Tolerances tolerances;
  std::vector<ValidationEntry> entries;
  std::map<std::string, QuantitySummary> summary;
  std::set<std::string> whitelist;
  std::map<std::string, TranscriptionResidual> transcription_audit;
  std::optional<CutoffCheck> cutoff_check;

  /// Quantities with failures that are not whitelisted.
  std::vector<std::string> unexpected_failures() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : summary) {
      if (s.fail > 0 && !whitelist.contains(name)) out.push_back(name);
    }
    return out;
  }

  bool passed() const {
    return unexpected_failures().empty() && (!cutoff_check || cutoff_check->pass);
  }
};

struct CompareOptions {
  closedform::Formulas formulas{};
  int cutoff = 0;                          ///< 0 selects default_cutoff per point
  std::optional<GridSpec> field_grid = GridSpec::square(6.0, 61);
  std::set<std::string> whitelist = {"chi"};
  bool transcription_audit = true;
  std::size_t cutoff_check_points = 8;     ///< 0 disables the doubling check
};

namespace detail {

inline double relative(double abs_delta, double scale) {
  if (abs_delta == 0.0) return 0.0;
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return abs_delta / scale;
}

/// A closed-form value that may be undefined, with the reason.
struct Maybe {
  std::optional<cplx> value;
  std::string reason;
};

template <class F>
Maybe attempt(F&& f) {
  try {
    return {cplx(f()), {}};
  } catch (const UndefinedCorrelation& e) {
    return {std::nullopt, e.what()};
  } catch (const DegenerateShift& e) {
    return {std::nullopt, e.what()};
  } catch (const VarianceCollapse& e) {
    return {std::nullopt, e.what()};
  }
}

inline Maybe from(const MaybeValue& m) {
  if (m.value) return {cplx(*m.value), {}};
  return {std::nullopt, m.reason};
}

inline ValidationEntry make_entry(std::string quantity, std::size_t point,
                                  const MeasurementParams& p, const Maybe& closed,
                                  const Maybe& oracle, bool complex_valued, const Tolerances& tol) {
  ValidationEntry e;
  e.quantity = std::move(quantity);
  e.point = point;
  e.params = p;
  e.closed = closed.value;
  e.oracle = oracle.value;
  e.complex_valued = complex_valued;
  if (!closed.value && !oracle.value) {
    e.pass = true;
    e.note = "undefined in both engines: " + oracle.reason;
    return e;
  }
  if (!closed.value || !oracle.value) {
    e.abs_delta = e.rel_delta = std::numeric_limits<double>::infinity();
    e.pass = false;
    e.note = "defined in one engine only: " + (closed.value ? oracle.reason : closed.reason);
    return e;
  }
  e.abs_delta = std::abs(*closed.value - *oracle.value);
  e.rel_delta = relative(e.abs_delta, std::abs(*oracle.value));
  e.pass = tol.accepts(e.abs_delta, e.rel_delta);
  return e;
}

inline ValidationEntry make_field_entry(std::string quantity, std::size_t point,
                                        const MeasurementParams& p, const RealField& closed,
                                        const RealField& oracle, const Tolerances& tol) {
  ValidationEntry e;
  e.quantity = std::move(quantity);
  e.point = point;
  e.params = p;
  e.closed = cplx(closed.values.maxCoeff());
  e.oracle = cplx(oracle.values.maxCoeff());
  e.abs_delta = max_abs_difference(closed, oracle);
  e.rel_delta = relative(e.abs_delta, oracle.values.cwiseAbs().maxCoeff());
  e.pass = tol.accepts(e.abs_delta, e.rel_delta);
  e.note = "pointwise max deviation; values are field maxima";
  return e;
}

/// Closed-form scalars in the order that the entries are emitted.
struct ClosedScalars {
  std::vector<std::pair<std::string, Maybe>> values;
  std::vector<bool> complex_valued;

  void add(std::string name, Maybe v, bool is_complex) {
    values.emplace_back(std::move(name), std::move(v));
    complex_valued.push_back(is_complex);
  }
};

inline ClosedScalars closed_scalars(const MeasurementParams& p, closedform::Formulas f,
                                    bool with_operator_chi) {
  using namespace closedform;
  const Transcription t = f.transcription;
  ClosedScalars out;
  out.add("lambda", attempt([&] { return lambda_norm(p, t); }), false);
  out.add("success_probability", attempt([&] { return success_probability(p, t); }), false);
  const HelperTerms h = closedform::helper_terms(p);
  out.add("I1", {h.I1, {}}, true);
  out.add("I2", {h.I2, {}}, true);
  const ExpectationSet m = expectations(p, t);
  m.for_each([&](std::string_view name, cplx v) { out.add(std::string(name), {v, {}}, true); });
  const Squeezing q = squeezing(p, t);
  out.add("Q1", {q.Q1, {}}, false);
  out.add("Q2", {q.Q2, {}}, false);
  out.add("g2", attempt([&] { return g2_cross(p, t); }), false);
  out.add("fidelity", attempt([&] { return closedform::fidelity(p, t); }), false);
  out.add("chi", attempt([&] { return snr_ratio(p, 1, f).chi; }), false);
  if (with_operator_chi) {
    out.add("chi_operator_x2", attempt([&] {
              return snr_ratio(p, 1, {t, PositionConvention::operator_form}).chi;
            }),
            false);
  }
  const auto phi = nonpostselected_position_moments(p, t);
  out.add("phi_a", {phi.a, {}}, true);
  out.add("phi_adag_a", {phi.adag_a, {}}, true);
  out.add("phi_a2", {phi.a2, {}}, true);
  return out;
}

inline std::vector<Maybe> oracle_scalars(const OracleRecord& r, bool with_operator_chi) {
  std::vector<Maybe> out;
  out.push_back({cplx(r.lambda), {}});
  out.push_back({cplx(r.success_probability), {}});
  out.push_back({r.I1, {}});
  out.push_back({r.I2, {}});
  for (cplx v : r.moments.values()) out.push_back({v, {}});
  out.push_back({cplx(r.Q1), {}});
  out.push_back({cplx(r.Q2), {}});
  out.push_back(from(r.g2));
  out.push_back({cplx(r.fidelity), {}});
  out.push_back(from(r.chi));
  if (with_operator_chi) out.push_back(from(r.chi));
  out.push_back({r.nonpostselected.a, {}});
  out.push_back({r.nonpostselected.adag_a, {}});
  out.push_back({r.nonpostselected.a2, {}});
  return out;
}

struct PointResult {
  std::vector<ValidationEntry> entries;
  std::vector<ValidationEntry> printed_entries;
};

inline PointResult evaluate_point(std::size_t index, const MeasurementParams& p,
                                  const Tolerances& tol, const CompareOptions& opt) {
  OracleOptions oo;
  oo.na = opt.cutoff;
  oo.intensity_grid = opt.field_grid;
  oo.wigner_grid = opt.field_grid;
  const OracleRecord rec = oracle_quantities(p, oo);
  const auto ov = oracle_scalars(rec, true);

  PointResult out;
  auto emit = [&](closedform::Formulas f, std::vector<ValidationEntry>& sink) {
    const ClosedScalars cs = closed_scalars(p, f, true);
    for (std::size_t k = 0; k < cs.values.size(); ++k) {
      sink.push_back(make_entry(cs.values[k].first, index, p, cs.values[k].second, ov[k],
                                cs.complex_valued[k], tol));
    }
    if (opt.field_grid) {
      const auto& g = *opt.field_grid;
      sink.push_back(make_field_entry("intensity_field", index, p,
                                      closedform::intensity_field(p, g, f.transcription),
                                      *rec.intensity, tol));
      sink.push_back(make_field_entry("wigner_field", index, p,
                                      closedform::wigner_field(p, g, f.transcription),
                                      *rec.wigner, tol));
    }
  };
  emit(opt.formulas, out.entries);
  if (opt.transcription_audit) {
    emit({closedform::Transcription::printed, closedform::PositionConvention::printed},
         out.printed_entries);
  }
  return out;
}

/// Largest change of any oracle scalar when the cutoff is doubled.
inline CutoffCheck run_cutoff_check(const std::vector<MeasurementParams>& points,
                                    const CompareOptions& opt) {
  CutoffCheck c;
  c.base_cutoff = opt.cutoff;
  if (points.empty() || opt.cutoff_check_points == 0) return c;
  // Largest couplings first: they spread the displaced states the furthest.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return points[x].Gamma > points[y].Gamma;
  });
  order.resize(std::min(order.size(), opt.cutoff_check_points));
  std::sort(order.begin(), order.end());
  c.points = order;
  static const char* names[] = {"lambda", "success_probability", "I1",       "I2",
                                "a",      "b",                   "a2",       "b2",
                                "adag_a", "bdag_b",              "adag_b",   "ab",
                                "adaga_bdagb", "adag2a2",        "bdag2b2",  "Q1",
                                "Q2",     "g2",                  "fidelity", "chi",
                                "chi_operator_x2", "phi_a",               "phi_adag_a", "phi_a2"};
  for (std::size_t idx : order) {
    const MeasurementParams& p = points[idx];
    const int base = opt.cutoff > 0 ? opt.cutoff : default_cutoff(p.Gamma);
    OracleOptions lo, hi;
    lo.na = base;
    hi.na = 2 * base;
    const auto a = oracle_scalars(oracle_quantities(p, lo), true);
    const auto b = oracle_scalars(oracle_quantities(p, hi), true);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].value || !b[k].value) {
        if (a[k].value.has_value() != b[k].value.has_value()) {
          c.max_change = std::numeric_limits<double>::infinity();
          c.worst_quantity = names[k];
        }
        continue;
      }
      const double d = std::abs(*a[k].value - *b[k].value);
      if (d > c.max_change) {
        c.max_change = d;
        c.worst_quantity = names[k];
      }
    }
  }
  c.pass = c.max_change <= c.tolerance;
  return c;
}

}  // namespace detail

/// Evaluates closed forms and the oracle at every point. Failures are data.
inline ValidationReport compare(const std::vector<MeasurementParams>& points, double abs_tol,
                                double rel_tol, const CompareOptions& opt = {}) {
  if (points.empty()) throw std::invalid_argument("compare: empty parameter set");
  for (const auto& p : points) p.validate();
  ValidationReport report;
  report.tolerances = {abs_tol, rel_tol};
  report.whitelist = opt.whitelist;
  if (opt.cutoff_check_points > 0) report.cutoff_check = detail::run_cutoff_check(points, opt);

  std::vector<detail::PointResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = detail::evaluate_point(i, points[i], report.tolerances, opt);
  });

  for (auto& r : results) {
    for (auto& e : r.entries) {
      auto& s = report.summary[e.quantity];
      s.whitelisted = report.whitelist.contains(e.quantity);
      if (!e.closed && !e.oracle) {
        ++s.undefined;
      } else if (e.pass) {
        ++s.pass;
      } else {
        ++s.fail;
      }
      if (std::isfinite(e.abs_delta)) s.max_abs_delta = std::max(s.max_abs_delta, e.abs_delta);
      if (std::isfinite(e.rel_delta)) s.max_rel_delta = std::max(s.max_rel_delta, e.rel_delta);
      report.entries.push_back(std::move(e));
    }
    for (const auto& e : r.printed_entries) {
      auto& t = report.transcription_audit[e.quantity];
      if (!e.closed && !e.oracle) continue;
      ++t.evaluated_points;
      if (!e.pass) ++t.failing_points;
      if (!std::isfinite(e.abs_delta)) {
        ++t.defined_in_one_engine_only;
        continue;
      }
      if (e.abs_delta > t.max_abs_residual) {
        t.max_abs_residual = e.abs_delta;
        t.worst_point = e.point;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const MeasurementParams& p) {
  return {{"Gamma", p.Gamma}, {"alpha", p.alpha}, {"delta", p.delta},
          {"phi", p.phi},     {"gamma", p.gamma}, {"sigma", p.sigma}};
}

namespace detail {

inline nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline nlohmann::json value_json(const std::optional<cplx>& v, bool complex_valued) {
  if (!v) return nullptr;
  if (complex_valued) return nlohmann::json::array({v->real(), v->imag()});
  return v->real();
}

}  // namespace detail

inline nlohmann::json to_json(const ValidationReport& r) {
  using nlohmann::json;
  json j;
  j["tolerances"] = {{"abs", r.tolerances.abs}, {"rel", r.tolerances.rel}};
  j["whitelist"] = json::array();
  for (const auto& w : r.whitelist) j["whitelist"].push_back(w);
  j["passed"] = r.passed();
  j["unexpected_failures"] = r.unexpected_failures();
  json summary = json::object();
  for (const auto& [name, s] : r.summary) {
    summary[name] = {{"pass", s.pass},
                     {"fail", s.fail},
                     {"undefined", s.undefined},
                     {"max_abs_delta", detail::number(s.max_abs_delta)},
                     {"max_rel_delta", detail::number(s.max_rel_delta)},
                     {"whitelisted", s.whitelisted}};
  }
  j["summary"] = summary;
  json audit = json::object();
  for (const auto& [name, t] : r.transcription_audit) {
    audit[name] = {{"max_abs_residual", detail::number(t.max_abs_residual)},
                   {"worst_point", t.worst_point},
                   {"failing_points", t.failing_points},
                   {"evaluated_points", t.evaluated_points},
                   {"defined_in_one_engine_only", t.defined_in_one_engine_only}};
  }
  j["transcription_audit"] = audit;
  if (r.cutoff_check) {
    const auto& c = *r.cutoff_check;
    j["cutoff_check"] = {{"points", c.points},
                         {"base_cutoff", c.base_cutoff},
                         {"max_change", detail::number(c.max_change)},
                         {"worst_quantity", c.worst_quantity},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass}};
  }
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"quantity", e.quantity},
                       {"point", e.point},
                       {"params", to_json(e.params)},
                       {"closed", detail::value_json(e.closed, e.complex_valued)},
                       {"oracle", detail::value_json(e.oracle, e.complex_valued)},
                       {"abs_delta", detail::number(e.abs_delta)},
                       {"rel_delta", detail::number(e.rel_delta)},
                       {"pass", e.pass},
                       {"note", e.note}});
  }
  j["entries"] = entries;
  return j;
}

}  // namespace pvm::oracle
