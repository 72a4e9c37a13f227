// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pvm/cli/config.hpp"
#include "pvm/cli/format.hpp"
#include "pvm/closedform/closedform.hpp"
#include "pvm/oracle/oracle.hpp"
#include "pvm/oracle/validation.hpp"
#include "pvm/parallel.hpp"

namespace pvm::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kValidationFailure = 2 };

/// Bad user input: unknown names, out-of-range parameters, unwritable paths.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Quantity { Q1, Q2, g2, chi, fidelity, lambda, weak_value };
enum class Axis { Gamma, alpha, gamma, phi, delta };
enum class Engine { closedform, oracle };
enum class Format { csv, json };

template <class E>
struct Names;

template <>
struct Names<Quantity> {
  static constexpr std::pair<std::string_view, Quantity> table[] = {
      {"Q1", Quantity::Q1},           {"Q2", Quantity::Q2},
      {"g2", Quantity::g2},           {"chi", Quantity::chi},
      {"fidelity", Quantity::fidelity}, {"lambda", Quantity::lambda},
      {"weak_value", Quantity::weak_value}};
};

template <>
struct Names<Axis> {
  static constexpr std::pair<std::string_view, Axis> table[] = {{"Gamma", Axis::Gamma},
                                                                {"alpha", Axis::alpha},
                                                                {"gamma", Axis::gamma},
                                                                {"phi", Axis::phi},
                                                                {"delta", Axis::delta}};
};

template <>
struct Names<Engine> {
  static constexpr std::pair<std::string_view, Engine> table[] = {
      {"closedform", Engine::closedform}, {"oracle", Engine::oracle}};
};

template <>
struct Names<Format> {
  static constexpr std::pair<std::string_view, Format> table[] = {{"csv", Format::csv},
                                                                  {"json", Format::json}};
};

template <>
struct Names<closedform::Transcription> {
  static constexpr std::pair<std::string_view, closedform::Transcription> table[] = {
      {"derived", closedform::Transcription::derived},
      {"printed", closedform::Transcription::printed}};
};

template <>
struct Names<closedform::PositionConvention> {
  static constexpr std::pair<std::string_view, closedform::PositionConvention> table[] = {
      {"printed", closedform::PositionConvention::printed},
      {"operator", closedform::PositionConvention::operator_form}};
};

template <class E>
E parse_enum(std::string_view s, std::string_view what) {
  for (const auto& [name, value] : Names<E>::table) {
    if (name == s) return value;
  }
  std::string msg = "unknown " + std::string(what) + " '" + std::string(s) + "' (expected";
  for (const auto& [name, value] : Names<E>::table) msg += " " + std::string(name);
  throw UsageError(msg + ")");
}

template <class E>
std::string_view enum_name(E v) {
  for (const auto& [name, value] : Names<E>::table) {
    if (value == v) return name;
  }
  return "?";
}

/// "xmin,xmax,ymin,ymax,nx,ny"
inline GridSpec parse_grid(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 6) throw UsageError("--grid expects xmin,xmax,ymin,ymax,nx,ny");
  GridSpec g;
  try {
    g.x_min = parse_number(trim(parts[0]));
    g.x_max = parse_number(trim(parts[1]));
    g.y_min = parse_number(trim(parts[2]));
    g.y_max = parse_number(trim(parts[3]));
    const double nx = parse_number(trim(parts[4]));
    const double ny = parse_number(trim(parts[5]));
    if (nx != std::floor(nx) || ny != std::floor(ny)) throw UsageError("grid sizes must be integers");
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  return g;
}

/// Options shared by every command (flags and config keys).
struct RunConfig {
  std::string out;
  Format format = Format::csv;
  Engine engine = Engine::closedform;
  closedform::Formulas formulas{};
  int cutoff = 0;  ///< 0 selects the default cutoff policy
  GridSpec grid = GridSpec::square(6.0, 241);
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
};

struct SweepSpec {
  Quantity quantity = Quantity::Q1;
  Axis axis = Axis::Gamma;
  double start = 0.0;
  double stop = 1.0;
  int steps = 11;
  MeasurementParams fixed{};
};

inline double& axis_slot(MeasurementParams& p, Axis a) {
  switch (a) {
    case Axis::Gamma: return p.Gamma;
    case Axis::alpha: return p.alpha;
    case Axis::gamma: return p.gamma;
    case Axis::phi: return p.phi;
    case Axis::delta: return p.delta;
  }
  return p.Gamma;
}

inline std::vector<MeasurementParams> sweep_points(const SweepSpec& s) {
  if (s.steps < 2) throw UsageError("sweep: steps must be >= 2");
  std::vector<MeasurementParams> pts;
  pts.reserve(static_cast<std::size_t>(s.steps));
  for (int k = 0; k < s.steps; ++k) {
    MeasurementParams p = s.fixed;
    const double t = static_cast<double>(k) / (s.steps - 1);
    axis_slot(p, s.axis) = k == s.steps - 1 ? s.stop : s.start + t * (s.stop - s.start);
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("sweep: axis value out of range: ") + e.what());
    }
    pts.push_back(p);
  }
  return pts;
}

/// Value of one sweep quantity, or the reason it is undefined.
inline oracle::MaybeValue evaluate(Quantity q, const MeasurementParams& p, Engine engine,
                                   const RunConfig& cfg) {
  using namespace closedform;
  if (q == Quantity::weak_value) return {std::abs(weak_value(p.alpha, p.delta).value), {}};
  if (engine == Engine::closedform) {
    const Transcription t = cfg.formulas.transcription;
    switch (q) {
      case Quantity::Q1: return {squeezing(p, t).Q1, {}};
      case Quantity::Q2: return {squeezing(p, t).Q2, {}};
      case Quantity::g2: return oracle::guarded([&] { return g2_cross(p, t); });
      case Quantity::chi: return oracle::guarded([&] { return snr_ratio(p, 1, cfg.formulas).chi; });
      case Quantity::fidelity: return {closedform::fidelity(p, t), {}};
      case Quantity::lambda: return {lambda_norm(p, t), {}};
      case Quantity::weak_value: break;
    }
    return {};
  }
  oracle::OracleOptions opt;
  opt.na = cfg.cutoff;
  const oracle::OracleRecord r = oracle::oracle_quantities(p, opt);
  switch (q) {
    case Quantity::Q1: return {r.Q1, {}};
    case Quantity::Q2: return {r.Q2, {}};
    case Quantity::g2: return r.g2;
    case Quantity::chi: return r.chi;
    case Quantity::fidelity: return {r.fidelity, {}};
    case Quantity::lambda: return {r.lambda, {}};
    case Quantity::weak_value: break;
  }
  return {};
}

struct SweepRow {
  double axis_value;
  MeasurementParams params;
  oracle::MaybeValue value;
};

inline std::vector<SweepRow> run_sweep(const SweepSpec& s, Engine engine, const RunConfig& cfg) {
  const auto pts = sweep_points(s);
  std::vector<SweepRow> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    MeasurementParams p = pts[i];
    rows[i] = {axis_slot(p, s.axis), pts[i], evaluate(s.quantity, pts[i], engine, cfg)};
  });
  return rows;
}

inline const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h = {"axis_value", "quantity", "engine", "Gamma", "alpha",
                                             "delta",      "phi",      "gamma",  "sigma", "reason"};
  return h;
}

inline void append_sweep_csv(CsvWriter& w, const std::vector<SweepRow>& rows, Engine engine) {
  for (const auto& r : rows) {
    const auto& p = r.params;
    w.row({format_number(r.axis_value), r.value.value ? format_number(*r.value.value) : "",
           std::string(enum_name(engine)), format_number(p.Gamma), format_number(p.alpha),
           format_number(p.delta), format_number(p.phi), format_number(p.gamma),
           format_number(p.sigma), r.value.reason});
  }
}

inline nlohmann::json sweep_json(const SweepSpec& s, const std::vector<SweepRow>& rows,
                                 Engine engine) {
  nlohmann::json j;
  j["quantity"] = enum_name(s.quantity);
  j["axis"] = enum_name(s.axis);
  j["engine"] = enum_name(engine);
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["axis_value"] = r.axis_value;
    row["value"] = r.value.value ? nlohmann::json(*r.value.value) : nlohmann::json(nullptr);
    row["reason"] = r.value.reason;
    row["params"] = oracle::to_json(r.params);
    j["rows"].push_back(row);
  }
  return j;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw UsageError("write failed: '" + path.string() + "'");
}

inline void write_sweep(const fs::path& path, const SweepSpec& s, const std::vector<SweepRow>& rows,
                        Engine engine, Format format) {
  if (format == Format::json) {
    write_text(path, sweep_json(s, rows, engine).dump(2) + "\n");
    return;
  }
  CsvWriter w(path.string(), sweep_header());
  append_sweep_csv(w, rows, engine);
  w.close();
}

inline int cmd_sweep(const SweepSpec& s, const RunConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("sweep: --out is required");
  const auto rows = run_sweep(s, cfg.engine, cfg);
  write_sweep(cfg.out, s, rows, cfg.engine, cfg.format);
  return kSuccess;
}

// ---------------------------------------------------------------- fields

enum class FieldChoice { intensity, wigner };

inline FieldChoice parse_field_kind(std::string_view s) {
  if (s == "intensity") return FieldChoice::intensity;
  if (s == "wigner") return FieldChoice::wigner;
  throw UsageError("unknown field kind '" + std::string(s) + "' (expected intensity wigner)");
}

inline RealField compute_field(FieldChoice kind, const MeasurementParams& p, const GridSpec& g,
                               const RunConfig& cfg) {
  if (cfg.engine == Engine::closedform) {
    return kind == FieldChoice::intensity
               ? closedform::intensity_field(p, g, cfg.formulas.transcription)
               : closedform::wigner_field(p, g, cfg.formulas.transcription);
  }
  const int na = cfg.cutoff > 0 ? cfg.cutoff : default_cutoff(p.Gamma);
  const auto post = run_measurement(p, na);
  return kind == FieldChoice::intensity ? oracle::oracle_intensity(post.state, g)
                                        : oracle::oracle_wigner(post.state, g);
}

inline fs::path sidecar_path(const fs::path& csv) {
  fs::path s = csv;
  if (s.extension() == ".csv") return s.replace_extension(".json");
  return fs::path(csv.string() + ".json");
}

inline nlohmann::json grid_json(const GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
          {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

inline void write_field(const fs::path& path, const RealField& f, const MeasurementParams& p,
                        const RunConfig& cfg) {
  const bool wigner = f.kind == FieldKind::wigner;
  CsvWriter w(path.string(), {"x", wigner ? "p" : "y", "value"});
  for (int i = 0; i < f.grid.nx; ++i) {
    for (int j = 0; j < f.grid.ny; ++j) {
      w.row({format_number(f.grid.x(i)), format_number(f.grid.y(j)), format_number(f.values(i, j))});
    }
  }
  w.close();
  nlohmann::json side;
  side["kind"] = to_string(f.kind);
  side["engine"] = enum_name(cfg.engine);
  if (cfg.engine == Engine::closedform) {
    side["transcription"] = closedform::to_string(cfg.formulas.transcription);
  }
  side["params"] = oracle::to_json(p);
  side["grid"] = grid_json(f.grid);
  side["integral"] = f.integral();
  side["min"] = f.min();
  side["max"] = f.max();
  write_text(sidecar_path(path), side.dump(2) + "\n");
}

inline int cmd_field(FieldChoice kind, const MeasurementParams& p, const RunConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("field: --out is required");
  write_field(cfg.out, compute_field(kind, p, cfg.grid, cfg), p, cfg);
  return kSuccess;
}

// ---------------------------------------------------------------- validate

/// "default" (the 200-point Sobol set), "identity" (one Gamma = 0 point) or a
/// point count for a Sobol set of that size.
inline std::vector<MeasurementParams> named_point_set(std::string_view name) {
  if (name == "default") return oracle::validation_set(200);
  if (name == "identity") {
    MeasurementParams p;
    p.Gamma = 0.0;
    p.alpha = std::numbers::pi / 3.0;
    p.gamma = 1.0;
    return {p};
  }
  double n = 0.0;
  try {
    n = parse_number(name);
  } catch (const std::invalid_argument&) {
    throw UsageError("--points expects default, identity or a positive count");
  }
  if (n < 1 || n != std::floor(n)) throw UsageError("--points count must be a positive integer");
  return oracle::validation_set(static_cast<std::size_t>(n));
}

struct ValidateSpec {
  std::string points = "default";
  std::set<std::string> whitelist = {"chi"};
};

inline int cmd_validate(const ValidateSpec& v, const RunConfig& cfg, std::ostream& log = std::cout) {
  const fs::path out = cfg.out.empty() ? fs::path("validation_report.json") : fs::path(cfg.out);
  oracle::CompareOptions opt;
  opt.formulas = cfg.formulas;
  opt.cutoff = cfg.cutoff;
  opt.whitelist = v.whitelist;
  const auto report = oracle::compare(named_point_set(v.points), cfg.abs_tol, cfg.rel_tol, opt);
  write_text(out, oracle::to_json(report).dump(1) + "\n");
  for (const auto& [name, s] : report.summary) {
    log << name << ": pass " << s.pass << " fail " << s.fail << " undefined " << s.undefined
        << " max_abs " << format_number(s.max_abs_delta) << (s.whitelisted ? " (whitelisted)" : "")
        << '\n';
  }
  if (report.cutoff_check) {
    log << "cutoff doubling: max change " << format_number(report.cutoff_check->max_change)
        << (report.cutoff_check->pass ? " ok" : " FAILED") << '\n';
  }
  const auto bad = report.unexpected_failures();
  for (const auto& b : bad) log << "unexpected failure: " << b << '\n';
  log << (report.passed() ? "validation passed" : "validation FAILED") << '\n';
  return report.passed() ? kSuccess : kValidationFailure;
}

// ---------------------------------------------------------------- figures

inline constexpr std::string_view kFigureNames[] = {"fig2",  "fig3a", "fig3b", "fig3c", "fig3d",
                                                    "fig4a", "fig4b", "fig5",  "fig6a", "fig6b",
                                                    "fig6c", "fig7a", "fig7b"};

namespace figures {

inline constexpr double pi = std::numbers::pi;
inline constexpr double kAlphaMax = 0.95 * pi;

inline MeasurementParams caption(double Gamma, double alpha, double delta, double phi) {
  MeasurementParams p;
  p.Gamma = Gamma;
  p.alpha = alpha;
  p.delta = delta;
  p.phi = phi;
  p.gamma = 1.0;
  return p;
}

/// One family of curves that shares an axis.
struct Family {
  Quantity quantity;
  Axis axis;
  double start, stop;
  int steps;
  std::vector<MeasurementParams> series;  ///< fixed values for each curve
};

inline void write_family(const fs::path& path, const Family& fam, const RunConfig& cfg) {
  if (cfg.format == Format::json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& fixed : fam.series) {
      SweepSpec s{fam.quantity, fam.axis, fam.start, fam.stop, fam.steps, fixed};
      j.push_back(sweep_json(s, run_sweep(s, cfg.engine, cfg), cfg.engine));
    }
    write_text(fs::path(path).replace_extension(".json"), j.dump(2) + "\n");
    return;
  }
  CsvWriter w(path.string(), sweep_header());
  for (const auto& fixed : fam.series) {
    SweepSpec s{fam.quantity, fam.axis, fam.start, fam.stop, fam.steps, fixed};
    append_sweep_csv(w, run_sweep(s, cfg.engine, cfg), cfg.engine);
  }
  w.close();
}

inline void write_stub(const fs::path& path, std::string_view figure, std::string_view fallback) {
  std::string text;
  text += "# " + std::string(figure) + ": not reproducible as plotted\n";
  text += "# The figure uses r = sqrt(x^2 + y^2) as its horizontal axis, but none of the\n";
  text += "# analytic expressions for this quantity depend on x or y, so the r dependence\n";
  text += "# cannot be recovered. No substitute for r (such as gamma = r) is assumed.\n";
  text += "# Supported-axis fallback written to: " + std::string(fallback) + "\n";
  write_text(path, text);
}

inline Family alpha_family(Quantity q, std::initializer_list<double> gammas, double phi) {
  Family f{q, Axis::alpha, 0.0, kAlphaMax, 96, {}};
  for (double G : gammas) f.series.push_back(caption(G, 0.0, 0.0, phi));
  return f;
}

inline Family gamma_fallback(Quantity q, std::initializer_list<double> Gammas,
                             std::initializer_list<double> alphas) {
  Family f{q, Axis::gamma, 0.0, 3.0, 61, {}};
  for (double G : Gammas) {
    for (double a : alphas) f.series.push_back(caption(G, a, 0.0, pi / 2.0));
  }
  return f;
}

inline Family coupling_family(Quantity q, std::initializer_list<double> alphas) {
  Family f{q, Axis::Gamma, 0.0, 2.0, 101, {}};
  for (double a : alphas) f.series.push_back(caption(0.0, a, 0.0, pi / 2.0));
  return f;
}

}  // namespace figures

/// Writes the data behind one figure into the output directory.
inline std::vector<fs::path> run_figure(std::string_view name, const RunConfig& cfg) {
  using namespace figures;
  const fs::path dir = cfg.out.empty() ? fs::path("figures") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "'");
  std::vector<fs::path> written;
  const std::string n(name);
  const std::string ext = cfg.format == Format::json ? ".json" : ".csv";

  auto family = [&](const Family& f, const std::string& stem) {
    const fs::path p = dir / (stem + ".csv");
    write_family(p, f, cfg);
    written.push_back(dir / (stem + ext));
  };
  auto stub = [&](const Family& fallback) {
    const std::string fb = n + "_gamma_fallback";
    family(fallback, fb);
    const fs::path s = dir / (n + "_unsupported.txt");
    write_stub(s, n, fb + ext);
    written.push_back(s);
  };
  auto field = [&](FieldChoice kind, const MeasurementParams& p, const std::string& stem) {
    const fs::path f = dir / (stem + ".csv");
    write_field(f, compute_field(kind, p, cfg.grid, cfg), p, cfg);
    written.push_back(f);
    written.push_back(sidecar_path(f));
  };

  const double a89 = 8.0 * pi / 9.0;
  const double weak_alphas[] = {pi / 2.0, 3.0 * pi / 4.0, a89};
  if (n == "fig2") {
    const double Gammas[] = {0.0, 0.3, 1.0};
    const double alphas[] = {pi / 12.0, 11.0 * pi / 12.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 2; ++c) {
        field(FieldChoice::intensity, caption(Gammas[r], alphas[c], 0.0, 0.0),
              "fig2_row" + std::to_string(r + 1) + "_col" + std::to_string(c + 1));
      }
    }
  } else if (n == "fig3a") {
    stub(gamma_fallback(Quantity::Q1, {0.0, 0.3, 1.0}, {a89}));
  } else if (n == "fig3b") {
    family(alpha_family(Quantity::Q1, {0.0, 0.3, 1.0}, pi / 2.0), n);
  } else if (n == "fig3c") {
    stub(gamma_fallback(Quantity::Q2, {0.0, 0.3, 1.0}, {a89}));
  } else if (n == "fig3d") {
    family(alpha_family(Quantity::Q2, {0.0, 0.3, 1.0}, pi / 2.0), n);
  } else if (n == "fig4a") {
    stub(gamma_fallback(Quantity::g2, {0.0, 0.3, 1.0}, {a89}));
  } else if (n == "fig4b") {
    family(alpha_family(Quantity::g2, {0.0, 0.3, 1.0}, pi / 2.0), n);
  } else if (n == "fig5") {
    const double Gammas[] = {0.0, 0.3, 1.0};
    for (int k = 0; k < 3; ++k) {
      field(FieldChoice::wigner, caption(Gammas[k], a89, 0.0, 0.0),
            "fig5_panel" + std::to_string(k + 1));
    }
  } else if (n == "fig6a") {
    family(coupling_family(Quantity::chi, {weak_alphas[0], weak_alphas[1], weak_alphas[2]}), n);
  } else if (n == "fig6b") {
    stub(gamma_fallback(Quantity::chi, {0.2}, {weak_alphas[0], weak_alphas[1], weak_alphas[2]}));
  } else if (n == "fig6c") {
    stub(gamma_fallback(Quantity::chi, {0.2, 0.5, 1.0}, {a89}));
  } else if (n == "fig7a") {
    family(coupling_family(Quantity::fidelity, {weak_alphas[0], weak_alphas[1], weak_alphas[2]}),
           n);
  } else if (n == "fig7b") {
    family(alpha_family(Quantity::fidelity, {0.3, 1.0, 2.0}, pi / 2.0), n);
  } else {
    throw UsageError("unknown figure '" + n + "'");
  }
  return written;
}

inline int cmd_figure(std::string_view name, const RunConfig& cfg) {
  run_figure(name, cfg);
  return kSuccess;
}

}  // namespace pvm::cli
