// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvm/cli/commands.hpp"

namespace {

using namespace pvm;
using namespace pvm::cli;

struct RawFlags {
  std::string out;
  std::string format = "csv";
  std::string engine = "closedform";
  std::string transcription = "derived";
  std::string position = "printed";
  int cutoff = 0;
  std::string grid;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::string Gamma = "0", alpha = "0", delta = "0", phi = "0", gamma = "0", sigma = "1";
};

void add_common(CLI::App* cmd, RawFlags& f) {
  cmd->add_option("--out", f.out, "Output file (directory for figure)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--engine", f.engine, "closedform or oracle")
      ->check(CLI::IsMember({"closedform", "oracle"}));
  cmd->add_option("--transcription", f.transcription, "derived or printed closed forms")
      ->check(CLI::IsMember({"derived", "printed"}));
  cmd->add_option("--position", f.position, "<X^2> convention for chi: printed or operator")
      ->check(CLI::IsMember({"printed", "operator"}));
  cmd->add_option("--cutoff", f.cutoff, "Fock cutoff for mode a (0 = default policy)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--grid", f.grid, "xmin,xmax,ymin,ymax,nx,ny");
  cmd->add_option("--abs-tol", f.abs_tol, "Absolute tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--rel-tol", f.rel_tol, "Relative tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--config", "Flat key=value file mirroring the flags");
}

void add_params(CLI::App* cmd, RawFlags& f) {
  cmd->add_option("--Gamma", f.Gamma, "Coupling strength");
  cmd->add_option("--alpha", f.alpha, "Preselection angle (accepts forms like 8pi/9)");
  cmd->add_option("--delta", f.delta, "Preselection phase");
  cmd->add_option("--phi", f.phi, "LG phase");
  cmd->add_option("--gamma", f.gamma, "LG admixture");
  cmd->add_option("--sigma", f.sigma, "Pointer width");
}

RunConfig to_config(const RawFlags& f) {
  RunConfig c;
  c.out = f.out;
  c.format = parse_enum<Format>(f.format, "format");
  c.engine = parse_enum<Engine>(f.engine, "engine");
  c.formulas.transcription = parse_enum<closedform::Transcription>(f.transcription, "transcription");
  c.formulas.position = parse_enum<closedform::PositionConvention>(f.position, "position");
  c.cutoff = f.cutoff;
  if (!f.grid.empty()) c.grid = parse_grid(f.grid);
  c.abs_tol = f.abs_tol;
  c.rel_tol = f.rel_tol;
  return c;
}

MeasurementParams to_params(const RawFlags& f) {
  MeasurementParams p;
  try {
    p.Gamma = parse_number(f.Gamma);
    p.alpha = parse_angle(f.alpha);
    p.delta = parse_angle(f.delta);
    p.phi = parse_angle(f.phi);
    p.gamma = parse_number(f.gamma);
    p.sigma = parse_number(f.sigma);
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(args);

  CLI::App app{"Postselected von Neumann measurement simulator"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  RawFlags f;

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate a quantity");
  std::string quantity = "Q1", axis = "Gamma", start = "0", stop = "1";
  int steps = 11;
  add_common(sweep, f);
  add_params(sweep, f);
  sweep->add_option("--quantity", quantity, "Q1 Q2 g2 chi fidelity lambda weak_value");
  sweep->add_option("--axis", axis, "Gamma alpha gamma phi delta");
  sweep->add_option("--start", start, "Axis start");
  sweep->add_option("--stop", stop, "Axis stop");
  sweep->add_option("--steps", steps, "Number of points (>= 2)");

  auto* field = app.add_subcommand("field", "Export an intensity or Wigner field on a grid");
  std::string kind = "intensity";
  add_common(field, f);
  add_params(field, f);
  field->add_option("--kind", kind, "intensity or wigner");

  auto* validate = app.add_subcommand("validate", "Compare closed forms with the state-vector oracle");
  std::string points = "default";
  std::vector<std::string> whitelist;
  bool no_whitelist = false;
  add_common(validate, f);
  validate->add_option("--points", points, "default, identity or a point count");
  validate->add_option("--whitelist", whitelist, "Quantities allowed to fail")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  validate->add_flag("--no-whitelist", no_whitelist, "Allow no failures at all");

  auto* figure = app.add_subcommand("figure", "Write the data behind one figure");
  std::string name;
  add_common(figure, f);
  figure->add_option("name", name, "fig2 fig3a ... fig7b")->required();

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageError;
  }

  const RunConfig cfg = to_config(f);
  if (sweep->parsed()) {
    SweepSpec s;
    s.quantity = parse_enum<Quantity>(quantity, "quantity");
    s.axis = parse_enum<Axis>(axis, "axis");
    try {
      s.start = parse_angle(start);
      s.stop = parse_angle(stop);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    s.steps = steps;
    s.fixed = to_params(f);
    return cmd_sweep(s, cfg);
  }
  if (field->parsed()) return cmd_field(parse_field_kind(kind), to_params(f), cfg);
  if (validate->parsed()) {
    ValidateSpec v;
    v.points = points;
    if (no_whitelist) v.whitelist.clear();
    if (!whitelist.empty()) v.whitelist = {whitelist.begin(), whitelist.end()};
    if (cfg.abs_tol < 0 || cfg.rel_tol < 0) throw UsageError("tolerances must be >= 0");
    return cmd_validate(v, cfg);
  }
  return cmd_figure(name, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pvm::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pvm::cli::kUsageError;
  } catch (const pvm::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return pvm::cli::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pvm::cli::kUsageError;
  }
}
