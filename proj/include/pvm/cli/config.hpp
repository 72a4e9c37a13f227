// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvm/cli/format.hpp"

namespace pvm::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses flat `key=value` text. Blank lines and lines starting with '#' are
/// ignored. Each entry becomes the flag `--key=value`, so a config file and
/// the command line share one option table.
inline std::vector<std::string> config_to_flags(std::istream& in, const std::string& origin) {
  std::vector<std::string> flags;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (key == "config") {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": nested config files");
    }
    flags.push_back("--" + key + "=" + value);
  }
  return flags;
}

inline std::vector<std::string> read_config_flags(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return config_to_flags(in, path);
}

/// Splices the flags of every `--config <path>` (or `--config=<path>`) in
/// front of the remaining arguments, right after the subcommand, so explicit
/// flags override config values under a take-last policy.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.size() < 2) return args;
  std::vector<std::string> from_files;
  std::vector<std::string> rest;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      const auto f = read_config_flags(args[++i]);
      from_files.insert(from_files.end(), f.begin(), f.end());
    } else if (a.rfind("--config=", 0) == 0) {
      const auto f = read_config_flags(a.substr(9));
      from_files.insert(from_files.end(), f.begin(), f.end());
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> out{args[0]};
  if (!rest.empty()) {
    out.push_back(rest.front());
    out.insert(out.end(), from_files.begin(), from_files.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
  } else {
    out.insert(out.end(), from_files.begin(), from_files.end());
  }
  return out;
}

}  // namespace pvm::cli
