// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace pvm::cli {

/// Locale-free rendering with 17 significant digits (%.17g style).
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // folds -0 into 0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  std::size_t start = 0;
  if (!s.empty() && s.front() == '+') start = 1;
  const auto res = std::from_chars(s.data() + start, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// A number, or a multiple of pi written as "pi", "8pi/9", "3*pi/4", "pi/2".
inline double parse_angle(std::string_view s) {
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return parse_number(s);
  double scale = 1.0;
  std::string_view head = s.substr(0, at);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  if (!head.empty()) scale = parse_number(head);
  std::string_view tail = s.substr(at + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("not an angle: '" + std::string(s) + "'");
    const double d = parse_number(tail.substr(1));
    if (d == 0.0) throw std::invalid_argument("angle divides by zero");
    scale /= d;
  }
  return scale * 3.141592653589793238462643383279502884;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// CSV writer with a fixed column count.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("CsvWriter: write failed");
  }

 private:
  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace pvm::cli
