#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/grid.hpp"

namespace bmotv {

inline constexpr std::string_view kGridMagic = "bmotv-grid v1";

/// Shortest-safe decimal for a double: 17 significant digits round-trip exactly.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes the text grid format:
///
///   bmotv-grid v1
///   dim <1|2>
///   origin <x0> [<x1>]
///   h <h>
///   shape <n0> [<n1>]
///   exterior <left> <right>      (1D only, omitted when both are 0)
///   <values, row-major, one row of the last axis per line>
inline void write_grid(const GridFunction& f, std::ostream& out) {
  out << kGridMagic << '\n';
  out << "dim " << f.dim() << '\n';
  out << "origin";
  for (int a = 0; a < f.dim(); ++a) out << ' ' << format_real(f.origin()[a]);
  out << "\nh " << format_real(f.h()) << '\n';
  out << "shape";
  for (int a = 0; a < f.dim(); ++a) out << ' ' << f.shape()[a];
  out << '\n';
  if (!f.zero_exterior())
    out << "exterior " << format_real(f.exterior()[0]) << ' ' << format_real(f.exterior()[1]) << '\n';
  const Index row = f.dim() == 1 ? std::min<Index>(f.size(), 8) : f.shape()[1];
  for (Index i = 0; i < f.size(); ++i) {
    out << format_real(f.values()[static_cast<std::size_t>(i)]);
    out << (((i + 1) % row == 0 || i + 1 == f.size()) ? '\n' : ' ');
  }
}

inline void write_grid(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  write_grid(f, out);
  if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

namespace detail {

class GridParser {
 public:
  explicit GridParser(std::istream& in) : in_(in) {}

  GridFunction parse() {
    std::string line = next_line();
    if (line != kGridMagic) fail("expected header '" + std::string(kGridMagic) + "'", 1);

    auto dim_fields = key_line("dim");
    if (dim_fields.size() != 1) fail("dim takes one value", 2);
    const long dim = to_int(dim_fields[0], 2);
    if (dim != 1 && dim != 2)
      throw Error(ErrorCode::dimension_unsupported, "line " + std::to_string(line_no_) + ": dim " + std::to_string(dim));

    auto origin_fields = key_line("origin");
    if (static_cast<long>(origin_fields.size()) != dim) fail("origin needs " + std::to_string(dim) + " values", 2);
    Vec origin{0.0, 0.0};
    for (long a = 0; a < dim; ++a) origin[a] = to_real(origin_fields[a], static_cast<int>(a) + 2);

    auto h_fields = key_line("h");
    if (h_fields.size() != 1) fail("h takes one value", 2);
    const double h = to_real(h_fields[0], 2);
    if (!(h > 0.0)) fail("h must be positive", 2);

    auto shape_fields = key_line("shape");
    if (static_cast<long>(shape_fields.size()) != dim) fail("shape needs " + std::to_string(dim) + " values", 2);
    IVec shape{1, 1};
    for (long a = 0; a < dim; ++a) {
      shape[a] = to_int(shape_fields[a], static_cast<int>(a) + 2);
      if (shape[a] <= 0) fail("shape must be positive", static_cast<int>(a) + 2);
    }

    std::array<double, 2> exterior{0.0, 0.0};
    const Index count = shape[0] * shape[1];
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    bool first_data_line = true;
    while (std::getline(in_, line)) {
      ++line_no_;
      auto fields = split(line);
      if (fields.empty()) continue;
      if (first_data_line && fields[0] == "exterior") {
        if (dim != 1) fail("exterior is only allowed for dim 1", 1);
        if (fields.size() != 3) fail("exterior takes two values", 1);
        exterior = {to_real(fields[1], 2), to_real(fields[2], 3)};
        first_data_line = false;
        continue;
      }
      first_data_line = false;
      for (std::size_t k = 0; k < fields.size(); ++k) {
        if (static_cast<Index>(values.size()) >= count) fail("more values than shape allows", static_cast<int>(k) + 1);
        values.push_back(to_real(fields[k], static_cast<int>(k) + 1));
      }
    }
    if (static_cast<Index>(values.size()) != count)
      throw Error(ErrorCode::parse_error, "expected " + std::to_string(count) + " values, found " +
                                              std::to_string(values.size()));
    return GridFunction(static_cast<int>(dim), origin, h, shape, std::move(values), exterior);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int field) const {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no_) + ", field " + std::to_string(field) + ": " + msg);
  }

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file", 1);
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  static std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
  }

  std::vector<std::string> key_line(const std::string& key) {
    auto fields = split(next_line());
    if (fields.empty() || fields[0] != key) fail("expected key '" + key + "'", 1);
    fields.erase(fields.begin());
    return fields;
  }

  double to_real(const std::string& tok, int field) const {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v)) fail("not a finite real: '" + tok + "'", field);
    return v;
  }

  long to_int(const std::string& tok, int field) const {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size()) fail("not an integer: '" + tok + "'", field);
    return v;
  }

  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace detail

inline GridFunction read_grid(std::istream& in) { return detail::GridParser(in).parse(); }

inline GridFunction read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  return read_grid(in);
}

}  // namespace bmotv
