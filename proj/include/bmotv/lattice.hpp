#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bmotv/error.hpp"

namespace bmotv {

// Relative tolerance used when deciding whether a real is an integer multiple
// of the grid spacing. Values such as 1/729 are not representable exactly.
inline constexpr double kLatticeTol = 1e-9;

/// Returns x / h rounded to the nearest integer when x is (numerically) an
/// integer multiple of h, std::nullopt otherwise.
inline std::optional<std::int64_t> lattice_steps(double x, double h) {
  const double r = x / h;
  const double n = std::round(r);
  if (std::abs(r - n) > kLatticeTol * std::max(1.0, std::abs(r))) return std::nullopt;
  return static_cast<std::int64_t>(n);
}

inline bool is_multiple_of(double x, double h) { return lattice_steps(x, h).has_value(); }

inline std::int64_t require_steps(double x, double h, ErrorCode code, std::string_view what) {
  auto n = lattice_steps(x, h);
  if (!n) throw Error(code, std::string(what) + " = " + std::to_string(x) + " is not a multiple of h = " + std::to_string(h));
  return *n;
}

/// Parses "a", "a/b" or a decimal literal. Rationals are divided once, in
/// double precision, so 1/16 is exact and 1/729 is the nearest double.
inline double parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_real = [](std::string_view s) {
    std::string buf(s);
    if (buf.empty()) throw Error(ErrorCode::parse_error, "empty number");
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v))
      throw Error(ErrorCode::parse_error, "not a number: '" + buf + "'");
    return v;
  };
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_real(text);
  const double num = parse_real(trim(text.substr(0, slash)));
  const double den = parse_real(trim(text.substr(slash + 1)));
  if (den == 0.0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace bmotv
