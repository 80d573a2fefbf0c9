#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/lattice.hpp"

namespace bmotv {

enum class Kind {
  constant,
  ramp,
  step,
  sbv_combo,
  gaussian_smooth,
  cantor,
  indicator_interval,
  indicator_square,
  indicator_disk,
  checkerboard,
  scaled_profile,
};

inline constexpr std::array<std::pair<Kind, std::string_view>, 11> kKindNames{{
    {Kind::constant, "constant"},
    {Kind::ramp, "ramp"},
    {Kind::step, "step"},
    {Kind::sbv_combo, "sbv_combo"},
    {Kind::gaussian_smooth, "gaussian_smooth"},
    {Kind::cantor, "cantor"},
    {Kind::indicator_interval, "indicator_interval"},
    {Kind::indicator_square, "indicator_square"},
    {Kind::indicator_disk, "indicator_disk"},
    {Kind::checkerboard, "checkerboard"},
    {Kind::scaled_profile, "scaled_profile"},
}};

inline std::string_view to_string(Kind k) {
  for (auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "unknown";
}

inline Kind kind_from_string(std::string_view s) {
  for (auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  throw Error(ErrorCode::invalid_spec, "unknown function kind '" + std::string(s) + "'");
}

/// How the profile continues outside the bounding box (1D only for `clamp`).
enum class Exterior {
  automatic,  // clamp for cantor, zero otherwise
  zero,
  clamp,      // constant continuation with the profile's limits at -inf / +inf
};

struct Jump {
  double position = 0.0;
  double height = 1.0;
};

/// Parameters of a catalog function. Only the fields relevant to `kind` are read.
///
/// Profiles that vary along one coordinate (ramp, step, sbv_combo) use axis 0
/// and are extruded along axis 1 in 2D.
struct FunctionSpec {
  Kind kind = Kind::constant;
  int dim = 1;
  double h = 1.0 / 64.0;
  Box box{{0.0, 0.0}, {1.0, 1.0}};
  Exterior exterior = Exterior::automatic;

  double value = 1.0;     // constant level; gaussian amplitude
  double slope = 1.0;     // ramp / sbv_combo
  double a = 0.0;         // ramp start, interval start
  double b = 1.0;         // ramp end, interval end
  double shoulder = 0.0;  // ramp corner smoothing width
  double position = 0.5;  // step location
  double left = 0.0;      // step value for x < position
  double right = 1.0;     // step value for x >= position
  std::vector<Jump> jumps;  // sbv_combo jump part
  int level = 1;            // cantor level L
  Vec center{0.0, 0.0};     // disk / square / gaussian
  double radius = 0.3;
  double side = 1.0;
  double sigma = 0.1;
  double period = 0.125;  // checkerboard tile side
  double alpha = 0.5;     // scaled_profile exponent
  double scale = 1.0;     // scaled_profile epsilon
};

/// Masses of the absolutely continuous, jump and Cantor parts of Df over R^n.
struct DecompositionSpec {
  double absolutely_continuous = 0.0;
  double jump = 0.0;
  double cantor = 0.0;

  double total() const { return absolutely_continuous + jump + cantor; }
};

namespace detail {

/// Smoothed clamp(u, 0, len): quadratic blends of width s at both corners.
inline double shouldered_clamp(double u, double len, double s) {
  if (s <= 0.0) return std::clamp(u, 0.0, len);
  const double hs = 0.5 * s;
  if (u <= -hs) return 0.0;
  if (u < hs) return (u + hs) * (u + hs) / (2.0 * s);
  if (u <= len - hs) return u;
  if (u < len + hs) return len - (len + hs - u) * (len + hs - u) / (2.0 * s);
  return len;
}

/// Level-L piecewise-linear iterate of the Cantor-Vitali function on [0,1].
inline double cantor_iterate(double x, int level) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double scale = 1.0, offset = 0.0;
  for (int k = 0; k < level; ++k) {
    if (x < 1.0 / 3.0) {
      x *= 3.0;
      scale *= 0.5;
    } else if (x <= 2.0 / 3.0) {
      return offset + 0.5 * scale;
    } else {
      x = 3.0 * x - 2.0;
      offset += 0.5 * scale;
      scale *= 0.5;
    }
  }
  return offset + scale * x;
}

/// Exact average over [x0, x1] of a function that is a polynomial of degree <= 2
/// between consecutive breakpoints (3-point Gauss on each piece).
template <class Fn>
double piecewise_quadratic_average(Fn&& fn, const std::vector<double>& breaks, double x0, double x1) {
  double total = 0.0, lo = x0;
  auto piece = [&](double p0, double p1) {
    if (p1 <= p0) return;
    // 3-point Gauss: exact for quadratics, and never samples a break itself
    const double c = 0.5 * (p0 + p1), r = 0.5 * (p1 - p0) * std::sqrt(0.6);
    total += (p1 - p0) * (5.0 * fn(c - r) + 8.0 * fn(c) + 5.0 * fn(c + r)) / 18.0;
  };
  for (double bp : breaks) {
    if (bp <= lo || bp >= x1) continue;
    piece(lo, bp);
    lo = bp;
  }
  piece(lo, x1);
  return total / (x1 - x0);
}

/// Integral of exp(-(x-c)^2 / (2 sigma^2)) over [x0, x1].
inline double gaussian_integral(double x0, double x1, double c, double sigma) {
  const double k = 1.0 / (std::sqrt(2.0) * sigma);
  return sigma * std::sqrt(std::numbers::pi / 2.0) * (std::erf((x1 - c) * k) - std::erf((x0 - c) * k));
}

/// Integral of (y/scale)^(-alpha) over [y0, y1] intersected with (0, scale).
inline double power_profile_integral_1d(double y0, double y1, double alpha, double scale) {
  y0 = std::max(y0, 0.0);
  y1 = std::min(y1, scale);
  if (y1 <= y0) return 0.0;
  const double e = 1.0 - alpha;
  return scale * (std::pow(y1 / scale, e) - std::pow(y0 / scale, e)) / e;
}

/// Integral of (|x|/scale)^(-alpha) over the rectangle [x0,x1]x[y0,y1] intersected with
/// the positive quarter of the disk of radius `scale`. Computed in polar
/// coordinates: the radial integral is closed-form and the angular one uses
/// Gauss-Legendre on pieces split at the rectangle's corner angles.
inline double power_profile_integral_2d(double x0, double x1, double y0, double y1, double alpha,
                                        double scale) {
  x0 = std::max(x0, 0.0);
  y0 = std::max(y0, 0.0);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  if (x0 * x0 + y0 * y0 >= scale * scale) return 0.0;
  const double e = 2.0 - alpha;
  auto radial = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    // Ray r*(c,s) against the slab [x0,x1]x[y0,y1].
    double rin = 0.0, rout = std::numeric_limits<double>::infinity();
    if (c > 1e-300) {
      rin = std::max(rin, x0 / c);
      rout = std::min(rout, x1 / c);
    } else if (x0 > 0.0) {
      return 0.0;
    }
    if (s > 1e-300) {
      rin = std::max(rin, y0 / s);
      rout = std::min(rout, y1 / s);
    } else if (y0 > 0.0) {
      return 0.0;
    }
    rout = std::min(rout, scale);
    if (rout <= rin) return 0.0;
    return std::pow(scale, alpha) * (std::pow(rout, e) - std::pow(rin, e)) / e;
  };
  std::vector<double> angles{std::atan2(y0, x1), std::atan2(y1, x1), std::atan2(y0, x0), std::atan2(y1, x0)};
  // Where the circle of radius `scale` crosses the rectangle edges.
  for (double x : {x0, x1})
    if (x < scale) angles.push_back(std::atan2(std::sqrt(scale * scale - x * x), x));
  for (double y : {y0, y1})
    if (y < scale) angles.push_back(std::atan2(y, std::sqrt(scale * scale - y * y)));
  std::sort(angles.begin(), angles.end());
  static constexpr std::array<double, 8> gx{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> gw{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double t0 = angles[k], t1 = angles[k + 1];
    if (t1 - t0 < 1e-15) continue;
    // Split each smooth piece further for accuracy near the singular corner.
    constexpr int sub = 4;
    for (int q = 0; q < sub; ++q) {
      const double a0 = t0 + (t1 - t0) * q / sub, a1 = t0 + (t1 - t0) * (q + 1) / sub;
      const double mid = 0.5 * (a0 + a1), half = 0.5 * (a1 - a0);
      for (std::size_t g = 0; g < gx.size(); ++g) total += gw[g] * half * radial(mid + half * gx[g]);
    }
  }
  return total;
}

inline void validate(const FunctionSpec& s) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::invalid_spec, msg); };
  if (s.dim != 1 && s.dim != 2) throw Error(ErrorCode::dimension_unsupported, "dim must be 1 or 2");
  if (!(s.h > 0.0) || !std::isfinite(s.h)) bad("h must be positive");
  for (int a = 0; a < s.dim; ++a) {
    if (!(s.box.hi[a] > s.box.lo[a])) bad("empty bounding box");
    if (!is_multiple_of(s.box.hi[a] - s.box.lo[a], s.h)) bad("bounding box extent is not a multiple of h");
  }
  auto inside = [&](double x, int axis) { return x > s.box.lo[axis] && x < s.box.hi[axis]; };
  const bool one_d_only = s.kind == Kind::cantor || s.kind == Kind::indicator_interval;
  if (one_d_only && s.dim != 1) bad(std::string(to_string(s.kind)) + " requires dim = 1");
  if (s.exterior == Exterior::clamp && s.dim != 1) bad("clamped exterior is only supported in 1D");
  switch (s.kind) {
    case Kind::ramp:
    case Kind::sbv_combo:
      if (!(s.b > s.a)) bad("ramp requires a < b");
      if (s.shoulder < 0.0 || s.shoulder > s.b - s.a) bad("shoulder must lie in [0, b - a]");
      break;
    case Kind::indicator_interval:
      if (!(s.b > s.a)) bad("interval requires a < b");
      if (!inside(s.a, 0) || !inside(s.b, 0)) bad("interval endpoints must lie strictly inside the box");
      break;
    case Kind::cantor:
      if (s.level < 1) bad("cantor level must be >= 1");
      break;
    case Kind::indicator_square:
      if (!(s.side > 0.0)) bad("side must be positive");
      for (int a = 0; a < s.dim; ++a)
        if (!inside(s.center[a] - 0.5 * s.side, a) || !inside(s.center[a] + 0.5 * s.side, a))
          bad("square must lie strictly inside the box");
      break;
    case Kind::indicator_disk:
      if (!(s.radius > 0.0)) bad("radius must be positive");
      for (int a = 0; a < s.dim; ++a)
        if (!inside(s.center[a] - s.radius, a) || !inside(s.center[a] + s.radius, a))
          bad("disk must lie strictly inside the box");
      break;
    case Kind::gaussian_smooth:
      if (!(s.sigma > 0.0)) bad("sigma must be positive");
      break;
    case Kind::checkerboard:
      if (!(s.period > 0.0) || !is_multiple_of(s.period, s.h)) bad("period must be a positive multiple of h");
      break;
    case Kind::scaled_profile:
      if (!(s.alpha > 0.0) || !(s.alpha < s.dim)) bad("alpha must lie in (0, dim)");
      if (!(s.scale > 0.0)) bad("scale must be positive");
      break;
    default:
      break;
  }
}

/// Pointwise 1D profile for kinds that vary along axis 0 only.
inline double profile_1d(const FunctionSpec& s, double x) {
  switch (s.kind) {
    case Kind::constant: return s.value;
    case Kind::ramp: return s.slope * shouldered_clamp(x - s.a, s.b - s.a, s.shoulder);
    case Kind::step: return x < s.position ? s.left : s.right;
    case Kind::sbv_combo: {
      double v = s.slope * shouldered_clamp(x - s.a, s.b - s.a, s.shoulder);
      for (const auto& j : s.jumps)
        if (x >= j.position) v += j.height;
      return v;
    }
    case Kind::cantor: return cantor_iterate(x, s.level);
    default: return 0.0;
  }
}

inline std::array<double, 2> exterior_values(const FunctionSpec& s) {
  const bool clamp = s.exterior == Exterior::clamp || (s.exterior == Exterior::automatic && s.kind == Kind::cantor);
  if (!clamp) return {0.0, 0.0};
  const double far = 1e300;
  switch (s.kind) {
    case Kind::constant:
    case Kind::ramp:
    case Kind::step:
    case Kind::sbv_combo:
    case Kind::cantor: return {profile_1d(s, -far), profile_1d(s, far)};
    default: throw Error(ErrorCode::invalid_spec, "kind has no clamped continuation");
  }
}

inline std::vector<double> profile_breaks(const FunctionSpec& s) {
  std::vector<double> br;
  if (s.kind == Kind::ramp || s.kind == Kind::sbv_combo) {
    const double hs = 0.5 * s.shoulder;
    for (double p : {s.a - hs, s.a + hs, s.b - hs, s.b + hs}) br.push_back(p);
  }
  if (s.kind == Kind::step) br.push_back(s.position);
  if (s.kind == Kind::sbv_combo)
    for (const auto& j : s.jumps) br.push_back(j.position);
  std::sort(br.begin(), br.end());
  return br;
}

}  // namespace detail

/// Discretizes a catalog function on its grid.
///
/// Piecewise-polynomial kinds (constant, ramp, step, sbv_combo, cantor) and the
/// gaussian use exact cell averages; indicator kinds use the cell-center rule and
/// take values in {0, 1}; scaled_profile is exact in 1D and uses polar quadrature in 2D.
inline GridFunction generate(const FunctionSpec& s) {
  detail::validate(s);
  IVec shape{1, 1};
  for (int a = 0; a < s.dim; ++a) shape[a] = *lattice_steps(s.box.hi[a] - s.box.lo[a], s.h);
  const double h = s.h;
  const Vec origin{s.box.lo[0], s.dim == 2 ? s.box.lo[1] : 0.0};

  if (s.kind == Kind::cantor) {
    const auto per_unit = lattice_steps(1.0, h);
    Index pow3 = 1;
    for (int k = 0; k < s.level; ++k) pow3 *= 3;
    if (!per_unit || *per_unit % pow3 != 0)
      throw Error(ErrorCode::resolution_mismatch, "cantor level " + std::to_string(s.level) +
                                                      " needs 1/h to be a multiple of " + std::to_string(pow3));
    if (!lattice_steps(s.box.lo[0], h)) throw Error(ErrorCode::resolution_mismatch, "box start is off the lattice");
  }

  std::vector<double> values(static_cast<std::size_t>(shape[0] * shape[1]), 0.0);
  auto set = [&](Index i0, Index i1, double v) { values[static_cast<std::size_t>(i0 * shape[1] + i1)] = v; };
  auto x_lo = [&](int axis, Index i) { return origin[axis] + static_cast<double>(i) * h; };
  auto x_mid = [&](int axis, Index i) { return origin[axis] + (static_cast<double>(i) + 0.5) * h; };

  switch (s.kind) {
    case Kind::constant:
    case Kind::ramp:
    case Kind::step:
    case Kind::sbv_combo:
    case Kind::cantor: {
      const auto breaks = detail::profile_breaks(s);
      for (Index i0 = 0; i0 < shape[0]; ++i0) {
        const double v = detail::piecewise_quadratic_average([&](double x) { return detail::profile_1d(s, x); },
                                                             breaks, x_lo(0, i0), x_lo(0, i0 + 1));
        for (Index i1 = 0; i1 < shape[1]; ++i1) set(i0, i1, v);
      }
      break;
    }
    case Kind::gaussian_smooth: {
      std::vector<double> g0(static_cast<std::size_t>(shape[0])), g1(static_cast<std::size_t>(shape[1]), 1.0);
      for (Index i = 0; i < shape[0]; ++i)
        g0[static_cast<std::size_t>(i)] = detail::gaussian_integral(x_lo(0, i), x_lo(0, i + 1), s.center[0], s.sigma) / h;
      if (s.dim == 2)
        for (Index i = 0; i < shape[1]; ++i)
          g1[static_cast<std::size_t>(i)] = detail::gaussian_integral(x_lo(1, i), x_lo(1, i + 1), s.center[1], s.sigma) / h;
      for (Index i0 = 0; i0 < shape[0]; ++i0)
        for (Index i1 = 0; i1 < shape[1]; ++i1)
          set(i0, i1, s.value * g0[static_cast<std::size_t>(i0)] * g1[static_cast<std::size_t>(i1)]);
      break;
    }
    case Kind::indicator_interval:
      for (Index i0 = 0; i0 < shape[0]; ++i0) {
        const double x = x_mid(0, i0);
        set(i0, 0, (x > s.a && x < s.b) ? 1.0 : 0.0);
      }
      break;
    case Kind::indicator_square:
      for (Index i0 = 0; i0 < shape[0]; ++i0)
        for (Index i1 = 0; i1 < shape[1]; ++i1) {
          bool in = std::abs(x_mid(0, i0) - s.center[0]) < 0.5 * s.side;
          if (s.dim == 2) in = in && std::abs(x_mid(1, i1) - s.center[1]) < 0.5 * s.side;
          set(i0, i1, in ? 1.0 : 0.0);
        }
      break;
    case Kind::indicator_disk:
      for (Index i0 = 0; i0 < shape[0]; ++i0)
        for (Index i1 = 0; i1 < shape[1]; ++i1) {
          const double dx = x_mid(0, i0) - s.center[0];
          const double dy = s.dim == 2 ? x_mid(1, i1) - s.center[1] : 0.0;
          set(i0, i1, dx * dx + dy * dy < s.radius * s.radius ? 1.0 : 0.0);
        }
      break;
    case Kind::checkerboard:
      for (Index i0 = 0; i0 < shape[0]; ++i0)
        for (Index i1 = 0; i1 < shape[1]; ++i1) {
          Index t = static_cast<Index>(std::floor((x_mid(0, i0) - origin[0]) / s.period));
          if (s.dim == 2) t += static_cast<Index>(std::floor((x_mid(1, i1) - origin[1]) / s.period));
          set(i0, i1, (t % 2 == 0) ? 0.0 : s.value);
        }
      break;
    case Kind::scaled_profile:
      for (Index i0 = 0; i0 < shape[0]; ++i0)
        for (Index i1 = 0; i1 < shape[1]; ++i1) {
          double integral;
          if (s.dim == 1) {
            integral = detail::power_profile_integral_1d(x_lo(0, i0), x_lo(0, i0 + 1), s.alpha, s.scale);
          } else {
            integral = detail::power_profile_integral_2d(x_lo(0, i0), x_lo(0, i0 + 1), x_lo(1, i1), x_lo(1, i1 + 1),
                                                         s.alpha, s.scale);
          }
          set(i0, i1, integral / (s.dim == 1 ? h : h * h));
        }
      break;
  }
  return GridFunction(s.dim, origin, h, shape, std::move(values), detail::exterior_values(s));
}

/// Whether the kind is a smooth (C^1 or better) profile, so that the recovery
/// family can be the constant family.
inline bool is_smooth(const FunctionSpec& s) {
  return s.kind == Kind::gaussian_smooth || s.kind == Kind::constant ||
         (s.kind == Kind::ramp && s.shoulder > 0.0 && detail::exterior_values(s) != std::array<double, 2>{0.0, 0.0});
}

/// Analytic decomposition of Df for the 1D profile kinds and the simple 2D
/// indicators; std::nullopt when the catalog does not declare one.
inline std::optional<DecompositionSpec> declared_decomposition(const FunctionSpec& s) {
  detail::validate(s);
  DecompositionSpec d;
  if (s.dim == 2) {
    const double w = s.box.hi[0] - s.box.lo[0], ht = s.box.hi[1] - s.box.lo[1];
    switch (s.kind) {
      case Kind::constant: d.jump = std::abs(s.value) * 2.0 * (w + ht); return d;
      case Kind::indicator_square: d.jump = 4.0 * s.side; return d;
      case Kind::indicator_disk: d.jump = 2.0 * std::numbers::pi * s.radius; return d;
      default: return std::nullopt;
    }
  }
  const double lo = s.box.lo[0], hi = s.box.hi[0];
  const auto ext = detail::exterior_values(s);
  auto boundary_jumps = [&](double inner_lo, double inner_hi) {
    return std::abs(inner_lo - ext[0]) + std::abs(ext[1] - inner_hi);
  };
  auto ramp_variation = [&]() {
    const double len = s.b - s.a;
    const double r0 = detail::shouldered_clamp(lo - s.a, len, s.shoulder);
    const double r1 = detail::shouldered_clamp(hi - s.a, len, s.shoulder);
    return std::abs(s.slope) * (r1 - r0);
  };
  switch (s.kind) {
    case Kind::constant: d.jump = boundary_jumps(s.value, s.value); return d;
    case Kind::ramp:
      d.absolutely_continuous = ramp_variation();
      d.jump = boundary_jumps(detail::profile_1d(s, lo), detail::profile_1d(s, hi));
      return d;
    case Kind::step:
      d.jump = (s.position > lo && s.position < hi ? std::abs(s.right - s.left) : 0.0) +
               boundary_jumps(detail::profile_1d(s, lo), detail::profile_1d(s, hi));
      return d;
    case Kind::sbv_combo:
      d.absolutely_continuous = ramp_variation();
      for (const auto& j : s.jumps)
        if (j.position > lo && j.position < hi) d.jump += std::abs(j.height);
      d.jump += boundary_jumps(detail::profile_1d(s, lo), detail::profile_1d(s, hi));
      return d;
    case Kind::cantor:
      d.cantor = detail::cantor_iterate(hi, s.level) - detail::cantor_iterate(lo, s.level);
      d.jump = boundary_jumps(detail::cantor_iterate(lo, s.level), detail::cantor_iterate(hi, s.level));
      return d;
    case Kind::indicator_interval: d.jump = 2.0; return d;
    case Kind::indicator_square: d.jump = 2.0; return d;
    case Kind::indicator_disk: d.jump = 2.0; return d;
    case Kind::gaussian_smooth: {
      auto g = [&](double x) { return s.value * std::exp(-(x - s.center[0]) * (x - s.center[0]) / (2 * s.sigma * s.sigma)); };
      const double peak = (s.center[0] > lo && s.center[0] < hi) ? g(s.center[0]) : std::max(g(lo), g(hi));
      d.absolutely_continuous = std::abs(peak - g(lo)) + std::abs(peak - g(hi));
      d.jump = std::abs(g(lo)) + std::abs(g(hi));
      return d;
    }
    default: return std::nullopt;
  }
}

}  // namespace bmotv
