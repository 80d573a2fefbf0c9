#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/grid.hpp"

namespace bmotv {

/// An eps-cube: center, edge length and planar rotation angle (0 in 1D).
struct Cube {
  Vec center{0.0, 0.0};
  double eps = 1.0;
  double angle = 0.0;
};

/// Maps an angle into [0, pi/2); a square is invariant under quarter turns.
inline double normalize_angle(double angle) {
  constexpr double quarter = std::numbers::pi / 2.0;
  double a = std::fmod(angle, quarter);
  if (a < 0.0) a += quarter;
  if (a >= quarter - 1e-15) a = 0.0;
  return a;
}

inline Cube make_cube(Vec center, double eps, double angle = 0.0) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "cube side must be positive");
  return Cube{center, eps, normalize_angle(angle)};
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Polygon = std::vector<Point>;

/// Corners of a 2D cube in counter-clockwise order.
inline std::array<Point, 4> corners(const Cube& q) {
  const double c = std::cos(q.angle), s = std::sin(q.angle), r = 0.5 * q.eps;
  const std::array<std::array<double, 2>, 4> local{{{-r, -r}, {r, -r}, {r, r}, {-r, r}}};
  std::array<Point, 4> out;
  for (std::size_t k = 0; k < 4; ++k)
    out[k] = {q.center[0] + c * local[k][0] - s * local[k][1], q.center[1] + s * local[k][0] + c * local[k][1]};
  return out;
}

/// Half-width of the cube's projection on the x (or y) axis.
inline double axis_half_extent(const Cube& q) {
  return 0.5 * q.eps * (std::abs(std::cos(q.angle)) + std::abs(std::sin(q.angle)));
}

inline double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point& u = p[k];
    const Point& v = p[(k + 1) % p.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * std::abs(a);
}

/// Sutherland-Hodgman clip of `poly` by the half-plane n . p <= d.
inline Polygon clip_half_plane(const Polygon& poly, double nx, double ny, double d) {
  Polygon out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 2);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point& cur = poly[k];
    const Point& nxt = poly[(k + 1) % poly.size()];
    const double fc = nx * cur.x + ny * cur.y - d;
    const double fn = nx * nxt.x + ny * nxt.y - d;
    if (fc <= 0.0) out.push_back(cur);
    if ((fc < 0.0 && fn > 0.0) || (fc > 0.0 && fn < 0.0)) {
      const double t = fc / (fc - fn);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return out;
}

/// Area of the axis-aligned rectangle [x0,x1]x[y0,y1] inside the (rotated) cube.
/// Coordinates are taken relative to the cube center to limit cancellation.
inline double rect_cube_overlap(const Cube& q, double x0, double x1, double y0, double y1) {
  const double c = std::cos(q.angle), s = std::sin(q.angle), r = 0.5 * q.eps;
  x0 -= q.center[0];
  x1 -= q.center[0];
  y0 -= q.center[1];
  y1 -= q.center[1];
  // Fast accept / reject using the four corners in the cube frame.
  const std::array<Point, 4> rc{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  bool all_in = true;
  for (const auto& p : rc) {
    const double u = c * p.x + s * p.y, v = -s * p.x + c * p.y;
    if (std::abs(u) > r || std::abs(v) > r) {
      all_in = false;
      break;
    }
  }
  if (all_in) return (x1 - x0) * (y1 - y0);
  Polygon poly(rc.begin(), rc.end());
  poly = clip_half_plane(poly, c, s, r);
  poly = clip_half_plane(poly, -c, -s, r);
  poly = clip_half_plane(poly, -s, c, r);
  poly = clip_half_plane(poly, s, -c, r);
  return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

/// Whether two cubes have interiors of positive measure in common.
///
/// Separating-axis test over the edge normals of both cubes; contact along a
/// face or corner (overlap <= tol on some axis) counts as disjoint.
inline bool cubes_overlap(const Cube& p, const Cube& q, int dim, double tol = 1e-12) {
  const double scale_tol = tol * (1.0 + std::max(p.eps, q.eps));
  if (dim == 1) {
    const double gap = std::abs(p.center[0] - q.center[0]) - 0.5 * (p.eps + q.eps);
    return gap < -scale_tol;
  }
  const double dx = q.center[0] - p.center[0], dy = q.center[1] - p.center[1];
  if (dx * dx + dy * dy >= 0.5 * (p.eps + q.eps) * (p.eps + q.eps)) return false;
  for (const double theta : {p.angle, p.angle + std::numbers::pi / 2.0, q.angle, q.angle + std::numbers::pi / 2.0}) {
    const double ux = std::cos(theta), uy = std::sin(theta);
    const double dist = std::abs(dx * ux + dy * uy);
    auto half = [&](const Cube& k) {
      const double rel = k.angle - theta;
      return 0.5 * k.eps * (std::abs(std::cos(rel)) + std::abs(std::sin(rel)));
    };
    if (half(p) + half(q) - dist <= scale_tol) return false;
  }
  return true;
}

/// Point membership in the open cube.
inline bool cube_contains(const Cube& q, double x, double y, int dim) {
  if (dim == 1) return std::abs(x - q.center[0]) < 0.5 * q.eps;
  const double c = std::cos(q.angle), s = std::sin(q.angle);
  const double px = x - q.center[0], py = y - q.center[1];
  return std::abs(c * px + s * py) < 0.5 * q.eps && std::abs(-s * px + c * py) < 0.5 * q.eps;
}

struct CellWeight {
  IVec cell{0, 0};
  double measure = 0.0;
};

/// Exact measures of cell intersect cube for every lattice cell the cube meets.
///
/// Cells outside f's bounding box are included (with their geometric measure);
/// their value is the exterior value of f.
inline std::vector<CellWeight> cell_overlap_weights(const Cube& q, const GridFunction& f) {
  std::vector<CellWeight> out;
  const double h = f.h();
  if (f.dim() == 1) {
    const double lo = q.center[0] - 0.5 * q.eps, hi = q.center[0] + 0.5 * q.eps;
    const Index i0 = static_cast<Index>(std::floor((lo - f.origin()[0]) / h));
    const Index i1 = static_cast<Index>(std::ceil((hi - f.origin()[0]) / h));
    for (Index i = i0; i < i1; ++i) {
      const double c0 = f.cell_lo(0, i);
      const double len = std::min(c0 + h, hi) - std::max(c0, lo);
      if (len > 0.0) out.push_back({{i, 0}, len});
    }
    return out;
  }
  const double ext = axis_half_extent(q);
  IVec lo{0, 0}, hi{0, 0};
  for (int a = 0; a < 2; ++a) {
    lo[a] = static_cast<Index>(std::floor((q.center[a] - ext - f.origin()[a]) / h));
    hi[a] = static_cast<Index>(std::ceil((q.center[a] + ext - f.origin()[a]) / h));
  }
  if (q.angle == 0.0) {
    const double r = 0.5 * q.eps;
    for (Index i0 = lo[0]; i0 < hi[0]; ++i0) {
      const double a0 = f.cell_lo(0, i0);
      const double lx = std::min(a0 + h, q.center[0] + r) - std::max(a0, q.center[0] - r);
      if (lx <= 0.0) continue;
      for (Index i1 = lo[1]; i1 < hi[1]; ++i1) {
        const double b0 = f.cell_lo(1, i1);
        const double ly = std::min(b0 + h, q.center[1] + r) - std::max(b0, q.center[1] - r);
        if (ly > 0.0) out.push_back({{i0, i1}, lx * ly});
      }
    }
    return out;
  }
  for (Index i0 = lo[0]; i0 < hi[0]; ++i0) {
    const double a0 = f.cell_lo(0, i0);
    for (Index i1 = lo[1]; i1 < hi[1]; ++i1) {
      const double b0 = f.cell_lo(1, i1);
      const double m = rect_cube_overlap(q, a0, a0 + h, b0, b0 + h);
      if (m > 0.0) out.push_back({{i0, i1}, m});
    }
  }
  return out;
}

}  // namespace bmotv
