#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/lattice.hpp"
#include "bmotv/parallel.hpp"

namespace bmotv {

/// The partition tau + {(0,delta)^n + delta z}.
struct Mesh {
  double delta = 1.0;
  Vec tau{0.0, 0.0};
  int dim = 1;

  /// Index of the mesh cell containing coordinate x along `axis`.
  Index cell_of(int axis, double x) const { return static_cast<Index>(std::floor((x - tau[axis]) / delta)); }

  /// Mesh cells meeting the open box, as a list of boxes.
  std::vector<Box> cells_meeting(const Box& b) const {
    IVec lo{0, 0}, hi{1, 1};
    for (int a = 0; a < dim; ++a) {
      lo[a] = static_cast<Index>(std::floor((b.lo[a] - tau[a]) / delta + kLatticeTol));
      hi[a] = static_cast<Index>(std::ceil((b.hi[a] - tau[a]) / delta - kLatticeTol));
    }
    std::vector<Box> out;
    for (Index k0 = lo[0]; k0 < hi[0]; ++k0)
      for (Index k1 = lo[1]; k1 < hi[1]; ++k1) {
        Box c;
        const IVec k{k0, k1};
        for (int a = 0; a < dim; ++a) {
          c.lo[a] = tau[a] + static_cast<double>(k[a]) * delta;
          c.hi[a] = c.lo[a] + delta;
        }
        out.push_back(c);
      }
    return out;
  }
};

namespace detail {

inline Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Mesh geometry in fine-lattice units: m fine cells per mesh cell, mesh cell k
/// along an axis covers fine cells [t + k m, t + (k+1) m).
struct LatticeMesh {
  Index m = 1;
  IVec t{0, 0};
  IVec k_lo{0, 0};
  IVec k_hi{1, 1};
};

inline LatticeMesh lattice_mesh(const GridFunction& f, double delta, Vec tau) {
  LatticeMesh lm;
  lm.m = require_steps(delta, f.h(), ErrorCode::delta_not_multiple_of_h, "delta");
  if (lm.m <= 0) throw Error(ErrorCode::delta_not_multiple_of_h, "delta must be positive");
  for (int a = 0; a < f.dim(); ++a) {
    lm.t[a] = require_steps(tau[a] - f.origin()[a], f.h(), ErrorCode::tau_not_on_lattice, "tau");
    lm.k_lo[a] = floor_div(-lm.t[a], lm.m);
    lm.k_hi[a] = floor_div(f.shape()[a] - 1 - lm.t[a], lm.m) + 1;
  }
  return lm;
}

}  // namespace detail

/// Piecewise-constant projection: each mesh cell gets the exact average of f on it.
/// The result lives on f's lattice over the union of mesh cells meeting f's box.
inline GridFunction project(const GridFunction& f, double delta, Vec tau) {
  const auto lm = detail::lattice_mesh(f, delta, tau);
  const int dim = f.dim();
  const Index m = lm.m;
  const Index n0 = lm.k_hi[0] - lm.k_lo[0];
  const Index n1 = dim == 2 ? lm.k_hi[1] - lm.k_lo[1] : 1;
  const Index base0 = lm.t[0] + lm.k_lo[0] * m;
  const Index base1 = dim == 2 ? lm.t[1] + lm.k_lo[1] * m : 0;
  const IVec shape{n0 * m, dim == 2 ? n1 * m : 1};
  std::vector<double> vals(static_cast<std::size_t>(shape[0] * shape[1]));
  const double count = dim == 2 ? static_cast<double>(m * m) : static_cast<double>(m);
  parallel_for(static_cast<std::size_t>(n0), [&](std::size_t k0s) {
    const Index k0 = static_cast<Index>(k0s);
    for (Index k1 = 0; k1 < n1; ++k1) {
      const Index lo0 = base0 + k0 * m, lo1 = base1 + k1 * m;
      const Index hi1 = dim == 2 ? lo1 + m : 1;
      double s = 0.0;
      for (Index i0 = lo0; i0 < lo0 + m; ++i0)
        for (Index i1 = lo1; i1 < hi1; ++i1) s += f.at(i0, i1);
      const double avg = s / count;
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < (dim == 2 ? m : 1); ++b)
          vals[static_cast<std::size_t>((k0 * m + a) * shape[1] + k1 * m + b)] = avg;
    }
  });
  Vec origin{f.cell_lo(0, base0), dim == 2 ? f.cell_lo(1, base1) : 0.0};
  return GridFunction(dim, origin, f.h(), shape, std::move(vals), f.exterior());
}

/// |Df|(R^n): sum of |jump| times face measure over all faces, including the
/// faces between the bounding box and the exterior.
inline double total_variation(const GridFunction& f) {
  const auto& s = f.shape();
  if (f.dim() == 1) {
    double tv = 0.0;
    for (Index i = -1; i < s[0]; ++i) tv += std::abs(f.at(i + 1) - f.at(i));
    return tv;
  }
  // one partial sum per row of axis 0 (rows -1 .. n0-1), reduced in order
  std::vector<double> rows(static_cast<std::size_t>(s[0] + 1), 0.0);
  parallel_for(rows.size(), [&](std::size_t r) {
    const Index i0 = static_cast<Index>(r) - 1;
    double acc = 0.0;
    for (Index i1 = 0; i1 < s[1]; ++i1) acc += std::abs(f.at(i0 + 1, i1) - f.at(i0, i1));
    if (i0 >= 0)
      for (Index i1 = -1; i1 < s[1]; ++i1) acc += std::abs(f.at(i0, i1 + 1) - f.at(i0, i1));
    rows[r] = acc;
  });
  double tv = 0.0;
  for (double r : rows) tv += r;
  return tv * f.h();
}

struct DirectionalTV {
  double signed_value = 0.0;
  double absolute = 0.0;
};

/// Directional variation D_e f and |Df| over the faces whose centers lie in the
/// closed region. Faces normals point along the positive axes.
inline DirectionalTV directional_tv(const GridFunction& f, Vec e, const Box& region) {
  double norm2 = 0.0;
  for (int a = 0; a < f.dim(); ++a) norm2 += e[a] * e[a];
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw Error(ErrorCode::non_unit_direction, "direction must be a unit vector");
  const double tol = kLatticeTol * f.h();
  auto inside = [&](int a, double x) { return x >= region.lo[a] - tol && x <= region.hi[a] + tol; };
  auto [lo, hi] = cells_in_region(f, region);
  DirectionalTV out;
  const double fm = f.face_measure();
  if (f.dim() == 1) {
    for (Index i = lo[0] - 1; i <= hi[0]; ++i) {
      const double x = f.cell_lo(0, i + 1);
      if (!inside(0, x)) continue;
      const double jump = f.at(i + 1) - f.at(i);
      out.signed_value += jump * e[0];
      out.absolute += std::abs(jump);
    }
    return out;
  }
  for (Index i0 = lo[0] - 1; i0 <= hi[0]; ++i0)
    for (Index i1 = lo[1] - 1; i1 <= hi[1]; ++i1) {
      const double v = f.at(i0, i1);
      // face between (i0,i1) and (i0+1,i1), center (x_{i0+1}, y_mid)
      if (inside(0, f.cell_lo(0, i0 + 1)) && inside(1, f.cell_center(1, i1))) {
        const double jump = f.at(i0 + 1, i1) - v;
        out.signed_value += jump * e[0] * fm;
        out.absolute += std::abs(jump) * fm;
      }
      if (inside(0, f.cell_center(0, i0)) && inside(1, f.cell_lo(1, i1 + 1))) {
        const double jump = f.at(i0, i1 + 1) - v;
        out.signed_value += jump * e[1] * fm;
        out.absolute += std::abs(jump) * fm;
      }
    }
  return out;
}

/// For each r: D_nu0 f(Q_r(x0)) / |Df|(Q_r(x0)) with Q_r(x0) the axis-aligned cube
/// of half-side r. NaN when |Df|(Q_r(x0)) = 0.
inline std::vector<double> blowup_ratio(const GridFunction& f, Vec x0, Vec nu0, const std::vector<double>& radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const Index steps = require_steps(r, f.h(), ErrorCode::radius_not_on_lattice, "radius");
    if (steps <= 0) throw Error(ErrorCode::radius_not_on_lattice, "radius must be positive");
    Box q;
    for (int a = 0; a < f.dim(); ++a) {
      q.lo[a] = x0[a] - r;
      q.hi[a] = x0[a] + r;
    }
    const auto d = directional_tv(f, nu0, q);
    out.push_back(d.absolute == 0.0 ? std::numeric_limits<double>::quiet_NaN() : d.signed_value / d.absolute);
  }
  return out;
}

/// Discrete triangular kernel with support (-width, width): k_j = (W - |j|) / W^2, W = width / h.
inline std::vector<double> triangular_kernel(Index w) {
  std::vector<double> k(static_cast<std::size_t>(2 * w - 1));
  const double w2 = static_cast<double>(w) * static_cast<double>(w);
  for (Index j = -(w - 1); j <= w - 1; ++j) k[static_cast<std::size_t>(j + w - 1)] = static_cast<double>(w - std::abs(j)) / w2;
  return k;
}

/// Convolution with the normalized triangular kernel (tensor product in 2D).
/// The box grows by `width` on every side.
inline GridFunction mollify(const GridFunction& f, double width) {
  const Index w = require_steps(width, f.h(), ErrorCode::width_not_on_lattice, "width");
  if (w <= 0) throw Error(ErrorCode::width_not_on_lattice, "width must be positive");
  const auto k = triangular_kernel(w);
  const int dim = f.dim();
  if (dim == 1) {
    const Index n = f.shape()[0] + 2 * w;
    std::vector<double> out(static_cast<std::size_t>(n));
    parallel_for(out.size(), [&](std::size_t o) {
      const Index i = static_cast<Index>(o) - w;
      double s = 0.0;
      for (Index j = -(w - 1); j <= w - 1; ++j) s += k[static_cast<std::size_t>(j + w - 1)] * f.at(i - j);
      out[o] = s;
    });
    return GridFunction(1, {f.origin()[0] - static_cast<double>(w) * f.h(), 0.0}, f.h(), {n, 1}, std::move(out),
                        f.exterior());
  }
  const Index n0 = f.shape()[0] + 2 * w, n1 = f.shape()[1] + 2 * w;
  // pass along axis 1 on the original rows, then along axis 0
  std::vector<double> tmp(static_cast<std::size_t>(f.shape()[0] * n1));
  parallel_for(static_cast<std::size_t>(f.shape()[0]), [&](std::size_t r) {
    const Index i0 = static_cast<Index>(r);
    for (Index o1 = 0; o1 < n1; ++o1) {
      const Index i1 = o1 - w;
      double s = 0.0;
      for (Index j = -(w - 1); j <= w - 1; ++j) s += k[static_cast<std::size_t>(j + w - 1)] * f.at(i0, i1 - j);
      tmp[static_cast<std::size_t>(i0 * n1 + o1)] = s;
    }
  });
  auto tmp_at = [&](Index i0, Index o1) {
    return (i0 < 0 || i0 >= f.shape()[0]) ? 0.0 : tmp[static_cast<std::size_t>(i0 * n1 + o1)];
  };
  std::vector<double> out(static_cast<std::size_t>(n0 * n1));
  parallel_for(static_cast<std::size_t>(n0), [&](std::size_t r) {
    const Index i0 = static_cast<Index>(r) - w;
    for (Index o1 = 0; o1 < n1; ++o1) {
      double s = 0.0;
      for (Index j = -(w - 1); j <= w - 1; ++j) s += k[static_cast<std::size_t>(j + w - 1)] * tmp_at(i0 - j, o1);
      out[static_cast<std::size_t>(static_cast<Index>(r) * n1 + o1)] = s;
    }
  });
  const double shift = static_cast<double>(w) * f.h();
  return GridFunction(2, {f.origin()[0] - shift, f.origin()[1] - shift}, f.h(), {n0, n1}, std::move(out));
}

}  // namespace bmotv
