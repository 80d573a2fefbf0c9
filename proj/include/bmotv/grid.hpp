#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/lattice.hpp"

namespace bmotv {

using Index = std::int64_t;
using Vec = std::array<double, 2>;
using IVec = std::array<Index, 2>;

/// Axis-aligned box [lo, hi] in domain units. Only the first `dim` axes are used.
struct Box {
  Vec lo{0.0, 0.0};
  Vec hi{0.0, 0.0};
};

/// A function that is constant on every cell of a uniform grid.
///
/// Cell (i0, i1) covers [origin0 + i0 h, origin0 + (i0+1) h) x [origin1 + i1 h, ...).
/// Values are stored row-major with the last axis fastest: index = i0 * shape1 + i1.
/// Outside the bounding box the function equals its exterior constants. In 2D
/// the exterior is always 0; in 1D the left and right tails may carry distinct
/// constants so that monotone profiles such as the Cantor staircase are
/// represented with their true limits (the default is 0 on both sides).
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(int dim, Vec origin, double h, IVec shape, std::vector<double> values,
               std::array<double, 2> exterior = {0.0, 0.0})
      : dim_(dim), origin_(origin), h_(h), shape_(shape), values_(std::move(values)), exterior_(exterior) {
    if (dim_ != 1 && dim_ != 2)
      throw Error(ErrorCode::dimension_unsupported, "dim must be 1 or 2, got " + std::to_string(dim_));
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(ErrorCode::invalid_argument, "h must be positive and finite");
    if (dim_ == 1) {
      shape_[1] = 1;
      origin_[1] = 0.0;
    }
    if (shape_[0] <= 0 || shape_[1] <= 0) throw Error(ErrorCode::invalid_argument, "shape must be positive");
    if (static_cast<Index>(values_.size()) != shape_[0] * shape_[1])
      throw Error(ErrorCode::invalid_argument, "values length " + std::to_string(values_.size()) +
                                                   " does not match shape product " +
                                                   std::to_string(shape_[0] * shape_[1]));
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite grid value");
    for (double e : exterior_)
      if (!std::isfinite(e)) throw Error(ErrorCode::invalid_argument, "non-finite exterior value");
    if (dim_ == 2 && (exterior_[0] != 0.0 || exterior_[1] != 0.0))
      throw Error(ErrorCode::invalid_argument, "2D grids are extended by zero");
  }

  int dim() const { return dim_; }
  const Vec& origin() const { return origin_; }
  double h() const { return h_; }
  const IVec& shape() const { return shape_; }
  const std::vector<double>& values() const { return values_; }
  const std::array<double, 2>& exterior() const { return exterior_; }
  bool zero_exterior() const { return exterior_[0] == 0.0 && exterior_[1] == 0.0; }
  Index size() const { return static_cast<Index>(values_.size()); }
  double cell_measure() const { return dim_ == 1 ? h_ : h_ * h_; }
  double face_measure() const { return dim_ == 1 ? 1.0 : h_; }

  bool in_box(Index i0, Index i1 = 0) const {
    return i0 >= 0 && i0 < shape_[0] && i1 >= 0 && i1 < shape_[1];
  }

  /// Value on cell (i0, i1); indices outside the box return the exterior value.
  double at(Index i0, Index i1 = 0) const {
    if (dim_ == 1) {
      if (i0 < 0) return exterior_[0];
      if (i0 >= shape_[0]) return exterior_[1];
      return values_[static_cast<std::size_t>(i0)];
    }
    if (!in_box(i0, i1)) return 0.0;
    return values_[static_cast<std::size_t>(i0 * shape_[1] + i1)];
  }

  double cell_lo(int axis, Index i) const { return origin_[axis] + static_cast<double>(i) * h_; }
  double cell_center(int axis, Index i) const { return origin_[axis] + (static_cast<double>(i) + 0.5) * h_; }

  Box box() const {
    Box b;
    for (int a = 0; a < dim_; ++a) {
      b.lo[a] = origin_[a];
      b.hi[a] = origin_[a] + static_cast<double>(shape_[a]) * h_;
    }
    return b;
  }

  /// Lattice index of the cell boundary at coordinate x (x must lie on the lattice).
  Index node_index(int axis, double x, ErrorCode code = ErrorCode::incompatible_lattice) const {
    return require_steps(x - origin_[axis], h_, code, "coordinate offset");
  }

 private:
  int dim_ = 1;
  Vec origin_{0.0, 0.0};
  double h_ = 1.0;
  IVec shape_{1, 1};
  std::vector<double> values_{0.0};
  std::array<double, 2> exterior_{0.0, 0.0};
};

/// Index offset of g's lattice relative to f's: cell i of g is cell i + offset of f.
inline IVec lattice_offset(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::incompatible_lattice, "dimension mismatch");
  if (std::abs(f.h() - g.h()) > 1e-12 * f.h()) throw Error(ErrorCode::incompatible_lattice, "spacing mismatch");
  IVec off{0, 0};
  for (int a = 0; a < f.dim(); ++a) {
    auto s = lattice_steps(g.origin()[a] - f.origin()[a], f.h());
    if (!s) throw Error(ErrorCode::incompatible_lattice, "origins differ by a non-multiple of h");
    off[a] = *s;
  }
  return off;
}

/// Half-open index range [lo, hi) of the cells of f that meet `region`.
inline std::pair<IVec, IVec> cells_in_region(const GridFunction& f, const Box& region) {
  IVec lo{0, 0}, hi{1, 1};
  for (int a = 0; a < f.dim(); ++a) {
    const double r0 = (region.lo[a] - f.origin()[a]) / f.h();
    const double r1 = (region.hi[a] - f.origin()[a]) / f.h();
    lo[a] = static_cast<Index>(std::floor(r0 + kLatticeTol));
    hi[a] = static_cast<Index>(std::ceil(r1 - kLatticeTol));
  }
  return {lo, hi};
}

/// Measure of cell (i0,i1) of f inside region.
inline double cell_fraction_in(const GridFunction& f, const Box& region, Index i0, Index i1) {
  double m = 1.0;
  const IVec idx{i0, i1};
  for (int a = 0; a < f.dim(); ++a) {
    const double c0 = f.cell_lo(a, idx[a]);
    const double len = std::min(c0 + f.h(), region.hi[a]) - std::max(c0, region.lo[a]);
    if (len <= 0.0) return 0.0;
    m *= len;
  }
  return m;
}

/// Union bounding box of two grids (used for integrals over all of R^n).
inline Box union_box(const GridFunction& f, const GridFunction& g) {
  Box a = f.box(), b = g.box(), u;
  for (int k = 0; k < f.dim(); ++k) {
    u.lo[k] = std::min(a.lo[k], b.lo[k]);
    u.hi[k] = std::max(a.hi[k], b.hi[k]);
  }
  return u;
}

namespace detail {

template <class Fn>
double integrate_cells(const GridFunction& f, const Box& region, Fn&& integrand) {
  auto [lo, hi] = cells_in_region(f, region);
  double total = 0.0;
  for (Index i0 = lo[0]; i0 < hi[0]; ++i0)
    for (Index i1 = lo[1]; i1 < hi[1]; ++i1) {
      const double w = cell_fraction_in(f, region, i0, i1);
      if (w > 0.0) total += integrand(i0, i1) * w;
    }
  return total;
}

}  // namespace detail

/// Integral of |f - g| over region. Exact for the piecewise-constant representation.
inline double l1_distance(const GridFunction& f, const GridFunction& g, const Box& region) {
  const IVec off = lattice_offset(f, g);
  return detail::integrate_cells(f, region, [&](Index i0, Index i1) {
    return std::abs(f.at(i0, i1) - g.at(i0 - off[0], i1 - off[1]));
  });
}

/// (integral of |f|^p over region)^(1/p).
inline double lp_norm(const GridFunction& f, double p, const Box& region) {
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "p must be >= 1");
  const double s = detail::integrate_cells(f, region, [&](Index i0, Index i1) {
    return std::pow(std::abs(f.at(i0, i1)), p);
  });
  return std::pow(s, 1.0 / p);
}

/// Sum of values times cell measure over the bounding box.
inline double mass(const GridFunction& f) {
  return std::accumulate(f.values().begin(), f.values().end(), 0.0) * f.cell_measure();
}

}  // namespace bmotv
