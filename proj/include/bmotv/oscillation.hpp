#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/geometry.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/parallel.hpp"

namespace bmotv {

enum class OrientationMode { axis_aligned, rotated };

/// A collection of eps-cubes meant to be pairwise interior-disjoint.
struct CubeFamily {
  std::vector<Cube> cubes;
  double eps = 1.0;
  OrientationMode orientation_mode = OrientationMode::axis_aligned;
};

/// Average of f over the cube (geometric normalizer eps^dim).
inline double mean(const GridFunction& f, const Cube& q) {
  const auto w = cell_overlap_weights(q, f);
  double s = 0.0;
  for (const auto& cw : w) s += f.at(cw.cell[0], cw.cell[1]) * cw.measure;
  return s / std::pow(q.eps, f.dim());
}

/// Mean oscillation: average over the cube of |f - mean of f over the cube|.
inline double oscillation(const GridFunction& f, const Cube& q) {
  const auto w = cell_overlap_weights(q, f);
  const double vol = std::pow(q.eps, f.dim());
  double s = 0.0;
  for (const auto& cw : w) s += f.at(cw.cell[0], cw.cell[1]) * cw.measure;
  const double m = s / vol;
  double dev = 0.0;
  for (const auto& cw : w) dev += std::abs(f.at(cw.cell[0], cw.cell[1]) - m) * cw.measure;
  return dev / vol;
}

/// Summed-area tables of the cell values and of the nonzero cell-to-cell jumps,
/// over the bounding box padded by `pad` cells on each side (exterior values
/// included). Queries use half-open cell index ranges.
class CellSums {
 public:
  CellSums(const GridFunction& f, Index pad) : f_(&f), pad_(pad) {
    n_[0] = f.shape()[0] + 2 * pad;
    n_[1] = f.dim() == 2 ? f.shape()[1] + 2 * pad : 1;
    const auto sz = static_cast<std::size_t>((n_[0] + 1) * (n_[1] + 1));
    sum_.assign(sz, 0.0);
    jx_.assign(sz, 0);
    jy_.assign(sz, 0);
    const Index off1 = f.dim() == 2 ? pad : 0;
    for (Index a = 0; a < n_[0]; ++a)
      for (Index b = 0; b < n_[1]; ++b) {
        const Index i0 = a - pad, i1 = b - off1;
        const double v = f.at(i0, i1);
        const int fx = (a + 1 < n_[0] && f.at(i0 + 1, i1) != v) ? 1 : 0;
        const int fy = (b + 1 < n_[1] && f.at(i0, i1 + 1) != v) ? 1 : 0;
        sum_[at(a + 1, b + 1)] = v + sum_[at(a, b + 1)] + sum_[at(a + 1, b)] - sum_[at(a, b)];
        jx_[at(a + 1, b + 1)] = fx + jx_[at(a, b + 1)] + jx_[at(a + 1, b)] - jx_[at(a, b)];
        jy_[at(a + 1, b + 1)] = fy + jy_[at(a, b + 1)] + jy_[at(a + 1, b)] - jy_[at(a, b)];
      }
  }

  /// Whether the index range lies inside the padded table.
  bool covers(IVec lo, IVec hi) const {
    const Index off1 = f_->dim() == 2 ? pad_ : 0;
    return lo[0] + pad_ >= 0 && hi[0] + pad_ <= n_[0] && lo[1] + off1 >= 0 && hi[1] + off1 <= n_[1];
  }

  double sum(IVec lo, IVec hi) const {
    auto [a0, b0, a1, b1] = local(lo, hi);
    return rect(sum_, a0, b0, a1, b1);
  }

  /// True when no two neighbouring cells in the range differ.
  bool constant(IVec lo, IVec hi) const {
    auto [a0, b0, a1, b1] = local(lo, hi);
    const Index jx = a1 - a0 > 1 ? rect(jx_, a0, b0, a1 - 1, b1) : 0;
    const Index jy = b1 - b0 > 1 ? rect(jy_, a0, b0, a1, b1 - 1) : 0;
    return jx == 0 && jy == 0;
  }

 private:
  std::size_t at(Index a, Index b) const { return static_cast<std::size_t>(a * (n_[1] + 1) + b); }

  std::array<Index, 4> local(IVec lo, IVec hi) const {
    const Index off1 = f_->dim() == 2 ? pad_ : 0;
    Index a0 = lo[0] + pad_, a1 = hi[0] + pad_, b0 = lo[1] + off1, b1 = hi[1] + off1;
    if (!(a0 >= 0 && a1 <= n_[0] && b0 >= 0 && b1 <= n_[1] && a0 <= a1 && b0 <= b1))
      throw Error(ErrorCode::invalid_argument, "CellSums query outside the padded table");
    return {a0, b0, a1, b1};
  }

  template <class T>
  T rect(const std::vector<T>& t, Index a0, Index b0, Index a1, Index b1) const {
    return t[at(a1, b1)] - t[at(a0, b1)] - t[at(a1, b0)] + t[at(a0, b0)];
  }

  const GridFunction* f_;
  Index pad_;
  IVec n_{0, 0};
  std::vector<double> sum_;
  std::vector<Index> jx_, jy_;
};

/// Oscillation over the lattice cube with lower cell index `lo` and m cells per side.
/// Uses the summed-area table for the mean when one is supplied.
inline double lattice_oscillation(const GridFunction& f, IVec lo, Index m, const CellSums* sums = nullptr) {
  const IVec hi{lo[0] + m, f.dim() == 2 ? lo[1] + m : lo[1] + 1};
  const double count = f.dim() == 2 ? static_cast<double>(m * m) : static_cast<double>(m);
  double s = 0.0;
  if (sums && sums->covers(lo, hi)) {
    if (sums->constant(lo, hi)) return 0.0;
    s = sums->sum(lo, hi);
  } else {
    for (Index i0 = lo[0]; i0 < hi[0]; ++i0)
      for (Index i1 = lo[1]; i1 < hi[1]; ++i1) s += f.at(i0, i1);
  }
  const double mu = s / count;
  double dev = 0.0;
  for (Index i0 = lo[0]; i0 < hi[0]; ++i0)
    for (Index i1 = lo[1]; i1 < hi[1]; ++i1) dev += std::abs(f.at(i0, i1) - mu);
  return dev / count;
}

/// Cube whose lower corner is lattice node `lo` and whose side is m cells.
inline Cube lattice_cube(const GridFunction& f, IVec lo, Index m) {
  const double eps = static_cast<double>(m) * f.h();
  Vec c{f.cell_lo(0, lo[0]) + 0.5 * eps, 0.0};
  if (f.dim() == 2) c[1] = f.cell_lo(1, lo[1]) + 0.5 * eps;
  return Cube{c, eps, 0.0};
}

/// True iff all cubes are pairwise interior-disjoint.
inline bool verify_disjoint(const CubeFamily& family, int dim) {
  const auto& cs = family.cubes;
  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cs[a].center[0] < cs[b].center[0]; });
  double max_eps = 0.0;
  for (const auto& q : cs) max_eps = std::max(max_eps, q.eps);
  const double reach = max_eps * std::sqrt(2.0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Cube& p = cs[order[i]];
      const Cube& q = cs[order[j]];
      if (q.center[0] - p.center[0] >= reach) break;
      if (cubes_overlap(p, q, dim)) return false;
    }
  return true;
}

/// eps^(dim-1) times the summed oscillations of a disjoint family.
inline double family_score(const GridFunction& f, const CubeFamily& family) {
  for (const auto& q : family.cubes)
    if (std::abs(q.eps - family.eps) > 1e-12 * family.eps)
      throw Error(ErrorCode::invalid_argument, "family cubes must share the side eps");
  if (!verify_disjoint(family, f.dim())) throw Error(ErrorCode::overlapping_family, "cubes overlap");
  std::vector<double> osc(family.cubes.size());
  parallel_for(osc.size(), [&](std::size_t k) { osc[k] = oscillation(f, family.cubes[k]); });
  double total = 0.0;
  for (double o : osc) total += o;
  return std::pow(family.eps, f.dim() - 1) * total;
}

}  // namespace bmotv
