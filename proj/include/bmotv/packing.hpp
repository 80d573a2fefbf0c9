#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bmotv/error.hpp"
#include "bmotv/geometry.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/lattice.hpp"
#include "bmotv/oscillation.hpp"
#include "bmotv/parallel.hpp"

namespace bmotv {

enum class Solver { dp1d, lattice, greedy, oracle };

inline std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::dp1d: return "dp1d";
    case Solver::lattice: return "lattice";
    case Solver::greedy: return "greedy";
    case Solver::oracle: return "oracle";
  }
  return "unknown";
}

inline Solver solver_from_string(std::string_view s) {
  for (Solver v : {Solver::dp1d, Solver::lattice, Solver::greedy, Solver::oracle})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::invalid_argument, "unknown solver '" + std::string(s) + "'");
}

enum class AngleSource { uniform, gradient, both };

inline std::string_view to_string(AngleSource s) {
  switch (s) {
    case AngleSource::uniform: return "uniform";
    case AngleSource::gradient: return "gradient";
    case AngleSource::both: return "both";
  }
  return "unknown";
}

inline AngleSource angle_source_from_string(std::string_view s) {
  for (AngleSource v : {AngleSource::uniform, AngleSource::gradient, AngleSource::both})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::invalid_argument, "unknown angle source '" + std::string(s) + "'");
}

struct PackingSolution {
  CubeFamily family;
  double score = 0.0;
  Solver solver = Solver::dp1d;
  double candidate_step = 0.0;
  bool certified_exact_over_candidates = false;
  std::map<std::string, std::string> metadata;
};

/// Candidate set and search options shared by the greedy and oracle solvers.
struct SolverOptions {
  double pitch = 0.0;  // center lattice pitch; 0 picks a default
  bool rotations = false;
  AngleSource angle_source = AngleSource::both;
  int uniform_angles = 4;      // angles k pi / (2 m), k < m
  double tie_tolerance = 0.0;  // relative score bucket for greedy ordering
  std::optional<Index> cap;    // cardinality limit
  std::uint64_t budget = std::uint64_t{1} << 20;  // oracle memo states
  std::optional<Box> contained_in;  // restrict to axis-aligned cubes inside this box
};

// Candidates with oscillation below this fraction of the best one are dropped.
inline constexpr double kPruneRatio = 1e-14;

namespace detail {

inline Index eps_steps(const GridFunction& f, double eps) {
  const Index m = require_steps(eps, f.h(), ErrorCode::eps_not_multiple_of_h, "eps");
  if (m <= 0) throw Error(ErrorCode::eps_not_multiple_of_h, "eps must be positive");
  return m;
}

inline std::string real_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline PackingSolution finish(const GridFunction& f, CubeFamily fam, Solver solver, double step, bool exact) {
  PackingSolution s;
  s.score = family_score(f, fam);
  s.family = std::move(fam);
  s.solver = solver;
  s.candidate_step = step;
  s.certified_exact_over_candidates = exact;
  return s;
}

/// Maximum-weight selection of disjoint length-m windows starting in [s0, s1],
/// window s covering cells [s, s+m). Returns chosen starts in increasing order.
inline std::vector<Index> interval_dp(const std::vector<double>& w, Index s0, Index m, std::optional<Index> cap) {
  const Index n = static_cast<Index>(w.size());
  std::vector<Index> chosen;
  if (n == 0) return chosen;
  auto weight = [&](Index k) { return w[static_cast<std::size_t>(k)]; };
  if (!cap) {
    std::vector<double> best(static_cast<std::size_t>(n + m + 1), 0.0);
    for (Index k = n - 1; k >= 0; --k) {
      const double take = weight(k) > 0.0 ? weight(k) + best[static_cast<std::size_t>(k + m)] : -1.0;
      best[static_cast<std::size_t>(k)] = std::max(best[static_cast<std::size_t>(k + 1)], take);
    }
    for (Index k = 0; k < n;) {
      const double take = weight(k) > 0.0 ? weight(k) + best[static_cast<std::size_t>(k + m)] : -1.0;
      if (take > best[static_cast<std::size_t>(k + 1)]) {
        chosen.push_back(s0 + k);
        k += m;
      } else {
        ++k;
      }
    }
    return chosen;
  }
  const Index c = std::max<Index>(0, *cap);
  const auto stride = static_cast<std::size_t>(c + 1);
  std::vector<double> best(static_cast<std::size_t>(n + m + 1) * stride, 0.0);
  auto B = [&](Index k, Index r) -> double& { return best[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(r)]; };
  for (Index k = n - 1; k >= 0; --k)
    for (Index r = 0; r <= c; ++r) {
      double v = B(k + 1, r);
      if (r > 0 && weight(k) > 0.0) v = std::max(v, weight(k) + B(k + m, r - 1));
      B(k, r) = v;
    }
  Index r = c;
  for (Index k = 0; k < n && r > 0;) {
    if (weight(k) > 0.0 && weight(k) + B(k + m, r - 1) > B(k + 1, r)) {
      chosen.push_back(s0 + k);
      k += m;
      --r;
    } else {
      ++k;
    }
  }
  return chosen;
}

inline PackingSolution dp_solve(const GridFunction& f, double eps, Index s0, Index s1, std::optional<Index> cap) {
  const Index m = eps_steps(f, eps);
  const CellSums sums(f, m + 2);
  std::vector<double> w(static_cast<std::size_t>(std::max<Index>(0, s1 - s0 + 1)), 0.0);
  parallel_for(w.size(), [&](std::size_t k) {
    w[k] = lattice_oscillation(f, {s0 + static_cast<Index>(k), 0}, m, &sums);
  });
  const double top = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  for (auto& v : w)
    if (v < kPruneRatio * top) v = 0.0;
  CubeFamily fam;
  fam.eps = static_cast<double>(m) * f.h();
  for (Index s : interval_dp(w, s0, m, cap)) fam.cubes.push_back(lattice_cube(f, {s, 0}, m));
  auto sol = finish(f, std::move(fam), Solver::dp1d, f.h(), true);
  sol.metadata["candidates"] = std::to_string(w.size());
  if (cap) sol.metadata["cap"] = std::to_string(*cap);
  return sol;
}

}  // namespace detail

/// Cardinality limit for I_eps: floor(eps^(1-n)), at least 1.
inline Index cardinality_cap(double eps, int dim) {
  const double c = std::pow(eps, 1 - dim);
  return std::max<Index>(1, static_cast<Index>(std::floor(c * (1.0 + 1e-12))));
}

/// Exact K_eps in 1D over intervals with endpoints on the h-lattice.
inline PackingSolution keps_1d_dp(const GridFunction& f, double eps, std::optional<Index> cap = std::nullopt) {
  if (f.dim() != 1) throw Error(ErrorCode::dimension_unsupported, "dp1d needs a 1D grid");
  const Index m = detail::eps_steps(f, eps);
  return detail::dp_solve(f, eps, -m + 1, f.shape()[0] - 1, cap);
}

/// Full partitions tau + Q_eps for each offset tau; keeps the best one.
inline PackingSolution keps_lattice(const GridFunction& f, double eps, const std::vector<Vec>& offsets) {
  const Index m = detail::eps_steps(f, eps);
  const CellSums sums(f, m + 2);
  const int dim = f.dim();
  struct Eval {
    double total = 0.0;
    std::vector<IVec> cubes;
  };
  std::vector<Eval> evals(offsets.size());
  std::vector<IVec> steps(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k)
    for (int a = 0; a < dim; ++a)
      steps[k][a] = require_steps(offsets[k][a] - f.origin()[a], f.h(), ErrorCode::offset_not_on_lattice, "offset");
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    IVec lo{0, 0}, hi{1, 1};
    for (int a = 0; a < dim; ++a) {
      const Index t = steps[k][a];
      lo[a] = detail::floor_div(-t, m);
      hi[a] = detail::floor_div(f.shape()[a] - 1 - t, m) + 1;
    }
    std::vector<std::pair<IVec, double>> cells;
    for (Index k0 = lo[0]; k0 < hi[0]; ++k0)
      for (Index k1 = lo[1]; k1 < hi[1]; ++k1) cells.push_back({{steps[k][0] + k0 * m, dim == 2 ? steps[k][1] + k1 * m : 0}, 0.0});
    parallel_for(cells.size(), [&](std::size_t c) { cells[c].second = lattice_oscillation(f, cells[c].first, m, &sums); });
    double top = 0.0;
    for (auto& c : cells) top = std::max(top, c.second);
    for (auto& c : cells)
      if (c.second > 0.0 && c.second >= kPruneRatio * top) {
        evals[k].total += c.second;
        evals[k].cubes.push_back(c.first);
      }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < evals.size(); ++k)
    if (evals[k].total > evals[best].total) best = k;
  CubeFamily fam;
  fam.eps = static_cast<double>(m) * f.h();
  if (!evals.empty())
    for (const auto& lo : evals[best].cubes) fam.cubes.push_back(lattice_cube(f, lo, m));
  auto sol = detail::finish(f, std::move(fam), Solver::lattice, f.h(), false);
  sol.metadata["offsets"] = std::to_string(offsets.size());
  if (!offsets.empty()) {
    sol.metadata["best_offset"] = detail::real_str(offsets[best][0]);
    if (dim == 2) sol.metadata["best_offset"] += "," + detail::real_str(offsets[best][1]);
  }
  return sol;
}

/// All lattice offsets in [0, eps)^n at the given pitch, relative to f's origin.
inline std::vector<Vec> lattice_offsets(const GridFunction& f, double eps, double pitch) {
  const Index m = detail::eps_steps(f, eps);
  const Index p = require_steps(pitch, f.h(), ErrorCode::offset_not_on_lattice, "pitch");
  if (p <= 0) throw Error(ErrorCode::offset_not_on_lattice, "pitch must be positive");
  std::vector<Vec> out;
  for (Index a = 0; a < m; a += p)
    for (Index b = 0; b < (f.dim() == 2 ? m : 1); b += p)
      out.push_back({f.cell_lo(0, a), f.dim() == 2 ? f.cell_lo(1, b) : 0.0});
  return out;
}

struct Candidate {
  Cube cube;
  double osc = 0.0;
  bool from_gradient = false;
};

namespace detail {

inline Index default_pitch_steps(const GridFunction& f, Index m) {
  return f.dim() == 1 ? 1 : std::max<Index>(1, m / 8);
}

/// Dominant jump orientation inside the axis-aligned index box [lo, hi):
/// telescoped sums of the cell-to-cell differences along each axis.
inline std::optional<double> gradient_angle(const GridFunction& f, IVec lo, IVec hi) {
  double gx = 0.0, gy = 0.0;
  for (Index i1 = lo[1]; i1 < hi[1]; ++i1) gx += f.at(hi[0] - 1, i1) - f.at(lo[0], i1);
  for (Index i0 = lo[0]; i0 < hi[0]; ++i0) gy += f.at(i0, hi[1] - 1) - f.at(i0, lo[1]);
  if (gx == 0.0 && gy == 0.0) return std::nullopt;
  return normalize_angle(std::atan2(gy, gx));
}

}  // namespace detail

/// Candidate cubes on a center lattice of the given pitch, with their
/// oscillations, pruned and sorted for selection.
///
/// Centers are origin + eps/2 + k * pitch, so axis-aligned candidates have
/// lattice corners. Order: score (or score bucket) descending, then center
/// lexicographically, then angle.
inline std::vector<Candidate> build_candidates(const GridFunction& f, double eps, const SolverOptions& opt,
                                               double* pitch_used = nullptr) {
  const int dim = f.dim();
  const Index m = detail::eps_steps(f, eps);
  const Index p = opt.pitch > 0.0 ? require_steps(opt.pitch, f.h(), ErrorCode::offset_not_on_lattice, "pitch")
                                  : detail::default_pitch_steps(f, m);
  if (p <= 0) throw Error(ErrorCode::offset_not_on_lattice, "pitch must be positive");
  if (pitch_used) *pitch_used = static_cast<double>(p) * f.h();
  const bool rotate = opt.rotations && dim == 2 && !opt.contained_in;
  const double reach = rotate ? 0.5 * eps * std::numbers::sqrt2 : 0.5 * eps;
  const Index slack = static_cast<Index>(std::ceil(reach / f.h())) + 2;
  const CellSums sums(f, slack + m + 2);

  // lower-corner lattice index ranges, in steps of p
  IVec klo{0, 0}, khi{0, 0};
  for (int a = 0; a < dim; ++a) {
    Index lo = -m - slack, hi = f.shape()[a] + slack;
    if (opt.contained_in) {
      lo = f.node_index(a, opt.contained_in->lo[a]);
      hi = f.node_index(a, opt.contained_in->hi[a]) - m;
    }
    // inside a box the first corner is the box corner; otherwise the lattice through the origin
    klo[a] = opt.contained_in ? lo : detail::floor_div(lo, p) * p;
    khi[a] = hi;
  }
  std::vector<IVec> corners;
  for (Index i0 = klo[0]; i0 <= khi[0]; i0 += p)
    for (Index i1 = (dim == 2 ? klo[1] : 0); i1 <= (dim == 2 ? khi[1] : 0); i1 += (dim == 2 ? p : 1)) corners.push_back({i0, i1});

  std::vector<double> uniform;
  if (rotate && opt.angle_source != AngleSource::gradient)
    for (int k = 1; k < opt.uniform_angles; ++k) uniform.push_back(std::numbers::pi * k / (2.0 * opt.uniform_angles));
  const bool use_gradient = rotate && opt.angle_source != AngleSource::uniform;

  std::vector<std::vector<Candidate>> per(corners.size());
  parallel_for(corners.size(), [&](std::size_t c) {
    const IVec lo = corners[c];
    const IVec hi{lo[0] + m, dim == 2 ? lo[1] + m : 1};
    const Cube axis = lattice_cube(f, lo, m);
    auto& out = per[c];
    const double o = lattice_oscillation(f, lo, m, &sums);
    if (o > 0.0) out.push_back({axis, o, false});
    if (!rotate) return;
    const IVec blo{lo[0] + m / 2 - slack, lo[1] + m / 2 - slack}, bhi{lo[0] + m / 2 + slack, lo[1] + m / 2 + slack};
    if (sums.covers(blo, bhi) && sums.constant(blo, bhi)) return;
    std::vector<double> angles = uniform;
    if (use_gradient)
      if (auto g = detail::gradient_angle(f, lo, hi); g && *g != 0.0) angles.push_back(*g);
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const Cube q{axis.center, axis.eps, angles[k]};
      const double v = oscillation(f, q);
      if (v > 0.0) out.push_back({q, v, use_gradient && k + 1 == angles.size() && k >= uniform.size()});
    }
  });
  std::vector<Candidate> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  double top = 0.0;
  for (const auto& c : all) top = std::max(top, c.osc);
  std::erase_if(all, [&](const Candidate& c) { return c.osc < kPruneRatio * top; });
  const double bucket = opt.tie_tolerance > 0.0 ? opt.tie_tolerance * top : 0.0;
  auto key = [&](const Candidate& c) { return bucket > 0.0 ? std::floor(c.osc / bucket) : c.osc; };
  std::stable_sort(all.begin(), all.end(), [&](const Candidate& a, const Candidate& b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    if (a.cube.center[0] != b.cube.center[0]) return a.cube.center[0] < b.cube.center[0];
    if (a.cube.center[1] != b.cube.center[1]) return a.cube.center[1] < b.cube.center[1];
    return a.cube.angle < b.cube.angle;
  });
  return all;
}

namespace detail {

/// Uniform bins of side >= the largest center distance at which two cubes can overlap.
class SpatialIndex {
 public:
  SpatialIndex(double eps, int dim) : cell_(eps * std::numbers::sqrt2), dim_(dim) {}

  bool conflicts(const Cube& q, const std::vector<Cube>& placed) const {
    const auto [a, b] = bin(q);
    for (Index da = -1; da <= 1; ++da)
      for (Index db = (dim_ == 2 ? -1 : 0); db <= (dim_ == 2 ? 1 : 0); ++db) {
        auto it = bins_.find(key(a + da, b + db));
        if (it == bins_.end()) continue;
        for (std::size_t idx : it->second)
          if (cubes_overlap(q, placed[idx], dim_)) return true;
      }
    return false;
  }

  void insert(const Cube& q, std::size_t idx) {
    const auto [a, b] = bin(q);
    bins_[key(a, b)].push_back(idx);
  }

 private:
  std::pair<Index, Index> bin(const Cube& q) const {
    return {static_cast<Index>(std::floor(q.center[0] / cell_)), static_cast<Index>(std::floor(q.center[1] / cell_))};
  }
  static std::uint64_t key(Index a, Index b) {
    return (static_cast<std::uint64_t>(a) << 32) ^ (static_cast<std::uint64_t>(b) & 0xffffffffULL);
  }

  double cell_;
  int dim_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> bins_;
};

inline std::vector<std::size_t> greedy_select(const std::vector<Candidate>& cands, double eps, int dim,
                                              std::optional<Index> cap) {
  std::vector<std::size_t> chosen;
  std::vector<Cube> placed;
  SpatialIndex index(eps, dim);
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (cap && static_cast<Index>(chosen.size()) >= *cap) break;
    if (index.conflicts(cands[k].cube, placed)) continue;
    index.insert(cands[k].cube, placed.size());
    placed.push_back(cands[k].cube);
    chosen.push_back(k);
  }
  return chosen;
}

inline void describe_candidates(PackingSolution& sol, const SolverOptions& opt, std::size_t count, std::size_t gradient) {
  sol.metadata["candidates"] = std::to_string(count);
  sol.metadata["rotations"] = opt.rotations ? "on" : "off";
  if (opt.rotations) {
    sol.metadata["angle_source"] = std::string(to_string(opt.angle_source));
    sol.metadata["uniform_angles"] = std::to_string(opt.uniform_angles);
    sol.metadata["gradient_candidates"] = std::to_string(gradient);
  }
  if (opt.cap) sol.metadata["cap"] = std::to_string(*opt.cap);
}

}  // namespace detail

/// Greedy packing: take candidates in order, skipping any that overlap a pick.
inline PackingSolution keps_greedy(const GridFunction& f, double eps, const SolverOptions& opt = {}) {
  double pitch = 0.0;
  const auto cands = build_candidates(f, eps, opt, &pitch);
  CubeFamily fam;
  fam.eps = eps;
  fam.orientation_mode = opt.rotations && f.dim() == 2 ? OrientationMode::rotated : OrientationMode::axis_aligned;
  std::size_t gradient = 0;
  for (std::size_t k : detail::greedy_select(cands, eps, f.dim(), opt.cap)) fam.cubes.push_back(cands[k].cube);
  for (const auto& c : cands) gradient += c.from_gradient ? 1 : 0;
  auto sol = detail::finish(f, std::move(fam), Solver::greedy, pitch, false);
  detail::describe_candidates(sol, opt, cands.size(), gradient);
  sol.metadata["tie_tolerance"] = detail::real_str(opt.tie_tolerance);
  return sol;
}

namespace detail {

/// Depth-first branch and bound for maximum-weight independent sets in the
/// candidate overlap graph. The bound sums, over a partition of the candidates
/// into cliques (centers sharing a bin small enough that any two cubes in it
/// overlap), the heaviest still-available candidate of each clique.
class SweepSearch {
 public:
  SweepSearch(const std::vector<Candidate>& cands, int dim, std::optional<Index> cap, std::uint64_t budget)
      : n_(cands.size()), words_((n_ + 63) / 64), cap_(cap), budget_(budget) {
    // sweep order: the set of still-available candidates then only depends on a thin frontier,
    // so memoizing on it keeps the state count small
    order_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) order_[k] = k;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = cands[a].cube;
      const auto& cb = cands[b].cube;
      if (ca.center[0] != cb.center[0]) return ca.center[0] < cb.center[0];
      if (ca.center[1] != cb.center[1]) return ca.center[1] < cb.center[1];
      return ca.angle < cb.angle;
    });
    w_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) w_[k] = cands[order_[k]].osc;
    nbr_.assign(n_ * words_, 0);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (cubes_overlap(cands[order_[a]].cube, cands[order_[b]].cube, dim)) {
          nbr_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
          nbr_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
        }
  }

  void run() {
    State s(words_ + 1, 0);
    for (std::size_t k = 0; k < n_; ++k) s[k / 64] |= std::uint64_t{1} << (k % 64);
    s[words_] = static_cast<std::uint64_t>(cap_ ? *cap_ : static_cast<Index>(n_));
    best_ = value(s);
    // walk the memo back down
    while (true) {
      const std::size_t first = lowest(s);
      if (first == n_ || s[words_] == 0) break;
      const State in = include(s, first), out = exclude(s, first);
      if (w_[first] + value(in) > value(out)) {
        best_set_.push_back(first);
        s = in;
      } else {
        s = out;
      }
    }
  }

  /// Indices into the original candidate list.
  std::vector<std::size_t> best() const {
    std::vector<std::size_t> out;
    for (std::size_t j : best_set_) out.push_back(order_[j]);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::uint64_t nodes() const { return memo_.size(); }

 private:
  // availability bits, then the remaining cardinality room
  using State = std::vector<std::uint64_t>;
  struct StateHash {
    std::size_t operator()(const State& s) const {
      std::uint64_t h = 1469598103934665603ull;
      for (std::uint64_t x : s) h = (h ^ x) * 1099511628211ull + (h >> 29);
      return static_cast<std::size_t>(h);
    }
  };

  std::size_t lowest(const State& s) const {
    for (std::size_t wd = 0; wd < words_; ++wd)
      if (s[wd]) return wd * 64 + static_cast<std::size_t>(__builtin_ctzll(s[wd]));
    return n_;
  }
  State include(const State& s, std::size_t k) const {
    State t(s);
    for (std::size_t wd = 0; wd < words_; ++wd) t[wd] &= ~nbr_[k * words_ + wd];
    t[k / 64] &= ~(std::uint64_t{1} << (k % 64));
    --t[words_];
    return t;
  }
  State exclude(const State& s, std::size_t k) const {
    State t(s);
    t[k / 64] &= ~(std::uint64_t{1} << (k % 64));
    return t;
  }

  double value(const State& s) {
    const std::size_t first = lowest(s);
    if (first == n_ || s[words_] == 0) return 0.0;
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_)
      throw Error(ErrorCode::budget_exceeded, "oracle exceeded " + std::to_string(budget_) + " search states");
    const double v = std::max(w_[first] + value(include(s, first)), value(exclude(s, first)));
    memo_.emplace(s, v);
    return v;
  }

  std::size_t n_, words_;
  std::optional<Index> cap_;
  std::uint64_t budget_;
  std::vector<std::size_t> order_;
  std::vector<double> w_;
  std::vector<std::uint64_t> nbr_;
  std::unordered_map<State, double, StateHash> memo_;
  double best_ = 0.0;
  std::vector<std::size_t> best_set_;
};

}  // namespace detail

/// Exact maximum over the greedy candidate set (memoized include/exclude search).
inline PackingSolution keps_oracle(const GridFunction& f, double eps, const SolverOptions& opt = {}) {
  double pitch = 0.0;
  const auto cands = build_candidates(f, eps, opt, &pitch);
  const bool rotated = opt.rotations && f.dim() == 2 && !opt.contained_in;
  detail::SweepSearch bb(cands, f.dim(), opt.cap, opt.budget);
  bb.run();
  CubeFamily fam;
  fam.eps = eps;
  fam.orientation_mode = rotated ? OrientationMode::rotated : OrientationMode::axis_aligned;
  for (std::size_t k : bb.best()) fam.cubes.push_back(cands[k].cube);
  auto sol = detail::finish(f, std::move(fam), Solver::oracle, pitch, true);
  std::size_t gradient = 0;
  for (const auto& c : cands) gradient += c.from_gradient ? 1 : 0;
  detail::describe_candidates(sol, opt, cands.size(), gradient);
  sol.metadata["states"] = std::to_string(bb.nodes());
  return sol;
}

/// Capped problem I_eps: at most floor(eps^(1-n)) cubes (at least one).
inline PackingSolution ieps(const GridFunction& f, double eps, Solver solver, SolverOptions opt = {}) {
  opt.cap = cardinality_cap(eps, f.dim());
  switch (solver) {
    case Solver::dp1d: return keps_1d_dp(f, eps, opt.cap);
    case Solver::greedy: return keps_greedy(f, eps, opt);
    case Solver::oracle: return keps_oracle(f, eps, opt);
    case Solver::lattice: break;
  }
  throw Error(ErrorCode::invalid_argument, "the lattice solver has no capped variant");
}

/// [f]_eps: capped, axis-parallel cubes contained in the unit cube Q0.
/// 1D is solved exactly by the interval DP; 2D by the chosen solver.
inline PackingSolution bbm_seminorm(const GridFunction& f, double eps, Solver solver = Solver::dp1d, SolverOptions opt = {}) {
  const Index m = detail::eps_steps(f, eps);
  const auto per_unit = lattice_steps(1.0, eps);
  if (!per_unit) throw Error(ErrorCode::invalid_argument, "1/eps must be an integer");
  if (!f.zero_exterior()) throw Error(ErrorCode::support_outside_q0, "nonzero exterior");
  Box q0{{0.0, 0.0}, {1.0, 1.0}};
  for (int a = 0; a < f.dim(); ++a) f.node_index(a, 0.0);
  for (Index i0 = 0; i0 < f.shape()[0]; ++i0)
    for (Index i1 = 0; i1 < f.shape()[1]; ++i1) {
      if (f.at(i0, i1) == 0.0) continue;
      bool inside = f.cell_lo(0, i0) >= -kLatticeTol * f.h() && f.cell_lo(0, i0 + 1) <= 1.0 + kLatticeTol * f.h();
      if (f.dim() == 2)
        inside = inside && f.cell_lo(1, i1) >= -kLatticeTol * f.h() && f.cell_lo(1, i1 + 1) <= 1.0 + kLatticeTol * f.h();
      if (!inside) throw Error(ErrorCode::support_outside_q0, "f is nonzero outside (0,1)^n");
    }
  const Index cap = cardinality_cap(eps, f.dim());
  if (f.dim() == 1 && solver == Solver::dp1d) {
    const Index s0 = f.node_index(0, 0.0);
    auto sol = detail::dp_solve(f, eps, s0, s0 + *lattice_steps(1.0, f.h()) - m, cap);
    sol.metadata["restricted_to"] = "Q0";
    return sol;
  }
  opt.cap = cap;
  opt.rotations = false;
  opt.contained_in = q0;
  auto sol = solver == Solver::oracle ? keps_oracle(f, eps, opt) : keps_greedy(f, eps, opt);
  sol.metadata["restricted_to"] = "Q0";
  return sol;
}

}  // namespace bmotv
