#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bmotv/catalog.hpp"
#include "bmotv/error.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/mesh.hpp"
#include "bmotv/oscillation.hpp"
#include "bmotv/packing.hpp"

namespace bmotv {

// Relative tolerance of the lemma checks.
inline constexpr double kLemmaTol = 1e-9;

/// One inequality lhs <= rhs, checked with relative tolerance.
struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

inline Check make_check(std::string name, double lhs, double rhs, double rel_tol = kLemmaTol) {
  return {std::move(name), lhs, rhs, lhs <= rhs + rel_tol * std::abs(rhs) + 1e-14};
}

struct LemmaReport {
  std::string lemma;
  std::map<std::string, double> values;
  std::vector<Check> checks;

  int violations() const {
    int v = 0;
    for (const auto& c : checks) v += c.holds ? 0 : 1;
    return v;
  }
};

struct Verdict {
  std::string name;
  bool passed = true;
  std::string detail;
};

inline int failures(const std::vector<Verdict>& vs) {
  int n = 0;
  for (const auto& v : vs) n += v.passed ? 0 : 1;
  return n;
}

/// Runs the named solver with the given options.
inline PackingSolution solve(const GridFunction& f, double eps, Solver solver, const SolverOptions& opt = {}) {
  switch (solver) {
    case Solver::dp1d: return keps_1d_dp(f, eps, opt.cap);
    case Solver::greedy: return keps_greedy(f, eps, opt);
    case Solver::oracle: return keps_oracle(f, eps, opt);
    case Solver::lattice: {
      const double pitch = opt.pitch > 0.0 ? opt.pitch : f.h();
      return keps_lattice(f, eps, lattice_offsets(f, eps, pitch));
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown solver");
}

// ---------------------------------------------------------------------------
// sweeps

struct SweepRow {
  double eps = 0.0;
  double keps = 0.0;
  Solver solver = Solver::dp1d;
  std::size_t family_size = 0;
  double runtime_seconds = 0.0;
};

struct SweepReport {
  std::string function_id;
  Solver solver = Solver::dp1d;
  double pitch = 0.0;
  std::vector<SweepRow> rows;
  double total_variation = 0.0;
  double quarter_tv = 0.0;
  double half_tv = 0.0;
  std::optional<double> dfp_limit;
  std::vector<Verdict> verdicts;
};

/// True when |rows[k] - target| never increases after the first two rows,
/// allowing at most one exception.
inline bool dfp_trend(const std::vector<SweepRow>& rows, double target) {
  int bad = 0;
  for (std::size_t k = 3; k < rows.size(); ++k)
    if (std::abs(rows[k].keps - target) > std::abs(rows[k - 1].keps - target) + 1e-12) ++bad;
  return bad <= 1;
}

inline SweepReport sweep_keps(const GridFunction& f, const std::vector<double>& eps_list, Solver solver,
                              const SolverOptions& opt = {}, std::optional<DecompositionSpec> decomposition = std::nullopt,
                              bool smooth = false, std::string function_id = "f") {
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1])) throw Error(ErrorCode::invalid_argument, "eps list must be decreasing");
  SweepReport rep;
  rep.function_id = std::move(function_id);
  rep.solver = solver;
  rep.pitch = opt.pitch;
  rep.total_variation = total_variation(f);
  rep.quarter_tv = 0.25 * rep.total_variation;
  rep.half_tv = 0.5 * rep.total_variation;
  if (decomposition) rep.dfp_limit = 0.25 * decomposition->absolutely_continuous + 0.5 * decomposition->jump;
  for (double eps : eps_list) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve(f, eps, solver, opt);
    const auto t1 = std::chrono::steady_clock::now();
    rep.rows.push_back({eps, sol.score, solver, sol.family.cubes.size(), std::chrono::duration<double>(t1 - t0).count()});
  }
  bool upper = true;
  for (const auto& r : rep.rows) upper = upper && r.keps <= rep.half_tv * (1.0 + 5e-2) + 1e-12;
  rep.verdicts.push_back({"upper_bound_half_tv", upper, "every K <= TV/2 (1 + 5e-2)"});
  if (smooth && !rep.rows.empty()) {
    const bool lower = rep.rows.back().keps >= rep.quarter_tv * (1.0 - 5e-2);
    rep.verdicts.push_back({"lower_bound_quarter_tv", lower, "K at the smallest eps >= TV/4 (1 - 5e-2)"});
  }
  if (rep.dfp_limit && decomposition->cantor == 0.0)
    rep.verdicts.push_back({"dfp_trend", dfp_trend(rep.rows, *rep.dfp_limit),
                            "|K - dfp_limit| nonincreasing after two rows, one exception allowed"});
  return rep;
}

// ---------------------------------------------------------------------------
// lemma verifiers

/// Sum of Osc over the cells of tau + Q_delta that meet f's box, and their count.
inline std::pair<double, std::size_t> mesh_oscillation_sum(const GridFunction& f, double delta, Vec tau) {
  const auto lm = detail::lattice_mesh(f, delta, tau);
  const CellSums sums(f, lm.m + 2);
  std::vector<IVec> lows;
  for (Index k0 = lm.k_lo[0]; k0 < lm.k_hi[0]; ++k0)
    for (Index k1 = lm.k_lo[1]; k1 < lm.k_hi[1]; ++k1)
      lows.push_back({lm.t[0] + k0 * lm.m, f.dim() == 2 ? lm.t[1] + k1 * lm.m : 0});
  std::vector<double> osc(lows.size());
  parallel_for(lows.size(), [&](std::size_t k) { osc[k] = lattice_oscillation(f, lows[k], lm.m, &sums); });
  double s = 0.0;
  for (double o : osc) s += o;
  return {s, lows.size()};
}

inline Vec diagonal(double t) { return {t, t}; }

/// TV of w^delta against the oscillations over the two pairings of 2 delta intervals.
inline LemmaReport verify_lemma_1d(const GridFunction& w, double delta) {
  if (w.dim() != 1) throw Error(ErrorCode::dimension_unsupported, "verify_lemma_1d needs a 1D grid");
  LemmaReport r;
  r.lemma = "lemma_1d";
  const double tv = total_variation(project(w, delta, {0.0, 0.0}));
  const double s1 = mesh_oscillation_sum(w, 2.0 * delta, {0.0, 0.0}).first;
  const double s2 = mesh_oscillation_sum(w, 2.0 * delta, {delta, 0.0}).first;
  const double k = std::max(s1, s2);
  r.values = {{"delta", delta}, {"tv_projection", tv}, {"s1", s1}, {"s2", s2}, {"k_lower", k}};
  r.checks.push_back(make_check("tv <= 2 (s1 + s2)", tv, 2.0 * (s1 + s2)));
  r.checks.push_back(make_check("2 (s1 + s2) <= 4 max(s1, s2)", 2.0 * (s1 + s2), 4.0 * k));
  r.checks.push_back(make_check("tv <= 4 K(2 delta)", tv, 4.0 * k));
  return r;
}

/// Same for n dimensions: S uses (2 delta)^(n-1) and the (delta,...,delta) shifted mesh.
inline LemmaReport verify_lemma_nd(const GridFunction& w, double delta) {
  LemmaReport r;
  r.lemma = "lemma_nd";
  const int n = w.dim();
  const double pre = std::pow(2.0 * delta, n - 1);
  const double tv = total_variation(project(w, delta, {0.0, 0.0}));
  const double s1 = pre * mesh_oscillation_sum(w, 2.0 * delta, {0.0, 0.0}).first;
  const double s2 = pre * mesh_oscillation_sum(w, 2.0 * delta, diagonal(delta)).first;
  const double k = std::max(s1, s2);
  r.values = {{"delta", delta}, {"tv_projection", tv}, {"s1", s1}, {"s2", s2}, {"k_lower", k}};
  r.checks.push_back(make_check("tv <= 2n (s1 + s2)", tv, 2.0 * n * (s1 + s2)));
  r.checks.push_back(make_check("tv <= 4n K(2 delta)", tv, 4.0 * n * k));
  return r;
}

inline Box common_box(const GridFunction& a, const GridFunction& b) { return union_box(a, b); }

/// ||w - w^delta||_1 <= delta * delta^(n-1) sum over Q_delta of Osc.
inline LemmaReport verify_eps_close(const GridFunction& w, double delta) {
  LemmaReport r;
  r.lemma = "eps_close";
  const auto p = project(w, delta, {0.0, 0.0});
  const double lhs = l1_distance(w, p, common_box(w, p));
  const double s = std::pow(delta, w.dim() - 1) * mesh_oscillation_sum(w, delta, {0.0, 0.0}).first;
  r.values = {{"delta", delta}, {"l1_distance", lhs}, {"s", s}, {"rhs", delta * s}};
  r.checks.push_back(make_check("||w - w^delta|| <= delta K(delta)", lhs, delta * s));
  return r;
}

/// ||w - w^(delta/2)|| <= (1 + 2^n) ||w - w^delta||.
inline LemmaReport verify_halving(const GridFunction& w, double delta) {
  LemmaReport r;
  r.lemma = "halving";
  const auto p = project(w, delta, {0.0, 0.0});
  const auto q = project(w, 0.5 * delta, {0.0, 0.0});
  const double far = l1_distance(w, p, common_box(w, p));
  const double near = l1_distance(w, q, common_box(w, q));
  const double c = 1.0 + std::pow(2.0, w.dim());
  r.values = {{"delta", delta}, {"l1_half", near}, {"l1_full", far}, {"constant", c}};
  r.checks.push_back(make_check("||w - w^(delta/2)|| <= (1 + 2^n) ||w - w^delta||", near, c * far));
  return r;
}

inline CubeFamily translate(const CubeFamily& fam, Vec y) {
  CubeFamily out = fam;
  for (auto& q : out.cubes) {
    q.center[0] += y[0];
    q.center[1] += y[1];
  }
  return out;
}

/// Lattice support of the triangular kernel of the given width.
inline std::vector<Vec> kernel_shifts(const GridFunction& f, double width) {
  const Index w = require_steps(width, f.h(), ErrorCode::width_not_on_lattice, "width");
  std::vector<Vec> out;
  for (Index a = -(w - 1); a <= w - 1; ++a)
    for (Index b = (f.dim() == 2 ? -(w - 1) : 0); b <= (f.dim() == 2 ? w - 1 : 0); ++b)
      out.push_back({static_cast<double>(a) * f.h(), static_cast<double>(b) * f.h()});
  return out;
}

/// score(f * rho, F) <= max over kernel shifts y of score(f, F - y).
inline LemmaReport verify_convolution_monotonicity(const GridFunction& f, double width, const CubeFamily& family,
                                                   std::vector<Vec> shifts = {}) {
  LemmaReport r;
  r.lemma = "convolution";
  if (shifts.empty()) shifts = kernel_shifts(f, width);
  for (const auto& y : shifts)
    for (int a = 0; a < f.dim(); ++a)
      if (!is_multiple_of(y[a], f.h())) throw Error(ErrorCode::offset_not_on_lattice, "shift off the lattice");
  const auto g = mollify(f, width);
  const double lhs = family_score(g, family);
  double best = 0.0;
  for (const auto& y : shifts) best = std::max(best, family_score(f, translate(family, {-y[0], -y[1]})));
  r.values = {{"width", width}, {"mollified_score", lhs}, {"max_shifted_score", best}};
  r.checks.push_back(make_check("score(f * rho) <= max_y score(f, F - y)", lhs, best));
  return r;
}

// ---------------------------------------------------------------------------
// randomized suites

/// Random piecewise-constant grid: runs of equal cells with uniform values in [-1, 1].
inline GridFunction random_grid(std::mt19937_64& rng, int dim, double h, IVec shape, bool nonzero_exterior) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution fresh(0.35);
  std::vector<double> v(static_cast<std::size_t>(shape[0] * shape[1]));
  double cur = val(rng);
  for (auto& x : v) {
    if (fresh(rng)) cur = val(rng);
    x = cur;
  }
  if (dim == 2) {
    // blocky columns as well as rows
    for (Index i0 = 1; i0 < shape[0]; ++i0)
      for (Index i1 = 0; i1 < shape[1]; ++i1)
        if (!fresh(rng)) v[static_cast<std::size_t>(i0 * shape[1] + i1)] = v[static_cast<std::size_t>((i0 - 1) * shape[1] + i1)];
  }
  std::array<double, 2> ext{0.0, 0.0};
  if (dim == 1 && nonzero_exterior) ext = {val(rng), val(rng)};
  return GridFunction(dim, {0.0, 0.0}, h, shape, std::move(v), ext);
}

/// Random interior-disjoint family of up to `count` eps-cubes near f's box.
inline CubeFamily random_family(std::mt19937_64& rng, const GridFunction& f, double eps, int count, bool rotated) {
  CubeFamily fam;
  fam.eps = eps;
  fam.orientation_mode = rotated ? OrientationMode::rotated : OrientationMode::axis_aligned;
  const Box b = f.box();
  std::uniform_real_distribution<double> ux(b.lo[0] - 0.5 * eps, b.hi[0] + 0.5 * eps);
  std::uniform_real_distribution<double> uy(b.lo[1] - 0.5 * eps, b.hi[1] + 0.5 * eps);
  std::uniform_real_distribution<double> ua(0.0, std::numbers::pi / 2.0);
  for (int tries = 0; tries < 40 * count && static_cast<int>(fam.cubes.size()) < count; ++tries) {
    Cube q{{ux(rng), f.dim() == 2 ? uy(rng) : 0.0}, eps, rotated && f.dim() == 2 ? ua(rng) : 0.0};
    bool ok = true;
    for (const auto& p : fam.cubes) ok = ok && !cubes_overlap(p, q, f.dim());
    if (ok) fam.cubes.push_back(q);
  }
  return fam;
}

struct SuiteTally {
  int instances = 0;
  int checks = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs over checks with rhs > 0
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::map<std::string, SuiteTally> tallies;
  std::vector<LemmaReport> failed;

  int violations() const {
    int v = 0;
    for (const auto& [k, t] : tallies) v += t.violations;
    return v;
  }
};

inline void record(SuiteReport& s, const LemmaReport& r) {
  auto& t = s.tallies[r.lemma];
  ++t.instances;
  for (const auto& c : r.checks) {
    ++t.checks;
    if (!c.holds) ++t.violations;
    if (c.rhs > 0.0) t.worst_ratio = std::max(t.worst_ratio, c.lhs / c.rhs);
  }
  if (r.violations() > 0) s.failed.push_back(r);
}

/// Seeded randomized suite over the lemma verifiers and the per-family
/// convolution inequality, deltas in {2h, 4h, 8h}.
inline SuiteReport run_lemma_suite(std::uint64_t seed, int instances_1d = 200, int instances_2d = 50) {
  SuiteReport s;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> n1(16, 64), n2(8, 24);
  std::uniform_int_distribution<int> wdist(1, 3), fdist(1, 6), edist(2, 8);
  std::bernoulli_distribution coin(0.5), rare(0.25);
  for (int dim : {1, 2}) {
    const int count = dim == 1 ? instances_1d : instances_2d;
    const double h = dim == 1 ? 1.0 / 64.0 : 1.0 / 32.0;
    for (int k = 0; k < count; ++k) {
      const IVec shape{dim == 1 ? n1(rng) : n2(rng), dim == 1 ? 1 : n2(rng)};
      const auto w = random_grid(rng, dim, h, shape, dim == 1 && rare(rng));
      for (int d : {2, 4, 8}) {
        const double delta = d * h;
        if (dim == 1) record(s, verify_lemma_1d(w, delta));
        record(s, verify_lemma_nd(w, delta));
        record(s, verify_eps_close(w, delta));
        record(s, verify_halving(w, delta));
      }
      const double width = wdist(rng) * h;
      const double eps = edist(rng) * h;
      const auto fam = random_family(rng, w, eps, fdist(rng), coin(rng));
      record(s, verify_convolution_monotonicity(w, width, fam));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// recovery, compactness, counterexample

/// Lattice multiple of h nearest to sqrt(eps), at least h.
inline double default_width(double eps, double h) {
  return h * static_cast<double>(std::max<Index>(1, static_cast<Index>(std::llround(std::sqrt(eps) / h))));
}

/// f itself for smooth kinds; otherwise f mollified at width schedule(eps).
inline GridFunction recovery_sequence(const FunctionSpec& spec, const GridFunction& f, double eps,
                                      const std::function<double(double)>& schedule = {}) {
  if (is_smooth(spec)) return f;
  const double width = schedule ? schedule(eps) : default_width(eps, f.h());
  return mollify(f, width);
}

/// Median of the values over the cells of f inside `window` (cells split by the
/// window boundary count once).
inline double window_median(const GridFunction& f, const Box& window) {
  auto [lo, hi] = cells_in_region(f, window);
  std::vector<double> v;
  for (Index i0 = lo[0]; i0 < hi[0]; ++i0)
    for (Index i1 = lo[1]; i1 < hi[1]; ++i1) v.push_back(f.at(i0, i1));
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline GridFunction shifted(const GridFunction& f, double c) {
  auto v = f.values();
  for (auto& x : v) x -= c;
  auto ext = f.exterior();
  if (f.dim() == 2) {
    // 2D grids are zero outside; keep the box and let the exterior stay 0
    return GridFunction(2, f.origin(), f.h(), f.shape(), std::move(v));
  }
  ext[0] -= c;
  ext[1] -= c;
  return GridFunction(1, f.origin(), f.h(), f.shape(), std::move(v), ext);
}

struct CompactnessRow {
  double eps = 0.0;
  double keps = 0.0;
  double s_max = 0.0;            // max of the two translated-mesh sums at delta = eps/2
  double tv_projection = 0.0;    // |D f^(eps/2)|
  double tv_bound = 0.0;         // 4n max(K, s_max)
  double center = 0.0;           // median recentring constant c_j
  double l1_to_zero = 0.0;       // || f^(eps/2) - c_j ||_1 on the window
  double l1_to_finest = 0.0;     // distance to the finest recentred projection on the window
  double l1_to_finest_inner = 0.0;  // same on the half-size window
};

struct CompactnessReport {
  Box window;
  std::vector<CompactnessRow> rows;
  GridFunction limit_candidate;
  std::vector<Verdict> verdicts;
};

inline Box half_window(const Box& w, int dim) {
  Box out = w;
  for (int a = 0; a < dim; ++a) {
    const double c = 0.5 * (w.lo[a] + w.hi[a]), r = 0.25 * (w.hi[a] - w.lo[a]);
    out.lo[a] = c - r;
    out.hi[a] = c + r;
  }
  return out;
}

/// Projections f_j^(eps_j/2), their variation bounds, median recentring and
/// L1 distances on a fixed window and its nested half.
inline CompactnessReport compactness_demo(const std::vector<std::pair<double, GridFunction>>& family, const Box& window,
                                          Solver solver = Solver::dp1d, const SolverOptions& opt = {}) {
  CompactnessReport rep;
  rep.window = window;
  std::vector<GridFunction> centered;
  for (const auto& [eps, f] : family) {
    CompactnessRow row;
    row.eps = eps;
    row.keps = solve(f, eps, solver, opt).score;
    const auto lem = verify_lemma_nd(f, 0.5 * eps);
    row.s_max = lem.values.at("k_lower");
    const auto proj = project(f, 0.5 * eps, {0.0, 0.0});
    row.tv_projection = total_variation(proj);
    row.tv_bound = 4.0 * f.dim() * std::max(row.keps, row.s_max);
    row.center = window_median(proj, window);
    centered.push_back(shifted(proj, row.center));
    const GridFunction zero(f.dim(), proj.origin(), f.h(), proj.shape(), std::vector<double>(static_cast<std::size_t>(proj.size()), 0.0));
    row.l1_to_zero = l1_distance(centered.back(), zero, window);
    rep.rows.push_back(row);
  }
  if (!centered.empty()) {
    rep.limit_candidate = centered.back();
    const Box inner = half_window(window, rep.limit_candidate.dim());
    for (std::size_t j = 0; j < centered.size(); ++j) {
      rep.rows[j].l1_to_finest = l1_distance(centered[j], rep.limit_candidate, window);
      rep.rows[j].l1_to_finest_inner = l1_distance(centered[j], rep.limit_candidate, inner);
    }
  }
  bool tv_ok = true;
  for (const auto& r : rep.rows) tv_ok = tv_ok && r.tv_projection <= r.tv_bound * (1.0 + kLemmaTol) + 1e-14;
  rep.verdicts.push_back({"projected_tv_bounded", tv_ok, "|D f^(eps/2)| <= 4n max(K, S)"});
  return rep;
}

struct CounterexampleRow {
  double eps = 0.0;
  double keps = 0.0;
  double remark_bound = 0.0;  // eps^(n-1) sum over the family of 2 * mean |f| on each cube
  std::size_t cubes_meeting_support = 0;
  double l1_norm = 0.0;
};

struct NormRow {
  double h = 0.0;
  double lp_norm = 0.0;
};

struct CounterexampleReport {
  double alpha = 0.5;
  double p = 2.0;
  int dim = 1;
  double fixed_eps = 0.0;
  std::vector<CounterexampleRow> rows;
  std::vector<NormRow> norms;
  double bound_ratio = 0.0;  // max / min of remark_bound over rows
  double slope = 0.0;        // least-squares slope of log ||f||_p against log h
  double analytic_slope = 0.0;
  CompactnessReport compactness;
  std::vector<Verdict> verdicts;
};

inline FunctionSpec profile_spec(double alpha, int dim, double eps, double h) {
  FunctionSpec s;
  s.kind = Kind::scaled_profile;
  s.dim = dim;
  s.alpha = alpha;
  s.scale = eps;
  s.h = h;
  s.box = dim == 1 ? Box{{0.0, 0.0}, {1.0, 0.0}} : Box{{0.0, 0.0}, {0.5, 0.5}};
  return s;
}

/// Exponent of h in ||f_eps||_p on the grid of side h: (n - alpha p) / p when
/// alpha p > n, otherwise 0 (bounded, or logarithmic growth at alpha p = n).
inline double analytic_norm_exponent(double alpha, double p, int dim) {
  return alpha * p > dim ? (dim - alpha * p) / p : 0.0;
}

inline double loglog_slope(const std::vector<NormRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.h), y = std::log(r.lp_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct CounterexampleOptions {
  double h = 1.0 / 16384.0;           // grid for the eps sweep
  double fixed_eps = 0.125;           // eps of the L^p refinement study
  std::vector<double> norm_h{};       // grids of the refinement study; empty picks 2^-8 .. 2^-18
  double slope_tolerance = 0.2;       // relative
};

/// The family f_eps(x) = rho(x / eps) with rho = |x|^-alpha on the unit ball
/// (positive orthant part): bounded K, L1 norm to 0, L^p norm unbounded.
inline CounterexampleReport remark_counterexample(double alpha, double p, const std::vector<double>& eps_list, int dim = 1,
                                                  const CounterexampleOptions& opt = {}) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::dimension_unsupported, "dim must be 1 or 2");
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "p must be >= 1");
  CounterexampleReport rep;
  rep.alpha = alpha;
  rep.p = p;
  rep.dim = dim;
  rep.fixed_eps = opt.fixed_eps;
  std::vector<std::pair<double, GridFunction>> fam;
  const Solver solver = dim == 1 ? Solver::dp1d : Solver::greedy;
  for (double eps : eps_list) {
    const auto f = generate(profile_spec(alpha, dim, eps, opt.h));
    const auto sol = solve(f, eps, solver);
    CounterexampleRow row;
    row.eps = eps;
    row.keps = sol.score;
    double bound = 0.0;
    for (const auto& q : sol.family.cubes) {
      double mean_abs = 0.0;
      for (const auto& cw : cell_overlap_weights(q, f)) mean_abs += std::abs(f.at(cw.cell[0], cw.cell[1])) * cw.measure;
      mean_abs /= std::pow(eps, dim);
      if (mean_abs > 0.0) ++row.cubes_meeting_support;
      bound += 2.0 * mean_abs;
    }
    row.remark_bound = std::pow(eps, dim - 1) * bound;
    row.l1_norm = lp_norm(f, 1.0, f.box());
    rep.rows.push_back(row);
    fam.emplace_back(eps, f);
  }
  const Box window = dim == 1 ? Box{{0.0, 0.0}, {1.0, 0.0}} : Box{{0.0, 0.0}, {0.5, 0.5}};
  rep.compactness = compactness_demo(fam, window, solver);

  auto hs = opt.norm_h;
  if (hs.empty())
    for (int k = 8; k <= (dim == 1 ? 18 : 10); ++k) hs.push_back(std::ldexp(1.0, -k));
  for (double h : hs) {
    const auto f = generate(profile_spec(alpha, dim, opt.fixed_eps, h));
    rep.norms.push_back({h, lp_norm(f, p, f.box())});
  }
  rep.slope = rep.norms.size() >= 2 ? loglog_slope(rep.norms) : 0.0;
  rep.analytic_slope = analytic_norm_exponent(alpha, p, dim);

  double bmin = std::numeric_limits<double>::infinity(), bmax = 0.0;
  bool under = true;
  for (const auto& r : rep.rows) {
    bmin = std::min(bmin, r.remark_bound);
    bmax = std::max(bmax, r.remark_bound);
    under = under && r.keps <= r.remark_bound * (1.0 + kLemmaTol) + 1e-14;
  }
  rep.bound_ratio = bmin > 0.0 ? bmax / bmin : std::numeric_limits<double>::infinity();
  rep.verdicts.push_back({"keps_bounded", under && std::isfinite(rep.bound_ratio),
                          "K <= eps^(n-1) sum 2 mean|f| per eps, bound ratio finite"});
  bool l1_mono = true;
  for (std::size_t k = 1; k < rep.compactness.rows.size(); ++k)
    l1_mono = l1_mono && rep.compactness.rows[k].l1_to_zero < rep.compactness.rows[k - 1].l1_to_zero;
  rep.verdicts.push_back({"l1_to_zero_monotone", l1_mono, "recentred projections approach 0 in L1"});
  for (const auto& v : rep.compactness.verdicts) rep.verdicts.push_back(v);
  bool grows = true;
  for (std::size_t k = 1; k < rep.norms.size(); ++k) grows = grows && rep.norms[k].lp_norm > rep.norms[k - 1].lp_norm;
  const bool diverging = alpha * p >= dim;
  if (diverging) {
    rep.verdicts.push_back({"lp_norm_grows", grows, "||f_eps||_p increases as h decreases"});
  } else {
    bool flat = true;
    for (const auto& r : rep.norms)
      flat = flat && std::abs(r.lp_norm - rep.norms.back().lp_norm) <= 0.05 * rep.norms.back().lp_norm;
    rep.verdicts.push_back({"lp_norm_bounded", flat, "||f_eps||_p stable under refinement"});
  }
  const bool slope_ok =
      std::abs(rep.slope - rep.analytic_slope) <= opt.slope_tolerance * std::abs(rep.analytic_slope) + 1e-9;
  rep.verdicts.push_back({"lp_slope", slope_ok, "log-log slope within tolerance of the analytic exponent"});
  return rep;
}

}  // namespace bmotv
