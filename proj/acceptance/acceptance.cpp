// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bmotv/bmotv.hpp"

using namespace bmotv;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failed = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  const bool ok = o.passed && in_time;
  if (!ok) ++failed;
  std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              limit_seconds);
  std::fflush(stdout);
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

}  // namespace

int main() {
  criterion(1, "smooth 1D limit", 5, [] {
    FunctionSpec s;
    s.kind = Kind::ramp;
    s.a = 0.0;
    s.b = 1.0;
    s.shoulder = 0.25;
    s.exterior = Exterior::clamp;
    s.box = Box{{-0.25, 0}, {1.25, 0}};
    s.h = std::ldexp(1.0, -12);
    const auto f = generate(s);
    const double k = keps_1d_dp(f, std::ldexp(1.0, -6)).score;
    const double lo = 0.25 * 0.98, hi = 0.25 * 1.02;
    return Outcome{within(k, lo, hi), fmt("TV=%.6f K=%.6f in [%.4f, %.4f]", total_variation(f), k, lo, hi)};
  });

  criterion(2, "SBV pointwise limit", 10, [] {
    FunctionSpec s;
    s.kind = Kind::sbv_combo;
    s.a = 0.0;
    s.b = 1.0;
    s.jumps = {{0.5, 1.0}};
    s.exterior = Exterior::clamp;
    s.box = Box{{-0.0625, 0}, {1.0625, 0}};
    s.h = std::ldexp(1.0, -14);
    const auto d = declared_decomposition(s).value();
    const auto f = generate(s);
    const double k = keps_1d_dp(f, std::ldexp(1.0, -8)).score;
    const double target = 0.25 * d.absolutely_continuous + 0.5 * d.jump;
    const double lo = 0.75 * 0.95, hi = 0.75 * 1.05;
    return Outcome{within(k, lo, hi) && d.absolutely_continuous == 1.0 && d.jump == 1.0,
                   fmt("|D^a|=%.3g |D^j|=%.3g limit %.4f, K=%.6f in [%.4f, %.4f]", d.absolutely_continuous, d.jump,
                       target, k, lo, hi)};
  });

  criterion(3, "indicator sharp upper bound", 5, [] {
    FunctionSpec s;
    s.kind = Kind::indicator_interval;
    s.a = 0.0;
    s.b = 1.0;
    s.box = Box{{-0.5, 0}, {1.5, 0}};
    s.h = std::ldexp(1.0, -10);
    const auto f = generate(s);
    double worst = 0.0, worst_cap = 0.0;
    for (int k = 2; k <= 8; ++k) {
      const double eps = std::ldexp(1.0, -k);
      worst = std::max(worst, std::abs(keps_1d_dp(f, eps).score - 1.0));
      worst_cap = std::max(worst_cap, std::abs(ieps(f, eps, Solver::dp1d).score - 0.5));
    }
    return Outcome{worst <= 1e-9 && worst_cap <= 1e-9,
                   fmt("max |K - 1| = %.3g, max |I - 0.5| = %.3g over eps = 2^-2..2^-8", worst, worst_cap)};
  });

  criterion(4, "2D axis-aligned perimeter", 30, [] {
    FunctionSpec s;
    s.kind = Kind::indicator_square;
    s.dim = 2;
    s.center = {0.5, 0.5};
    s.side = 1.0;
    s.box = Box{{-0.25, -0.25}, {1.25, 1.25}};
    s.h = std::ldexp(1.0, -9);
    const auto f = generate(s);
    const double eps = std::ldexp(1.0, -5);
    const auto sol = keps_lattice(f, eps, {{0.5 * eps, 0.5 * eps}});
    const double lo = 2.0 * 0.95, hi = 2.0 + 1e-9;
    return Outcome{within(sol.score, lo, hi),
                   fmt("K=%.6f in [%.2f, 2+1e-9] with %zu cubes", sol.score, lo, sol.family.cubes.size())};
  });

  criterion(5, "isotropy with rotated cubes", 180, [] {
    FunctionSpec s;
    s.kind = Kind::indicator_disk;
    s.dim = 2;
    s.radius = 0.3;
    s.center = {0.0, 0.0};
    s.box = Box{{-0.5, -0.5}, {0.5, 0.5}};
    s.h = std::ldexp(1.0, -9);
    const auto f = generate(s);
    const double eps = std::ldexp(1.0, -5);
    SolverOptions o;
    o.pitch = s.h;
    o.tie_tolerance = 0.01;
    o.angle_source = AngleSource::gradient;
    const double axis = keps_greedy(f, eps, o).score;
    o.rotations = true;
    const double rot = keps_greedy(f, eps, o).score;
    const double tv = total_variation(f);
    const double lo = 0.85 * std::numbers::pi * 0.3, hi = 0.5 * tv * 1.05;
    return Outcome{rot >= lo && rot <= hi && axis < rot,
                   fmt("rotated K=%.6f in [%.4f, %.4f], axis-aligned K=%.6f < rotated", rot, lo, hi, axis)};
  });

  criterion(6, "Cantor bracket", 20, [] {
    FunctionSpec s;
    s.kind = Kind::cantor;
    s.level = 8;
    s.h = 1.0 / 6561.0;
    const auto f = generate(s);
    const double lo = 0.25 * 0.95, hi = 0.5 * 1.05;
    bool ok = true;
    std::string vals;
    double eps = 1.0 / 27.0;
    for (int k = 3; k <= 6; ++k, eps /= 3.0) {
      const double v = keps_1d_dp(f, eps).score;
      ok = ok && within(v, lo, hi);
      vals += fmt("%s%.6f", vals.empty() ? "" : ", ", v);
    }
    return Outcome{ok, fmt("K = %s for eps = 3^-3..3^-6, bracket [%.4f, %.4f]", vals.c_str(), lo, hi)};
  });

  criterion(7, "recovery sequence", 20, [] {
    FunctionSpec s;
    s.kind = Kind::cantor;
    s.level = 8;
    s.h = 1.0 / 6561.0;
    const auto f = generate(s);
    const double eps = s.h * std::round(std::ldexp(1.0, -8) / s.h);
    const double width = default_width(std::ldexp(1.0, -8), s.h);
    const auto g = mollify(f, width);
    const double tv = total_variation(g);
    const double k = keps_1d_dp(g, eps).score;
    const double hi = 0.25 * 1.10, lo = 0.25 * tv * 0.95;
    return Outcome{k <= hi && k >= lo, fmt("eps=%.0fh width=%.0fh TV=%.6f K=%.6f in [%.4f, %.4f]", eps / s.h,
                                           width / s.h, tv, k, lo, hi)};
  });

  criterion(8, "lemma suite", 120, [] {
    const auto rep = run_lemma_suite(20240601, 200, 50);
    int checks = 0;
    for (const auto& [name, t] : rep.tallies) checks += t.checks;
    return Outcome{rep.violations() == 0, fmt("%d violations in %d checks (seed %llu)", rep.violations(), checks,
                                              static_cast<unsigned long long>(rep.seed))};
  });

  criterion(9, "oracle equivalence", 120, [] {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<Index> cells(16, 64), steps(1, 8);
    std::bernoulli_distribution ext(0.3);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto f = random_grid(rng, 1, 1.0 / 64.0, {cells(rng), 1}, ext(rng));
      const double eps = steps(rng) * f.h();
      SolverOptions o;
      o.pitch = f.h();
      worst = std::max(worst, std::abs(keps_1d_dp(f, eps).score - keps_oracle(f, eps, o).score));
    }
    int bad = 0;
    double gap = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto f = random_grid(rng, 2, 1.0 / 16.0, {16, 16}, false);
      const double eps = 4 * f.h();
      SolverOptions o;
      o.pitch = 2 * f.h();
      const double best = keps_oracle(f, eps, o).score;
      const double g = keps_greedy(f, eps, o).score;
      const double l = keps_lattice(f, eps, lattice_offsets(f, eps, o.pitch)).score;
      bad += (g > best + 1e-12) + (l > best + 1e-12);
      gap = std::max(gap, (best - std::min(g, l)) / best);
    }
    return Outcome{worst <= 1e-12 && bad == 0,
                   fmt("1D max |dp - oracle| = %.3g over 50; 2D heuristic > oracle in %d of 40 (max shortfall %.1f%%)",
                       worst, bad, 100.0 * gap)};
  });

  criterion(10, "compactness counterexample", 60, [] {
    std::vector<double> eps;
    for (int j = 3; j <= 8; ++j) eps.push_back(std::ldexp(1.0, -j));
    const auto rep = remark_counterexample(0.5, 2.0, eps, 1);
    std::string notes;
    for (const auto& v : rep.verdicts) notes += fmt(" %s=%s", v.name.c_str(), v.passed ? "ok" : "FAILED");
    const auto& c = rep.compactness.rows;
    notes += fmt("; bound ratio %.4f, L1 %.4g -> %.4g, L2 %.4f -> %.4f, slope %.4f vs analytic %.4f", rep.bound_ratio,
                 c.front().l1_to_zero, c.back().l1_to_zero, rep.norms.front().lp_norm, rep.norms.back().lp_norm,
                 rep.slope, rep.analytic_slope);
    return Outcome{failures(rep.verdicts) == 0, notes};
  });

  {
    // not a criterion: the same study above the critical exponent, where the
    // L2 norm grows like a power of 1/h
    std::vector<double> eps;
    for (int j = 3; j <= 8; ++j) eps.push_back(std::ldexp(1.0, -j));
    const auto rep = remark_counterexample(0.75, 2.0, eps, 1);
    std::printf("[info]    alpha = 3/4 companion: slope %.4f vs analytic %.4f, %d failed verdicts\n", rep.slope,
                rep.analytic_slope, failures(rep.verdicts));
  }

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
