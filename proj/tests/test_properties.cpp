// Invariants over seeded random inputs.
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "bmotv/gamma_lab.hpp"
#include "bmotv/report_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bmotv;

namespace {

GridFunction scaled(const GridFunction& f, double c) {
  auto v = f.values();
  for (auto& x : v) x *= c;
  auto ext = f.exterior();
  ext[0] *= c;
  ext[1] *= c;
  return GridFunction(f.dim(), f.origin(), f.h(), f.shape(), std::move(v), ext);
}

GridFunction reversed(const GridFunction& f) {
  auto v = f.values();
  std::reverse(v.begin(), v.end());
  return GridFunction(1, f.origin(), f.h(), f.shape(), std::move(v), {f.exterior()[1], f.exterior()[0]});
}

GridFunction moved(const GridFunction& f, Vec by) {
  return GridFunction(f.dim(), {f.origin()[0] + by[0], f.origin()[1] + by[1]}, f.h(), f.shape(), f.values(), f.exterior());
}

}  // namespace

TEST(Properties, OneDimensionalKIsAtMostHalfTheVariation) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = random_grid(rng, 1, 1.0 / 64.0, {16 + trial, 1}, trial % 2 == 0);
    const double tv = total_variation(f);
    for (Index m : {1, 2, 5, 9}) EXPECT_LE(keps_1d_dp(f, m * f.h()).score, 0.5 * tv + 1e-12);
  }
}

TEST(Properties, SymmetriesOfK) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_grid(rng, 1, 1.0 / 32.0, {20 + trial, 1}, trial % 3 == 0);
    const double eps = (2 + trial % 5) * f.h();
    const double k = keps_1d_dp(f, eps).score;
    const double a = c(rng);
    EXPECT_NEAR(keps_1d_dp(scaled(f, a), eps).score, std::abs(a) * k, 1e-12 * (1 + std::abs(a)));
    EXPECT_NEAR(keps_1d_dp(shifted(f, a), eps).score, k, 1e-12);
    EXPECT_NEAR(keps_1d_dp(reversed(f), eps).score, k, 1e-12);
    EXPECT_NEAR(keps_1d_dp(moved(f, {7 * f.h(), 0.0}), eps).score, k, 1e-12);
  }
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {10, 9}, false);
    SolverOptions o;
    o.pitch = 2 * f.h();
    const double k = keps_oracle(f, 4 * f.h(), o).score;
    EXPECT_NEAR(keps_oracle(scaled(f, -2.0), 4 * f.h(), o).score, 2.0 * k, 1e-12);
    EXPECT_NEAR(keps_oracle(moved(f, {4 * f.h(), -6 * f.h()}), 4 * f.h(), o).score, k, 1e-12);
  }
}

TEST(Properties, CappedAndRestrictedProblemsAreSmaller) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_grid(rng, 1, 1.0 / 32.0, {32, 1}, false);
    const double eps = (1 + trial % 4) * f.h() * 2;
    const double k = keps_1d_dp(f, eps).score;
    double prev = 0.0;
    for (Index cap : {1, 2, 3, 5, 100}) {
      const double kc = keps_1d_dp(f, eps, cap).score;
      EXPECT_GE(kc, prev - 1e-15);
      EXPECT_LE(kc, k + 1e-12);
      prev = kc;
    }
    EXPECT_NEAR(prev, k, 1e-12);
    EXPECT_LE(ieps(f, eps, Solver::dp1d).score, k + 1e-12);
    EXPECT_LE(keps_lattice(f, eps, lattice_offsets(f, eps, f.h())).score, k + 1e-12);
    const auto bbm = bbm_seminorm(f, 1.0 / 8.0);
    EXPECT_LE(bbm.score, keps_1d_dp(f, 1.0 / 8.0, 1).score + 1e-12);
  }
}

TEST(Properties, FinerCandidateLatticesNeverLose) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {9, 9}, false);
    SolverOptions coarse, fine;
    coarse.pitch = 4 * f.h();
    fine.pitch = 2 * f.h();
    const double a = keps_oracle(f, 4 * f.h(), coarse).score;
    const double b = keps_oracle(f, 4 * f.h(), fine).score;
    EXPECT_LE(a, b + 1e-12);
  }
}

TEST(Properties, SolutionsAreDisjointAndScoresRecompute) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {12, 10}, false);
    SolverOptions o;
    o.rotations = trial % 2 == 0;
    o.pitch = f.h();
    o.tie_tolerance = trial % 3 == 0 ? 0.02 : 0.0;
    for (const auto& sol : {keps_greedy(f, 4 * f.h(), o), keps_lattice(f, 4 * f.h(), lattice_offsets(f, 4 * f.h(), f.h()))}) {
      EXPECT_TRUE(verify_disjoint(sol.family, 2));
      EXPECT_DOUBLE_EQ(sol.score, family_score(f, sol.family));
      // family JSON round trip keeps the score
      EXPECT_NEAR(family_score(f, family_from_json(to_json(sol.family))), sol.score, 1e-13);
    }
  }
}

TEST(Properties, OscillationBounds) {
  std::mt19937_64 rng(56);
  std::uniform_real_distribution<double> pos(-0.2, 1.0), ang(0.0, std::numbers::pi / 2.0), c(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = trial % 2 ? 2 : 1;
    const auto f = random_grid(rng, dim, 1.0 / 16.0, {12, dim == 2 ? 12 : 1}, dim == 1);
    const Cube q = make_cube({pos(rng), dim == 2 ? pos(rng) : 0.0}, 0.3, dim == 2 ? ang(rng) : 0.0);
    const double o = oscillation(f, q);
    EXPECT_GE(o, 0.0);
    // Osc <= 2 mean |f - c| for every constant c
    const double cc = c(rng);
    const auto w = cell_overlap_weights(q, f);
    double dev = 0.0, abs_mean = 0.0, vol = 0.0;
    for (const auto& cw : w) {
      dev += std::abs(f.at(cw.cell[0], cw.cell[1]) - cc) * cw.measure;
      abs_mean += std::abs(f.at(cw.cell[0], cw.cell[1])) * cw.measure;
      vol += cw.measure;
    }
    EXPECT_NEAR(vol, std::pow(0.3, dim), 1e-12);
    EXPECT_LE(o, 2.0 * dev / vol + 1e-12);
    EXPECT_LE(o, 2.0 * abs_mean / vol + 1e-12);
    // invariant under adding a constant (1D, where the exterior moves too)
    if (dim == 1) EXPECT_NEAR(oscillation(shifted(f, cc), q), o, 1e-12);
  }
}

TEST(Properties, ProjectionAndMollificationDoNotAddVariation) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = trial % 4 == 3 ? 2 : 1;
    const auto f = random_grid(rng, dim, 1.0 / 32.0, {20 + trial, dim == 2 ? 14 : 1}, dim == 1 && trial % 2 == 0);
    const double tv = total_variation(f);
    if (dim == 1)
      for (Index m : {2, 3, 8}) EXPECT_LE(total_variation(project(f, m * f.h(), {f.h(), 0.0})), tv + 1e-12);
    for (Index w : {1, 2, 4}) EXPECT_LE(total_variation(mollify(f, w * f.h())), tv + 1e-12);
  }
}

TEST(Properties, ResultsDoNotDependOnWorkerCount) {
  std::mt19937_64 rng(58);
  const auto f = random_grid(rng, 2, 1.0 / 32.0, {40, 40}, false);
  SolverOptions o;
  o.rotations = true;
  o.pitch = f.h();
  auto snapshot = [&] {
    std::string s = dump(to_json(keps_greedy(f, 8 * f.h(), o)));
    s += dump(to_json(keps_lattice(f, 8 * f.h(), lattice_offsets(f, 8 * f.h(), f.h()))));
    s += dump(to_json(verify_lemma_nd(f, 4 * f.h())));
    s += format_real(total_variation(f));
    return s;
  };
  ::setenv("BMOTV_THREADS", "1", 1);
  const auto one = snapshot();
  ::setenv("BMOTV_THREADS", "7", 1);
  const auto seven = snapshot();
  ::unsetenv("BMOTV_THREADS");
  EXPECT_EQ(one, seven);
}
