#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bmotv/catalog.hpp"
#include "bmotv/gamma_lab.hpp"
#include "bmotv/packing.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bmotv;

namespace {

GridFunction indicator_unit_interval(double h) {
  FunctionSpec s;
  s.kind = Kind::indicator_interval;
  s.a = 0.0;
  s.b = 1.0;
  s.box = Box{{-0.5, 0}, {1.5, 0}};
  s.h = h;
  return generate(s);
}

}  // namespace

TEST(Dp1d, MatchesEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 6 + trial % 10;
    const auto f = random_grid(rng, 1, 1.0 / 16.0, {n, 1}, trial % 3 == 0);
    for (Index m : {1, 2, 3, 5}) {
      const double want = oracle::brute_keps_1d(f, m, -m + 1, n - 1);
      const auto sol = keps_1d_dp(f, m * f.h());
      EXPECT_NEAR(sol.score, want, 1e-12) << "trial " << trial << " m " << m;
      EXPECT_TRUE(verify_disjoint(sol.family, 1));
      EXPECT_TRUE(sol.certified_exact_over_candidates);
      for (Index cap : {1, 2}) {
        const double capped = oracle::brute_keps_1d(f, m, -m + 1, n - 1, cap);
        const auto c = keps_1d_dp(f, m * f.h(), cap);
        EXPECT_NEAR(c.score, capped, 1e-12);
        EXPECT_LE(static_cast<Index>(c.family.cubes.size()), cap);
      }
    }
  }
}

TEST(Dp1d, IndicatorIsExactlyHalfPerimeter) {
  const auto f = indicator_unit_interval(1.0 / 1024.0);
  for (int k = 2; k <= 8; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const auto sol = keps_1d_dp(f, eps);
    EXPECT_NEAR(sol.score, 1.0, 1e-12);
    EXPECT_EQ(sol.family.cubes.size(), 2u);
    EXPECT_NEAR(ieps(f, eps, Solver::dp1d).score, 0.5, 1e-12);
  }
}

TEST(Dp1d, RejectsBadInput) {
  const auto f = line({0, 1, 0, 1});
  EXPECT_BMOTV_ERROR(keps_1d_dp(f, 0.1), ErrorCode::eps_not_multiple_of_h);
  EXPECT_BMOTV_ERROR(keps_1d_dp(plane(2, 2, {0, 1, 1, 0}), 0.125), ErrorCode::dimension_unsupported);
}

TEST(Oracle, MatchesKingGraphTransferMatrix) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n0 = 8 + trial % 5, n1 = 6 + trial % 4;
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {n0, n1}, false);
    for (Index m : {2, 4}) {
      SolverOptions o;
      o.pitch = (m / 2) * f.h();
      const auto sol = keps_oracle(f, m * f.h(), o);
      EXPECT_NEAR(sol.score, oracle::king_keps_2d(f, m), 1e-12) << "trial " << trial << " m " << m;
      EXPECT_TRUE(verify_disjoint(sol.family, 2));
    }
  }
}

TEST(Oracle, MatchesSubsetEnumerationWithRotations) {
  // small explicit candidate sets with rotated cubes and a cardinality cap
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> pos(0.0, 1.0), ang(0.0, std::numbers::pi / 2.0), wt(0.1, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Candidate> cands;
    for (int k = 0; k < 16; ++k) cands.push_back({make_cube({pos(rng), pos(rng)}, 0.3, ang(rng)), wt(rng), false});
    std::vector<double> w;
    std::vector<std::vector<bool>> conflict(cands.size(), std::vector<bool>(cands.size(), false));
    for (std::size_t a = 0; a < cands.size(); ++a) {
      w.push_back(cands[a].osc);
      for (std::size_t b = 0; b < cands.size(); ++b)
        conflict[a][b] = a != b && cubes_overlap(cands[a].cube, cands[b].cube, 2);
    }
    detail::SweepSearch search(cands, 2, std::nullopt, 1u << 20);
    search.run();
    double got = 0.0;
    for (std::size_t k : search.best()) got += cands[k].osc;
    EXPECT_NEAR(got, oracle::brute_mwis(w, conflict), 1e-12);
    const auto picked = search.best();
    for (std::size_t a = 0; a < picked.size(); ++a)
      for (std::size_t b = a + 1; b < picked.size(); ++b) EXPECT_FALSE(conflict[picked[a]][picked[b]]);

    // cap 2: best pair or single
    double best2 = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a) {
      best2 = std::max(best2, w[a]);
      for (std::size_t b = a + 1; b < w.size(); ++b)
        if (!conflict[a][b]) best2 = std::max(best2, w[a] + w[b]);
    }
    detail::SweepSearch capped(cands, 2, Index{2}, 1u << 20);
    capped.run();
    double got2 = 0.0;
    for (std::size_t k : capped.best()) got2 += cands[k].osc;
    EXPECT_NEAR(got2, best2, 1e-12);
  }
}

TEST(Oracle, BudgetIsEnforced) {
  std::mt19937_64 rng(34);
  const auto f = random_grid(rng, 2, 1.0 / 16.0, {16, 16}, false);
  SolverOptions o;
  o.pitch = f.h();
  o.budget = 50;
  EXPECT_BMOTV_ERROR(keps_oracle(f, 4 * f.h(), o), ErrorCode::budget_exceeded);
}

TEST(Oracle, OneDimensionalAgreesWithDp) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 15; ++trial) {
    const auto f = random_grid(rng, 1, 1.0 / 32.0, {20 + trial, 1}, trial % 2 == 0);
    const double eps = (2 + trial % 4) * f.h();
    SolverOptions o;
    o.pitch = f.h();
    EXPECT_NEAR(keps_oracle(f, eps, o).score, keps_1d_dp(f, eps).score, 1e-12);
  }
}

TEST(Heuristics, NeverExceedTheOracle) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {12, 12}, false);
    const double eps = 4 * f.h();
    SolverOptions o;
    o.pitch = 2 * f.h();
    const double best = keps_oracle(f, eps, o).score;
    EXPECT_LE(keps_greedy(f, eps, o).score, best + 1e-12);
    EXPECT_LE(keps_lattice(f, eps, lattice_offsets(f, eps, o.pitch)).score, best + 1e-12);
    o.tie_tolerance = 0.05;
    EXPECT_LE(keps_greedy(f, eps, o).score, best + 1e-12);
  }
}

TEST(Lattice, FaceAlignedSquare) {
  FunctionSpec s;
  s.kind = Kind::indicator_square;
  s.dim = 2;
  s.center = {0.5, 0.5};
  s.side = 1.0;
  s.box = Box{{-0.25, -0.25}, {1.25, 1.25}};
  s.h = 1.0 / 64.0;
  const auto f = generate(s);
  const double eps = 1.0 / 8.0;
  // the faces bisect every boundary cube: 4 sides * 8 cubes * eps * 1/2, minus the corner loss
  const auto sol = keps_lattice(f, eps, {{eps / 2, eps / 2}});
  EXPECT_NEAR(sol.score, 2.0 - 4 * eps * (0.5 - 0.375), 1e-12);
  EXPECT_EQ(sol.metadata.at("best_offset"), "0.0625,0.0625");
  // the grid-aligned offset puts the faces on cube boundaries
  EXPECT_NEAR(keps_lattice(f, eps, {{0.0, 0.0}}).score, 0.0, 1e-15);
  EXPECT_BMOTV_ERROR(keps_lattice(f, eps, {{0.01, 0.0}}), ErrorCode::offset_not_on_lattice);
  EXPECT_EQ(lattice_offsets(f, eps, 2.0 / 64.0).size(), 16u);
}

TEST(Greedy, RotatedCubesHelpOnDiagonalEdges) {
  // half-plane x + y > 1: axis cubes straddling the diagonal see a staircase,
  // cubes rotated by pi/4 can be bisected by it
  const Index n = 64;
  std::vector<double> v(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) v[static_cast<std::size_t>(i * n + j)] = (i + j + 1 > n) ? 1.0 : 0.0;
  const auto f = plane(n, n, v, 1.0 / n);
  SolverOptions o;
  o.pitch = 1.0 / n;
  const double axis = keps_greedy(f, 1.0 / 8.0, o).score;
  o.rotations = true;
  o.angle_source = AngleSource::gradient;
  const auto rot = keps_greedy(f, 1.0 / 8.0, o);
  EXPECT_GT(rot.score, axis);
  EXPECT_EQ(rot.family.orientation_mode, OrientationMode::rotated);
  EXPECT_GT(std::stoul(rot.metadata.at("gradient_candidates")), 0u);
  EXPECT_TRUE(verify_disjoint(rot.family, 2));
}

TEST(Greedy, CandidateOrderIsDeterministic) {
  std::mt19937_64 rng(37);
  const auto f = random_grid(rng, 2, 1.0 / 16.0, {10, 10}, false);
  SolverOptions o;
  o.rotations = true;
  o.pitch = f.h();
  const auto a = build_candidates(f, 4 * f.h(), o);
  const auto b = build_candidates(f, 4 * f.h(), o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].osc, b[k].osc);
    EXPECT_EQ(a[k].cube.center, b[k].cube.center);
    EXPECT_EQ(a[k].cube.angle, b[k].cube.angle);
  }
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_GE(a[k - 1].osc, a[k].osc);
}

TEST(Capped, CardinalityLimit) {
  EXPECT_EQ(cardinality_cap(0.25, 1), 1);
  EXPECT_EQ(cardinality_cap(0.25, 2), 4);
  EXPECT_EQ(cardinality_cap(1.0 / 3.0, 2), 3);
  EXPECT_EQ(cardinality_cap(2.0, 2), 1);
  std::mt19937_64 rng(38);
  const auto f = random_grid(rng, 2, 1.0 / 16.0, {12, 12}, false);
  const double eps = 4 * f.h();  // cap 4
  SolverOptions o;
  o.pitch = 2 * f.h();
  const auto capped = ieps(f, eps, Solver::oracle, o);
  EXPECT_LE(capped.family.cubes.size(), 4u);
  EXPECT_LE(capped.score, keps_oracle(f, eps, o).score + 1e-12);
  EXPECT_LE(ieps(f, eps, Solver::greedy, o).score, capped.score + 1e-12);
  EXPECT_THROW(ieps(f, eps, Solver::lattice, o), Error);
}

TEST(Bbm, RestrictsToTheUnitCube) {
  // indicator of [1/4, 3/4] inside (0,1): two bisected intervals fit at every eps = 1/2^k, k >= 2
  std::vector<double> v(64, 0.0);
  for (int i = 16; i < 48; ++i) v[static_cast<std::size_t>(i)] = 1.0;
  const auto f = line(v, 1.0 / 64.0);
  for (int k = 2; k <= 5; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const auto sol = bbm_seminorm(f, eps);
    // cap is 1 in 1D
    EXPECT_NEAR(sol.score, 0.5, 1e-12);
    for (const auto& q : sol.family.cubes) {
      EXPECT_GE(q.center[0] - 0.5 * eps, -1e-12);
      EXPECT_LE(q.center[0] + 0.5 * eps, 1.0 + 1e-12);
    }
  }
  // 2D: cubes inside Q0 only; the boundary of the unit cube does not count
  const auto sq = plane(16, 16, std::vector<double>(256, 1.0));
  EXPECT_NEAR(bbm_seminorm(sq, 0.25, Solver::oracle).score, 0.0, 1e-15);
  std::vector<double> w(256, 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 16; ++j) w[static_cast<std::size_t>(i * 16 + j)] = 1.0;
  const auto half = plane(16, 16, w);
  // cap 4; each bisected cube scores eps / 2
  EXPECT_NEAR(bbm_seminorm(half, 0.25, Solver::oracle).score, 4 * 0.25 * 0.5, 1e-12);
  EXPECT_NEAR(bbm_seminorm(half, 0.25, Solver::greedy).score, 4 * 0.25 * 0.5, 1e-12);

  EXPECT_BMOTV_ERROR(bbm_seminorm(line({1, 1}, 0.5, -0.5), 0.5), ErrorCode::support_outside_q0);
  EXPECT_BMOTV_ERROR(bbm_seminorm(line({1, 1}, 0.5, 0.0, {0.0, 1.0}), 0.5), ErrorCode::support_outside_q0);
  EXPECT_BMOTV_ERROR(bbm_seminorm(f, 3.0 / 64.0), ErrorCode::invalid_argument);
}

TEST(Names, RoundTrip) {
  for (Solver s : {Solver::dp1d, Solver::lattice, Solver::greedy, Solver::oracle})
    EXPECT_EQ(solver_from_string(to_string(s)), s);
  for (AngleSource s : {AngleSource::uniform, AngleSource::gradient, AngleSource::both})
    EXPECT_EQ(angle_source_from_string(to_string(s)), s);
  EXPECT_THROW(solver_from_string("simplex"), Error);
}
