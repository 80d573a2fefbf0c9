#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bmotv/catalog.hpp"
#include "bmotv/gamma_lab.hpp"
#include "bmotv/mesh.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bmotv;

namespace {

GridFunction random_line(std::mt19937_64& rng, Index n, bool exterior) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = u(rng);
  std::array<double, 2> ext{0.0, 0.0};
  if (exterior) ext = {u(rng), u(rng)};
  return GridFunction(1, {0.25, 0.0}, 1.0 / 32.0, {n, 1}, std::move(v), ext);
}

}  // namespace

TEST(Projection, MatchesDirectAverages1D) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_line(rng, 13 + trial, trial % 2 == 1);
    for (Index m : {1, 2, 3, 5}) {
      for (Index t : {0, 1, -2}) {
        const double tau = f.origin()[0] + t * f.h();
        const auto p = project(f, m * f.h(), {tau, 0.0});
        const IVec off = lattice_offset(f, p);
        // every cell of the projection and a margin on each side
        for (Index i = -m - 2; i < p.shape()[0] + m + 2; ++i) {
          const Index fi = i + off[0];
          EXPECT_NEAR(p.at(i), oracle::mesh_mean(f, fi, 0, m, t, 0), 1e-13) << "m=" << m << " t=" << t;
        }
      }
    }
  }
}

TEST(Projection, MatchesDirectAverages2D) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_grid(rng, 2, 1.0 / 16.0, {7 + trial, 5 + trial}, false);
    for (Index m : {2, 3}) {
      const Index t = trial - 2;
      const auto p = project(f, m * f.h(), {t * f.h(), t * f.h()});
      const IVec off = lattice_offset(f, p);
      for (Index i = -1; i <= p.shape()[0]; ++i)
        for (Index j = -1; j <= p.shape()[1]; ++j) {
          const double want = p.in_box(i, j) ? oracle::mesh_mean(f, i + off[0], j + off[1], m, t, t) : 0.0;
          EXPECT_NEAR(p.at(i, j), want, 1e-13);
        }
    }
  }
}

TEST(Projection, MassPreservedAndIdempotent) {
  std::mt19937_64 rng(13);
  for (int dim : {1, 2}) {
    const auto f = random_grid(rng, dim, 1.0 / 16.0, {11, dim == 2 ? 9 : 1}, false);
    const auto p = project(f, 4.0 / 16.0, diagonal(1.0 / 16.0));
    EXPECT_NEAR(mass(p), mass(f), 1e-13);
    const auto pp = project(p, 4.0 / 16.0, diagonal(1.0 / 16.0));
    EXPECT_EQ(pp.shape(), p.shape());
    for (std::size_t k = 0; k < p.values().size(); ++k) EXPECT_NEAR(pp.values()[k], p.values()[k], 1e-14);
  }
}

TEST(Projection, RejectsOffLatticeMeshes) {
  const auto f = line({1, 2, 3, 4}, 0.25);
  EXPECT_BMOTV_ERROR(project(f, 0.3, {0, 0}), ErrorCode::delta_not_multiple_of_h);
  EXPECT_BMOTV_ERROR(project(f, 0.0, {0, 0}), ErrorCode::delta_not_multiple_of_h);
  EXPECT_BMOTV_ERROR(project(f, 0.5, {0.1, 0}), ErrorCode::tau_not_on_lattice);
}

TEST(TotalVariation, MatchesFaceCount) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = trial % 2 ? 2 : 1;
    const auto f = random_grid(rng, dim, 1.0 / 16.0, {5 + trial, dim == 2 ? 3 + trial : 1}, dim == 1 && trial % 4 == 0);
    EXPECT_NEAR(total_variation(f), oracle::face_tv(f), 1e-12);
  }
  EXPECT_DOUBLE_EQ(total_variation(line({0, 0, 0}, 0.25, 0.0, {1.0, -1.0})), 2.0);
}

TEST(TotalVariation, DigitalDiskEqualsBoundingBoxPerimeter) {
  FunctionSpec s;
  s.kind = Kind::indicator_disk;
  s.dim = 2;
  s.radius = 0.3;
  s.center = {0.0, 0.0};
  s.box = Box{{-0.5, -0.5}, {0.5, 0.5}};
  s.h = 1.0 / 512.0;
  const auto f = generate(s);
  // cell-center disks are orthogonally convex, so the staircase perimeter
  // equals the perimeter of the bounding box of the occupied cells
  Index lo0 = f.shape()[0], hi0 = -1, lo1 = f.shape()[1], hi1 = -1;
  for (Index i = 0; i < f.shape()[0]; ++i)
    for (Index j = 0; j < f.shape()[1]; ++j)
      if (f.at(i, j) != 0.0) {
        lo0 = std::min(lo0, i);
        hi0 = std::max(hi0, i);
        lo1 = std::min(lo1, j);
        hi1 = std::max(hi1, j);
      }
  const double want = 2.0 * ((hi0 - lo0 + 1) + (hi1 - lo1 + 1)) * f.h();
  EXPECT_NEAR(total_variation(f), want, 1e-12);
  EXPECT_NEAR(total_variation(f), 8.0 * 0.3, 4.0 * f.h());
}

TEST(DirectionalVariation, StepAndSquare) {
  const auto step = line({0, 0, 2, 2}, 0.25);
  const Box all{{-1, 0}, {2, 0}};
  auto d = directional_tv(step, {1.0, 0.0}, all);
  EXPECT_DOUBLE_EQ(d.signed_value, 0.0);  // up at 0.5, down at the right boundary
  EXPECT_DOUBLE_EQ(d.absolute, 4.0);
  d = directional_tv(step, {-1.0, 0.0}, Box{{0.25, 0}, {0.75, 0}});
  EXPECT_DOUBLE_EQ(d.signed_value, -2.0);
  EXPECT_DOUBLE_EQ(d.absolute, 2.0);

  FunctionSpec s;
  s.kind = Kind::indicator_square;
  s.dim = 2;
  s.center = {0.5, 0.5};
  s.side = 0.5;
  s.h = 1.0 / 32.0;
  const auto sq = generate(s);
  d = directional_tv(sq, {1.0, 0.0}, sq.box());
  EXPECT_NEAR(d.signed_value, 0.0, 1e-14);
  EXPECT_NEAR(d.absolute, 2.0, 1e-14);
  d = directional_tv(sq, {1.0, 0.0}, Box{{0.0, 0.0}, {0.5, 1.0}});
  // left edge plus half of the top and bottom edges
  EXPECT_NEAR(d.signed_value, 0.5, 1e-14);
  EXPECT_NEAR(d.absolute, 1.0, 1e-14);
  const double r = std::sqrt(0.5);
  d = directional_tv(sq, {r, r}, Box{{0.0, 0.0}, {0.5, 0.5}});
  EXPECT_NEAR(d.signed_value, 0.5 * r, 1e-14);
  EXPECT_BMOTV_ERROR(directional_tv(sq, {1.0, 1.0}, sq.box()), ErrorCode::non_unit_direction);
}

TEST(DirectionalVariation, BlowupRatio) {
  const auto step = line(std::vector<double>(8, 0.0), 1.0 / 8.0);
  std::vector<double> v(16, 0.0);
  for (int i = 8; i < 16; ++i) v[static_cast<std::size_t>(i)] = 1.0;
  const auto f = line(v, 1.0 / 16.0);
  const auto up = blowup_ratio(f, {0.5, 0.0}, {1.0, 0.0}, {1.0 / 16.0, 2.0 / 16.0, 4.0 / 16.0});
  for (double x : up) EXPECT_DOUBLE_EQ(x, 1.0);
  const auto down = blowup_ratio(f, {0.5, 0.0}, {-1.0, 0.0}, {1.0 / 16.0});
  EXPECT_DOUBLE_EQ(down[0], -1.0);
  EXPECT_TRUE(std::isnan(blowup_ratio(f, {0.25, 0.0}, {1.0, 0.0}, {1.0 / 16.0})[0]));
  EXPECT_BMOTV_ERROR(blowup_ratio(step, {0.5, 0.0}, {1.0, 0.0}, {0.1}), ErrorCode::radius_not_on_lattice);
}

TEST(Mollifier, KernelShape) {
  for (Index w : {1, 2, 5, 17}) {
    const auto k = triangular_kernel(w);
    ASSERT_EQ(static_cast<Index>(k.size()), 2 * w - 1);
    double s = 0.0;
    for (double x : k) s += x;
    EXPECT_NEAR(s, 1.0, 1e-15);
    for (std::size_t j = 0; j < k.size(); ++j) EXPECT_EQ(k[j], k[k.size() - 1 - j]);
  }
}

TEST(Mollifier, MatchesDirectConvolution2D) {
  std::mt19937_64 rng(15);
  const auto f = random_grid(rng, 2, 1.0 / 16.0, {6, 7}, false);
  const Index w = 3;
  const auto g = mollify(f, w * f.h());
  const auto k = triangular_kernel(w);
  const IVec off = lattice_offset(f, g);
  for (Index i = 0; i < g.shape()[0]; ++i)
    for (Index j = 0; j < g.shape()[1]; ++j) {
      double s = 0.0;
      for (Index a = -(w - 1); a <= w - 1; ++a)
        for (Index b = -(w - 1); b <= w - 1; ++b)
          s += k[static_cast<std::size_t>(a + w - 1)] * k[static_cast<std::size_t>(b + w - 1)] *
               f.at(i + off[0] - a, j + off[1] - b);
      EXPECT_NEAR(g.at(i, j), s, 1e-14);
    }
  EXPECT_NEAR(mass(g), mass(f), 1e-13);
  EXPECT_LE(total_variation(g), total_variation(f) + 1e-12);
}

TEST(Mollifier, ConstantTailsSurvive) {
  const auto f = line({0, 0, 1, 1}, 0.25, 0.0, {0.0, 1.0});
  const auto g = mollify(f, 0.5);
  EXPECT_EQ(g.exterior()[1], 1.0);
  EXPECT_DOUBLE_EQ(g.at(g.shape()[0] - 1), 1.0);
  EXPECT_DOUBLE_EQ(g.at(0), 0.0);
  EXPECT_NEAR(total_variation(g), 1.0, 1e-15);
  EXPECT_BMOTV_ERROR(mollify(f, 0.3), ErrorCode::width_not_on_lattice);
}
