#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bmotv/catalog.hpp"
#include "bmotv/grid.hpp"
#include "bmotv/grid_io.hpp"
#include "bmotv/lattice.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bmotv;

TEST(Lattice, StepsAndRationals) {
  EXPECT_EQ(lattice_steps(0.75, 0.25).value(), 3);
  EXPECT_FALSE(lattice_steps(0.3, 0.25).has_value());
  EXPECT_EQ(lattice_steps(1.0, 1.0 / 6561.0).value(), 6561);
  EXPECT_DOUBLE_EQ(parse_rational("1/16"), 0.0625);
  EXPECT_DOUBLE_EQ(parse_rational(" 3 / 4 "), 0.75);
  EXPECT_DOUBLE_EQ(parse_rational("-0.5"), -0.5);
  EXPECT_BMOTV_ERROR(parse_rational("1/0"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(parse_rational("abc"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(parse_rational(""), ErrorCode::parse_error);
}

TEST(Grid, ExteriorLookup) {
  const auto f = line({1, 2, 3}, 0.25, 0.0, {-1.0, 5.0});
  EXPECT_EQ(f.at(-3), -1.0);
  EXPECT_EQ(f.at(1), 2.0);
  EXPECT_EQ(f.at(3), 5.0);
  const auto g = plane(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(g.at(1, 0), 3.0);
  EXPECT_EQ(g.at(-1, 0), 0.0);
  EXPECT_EQ(g.at(0, 2), 0.0);
}

TEST(Grid, ConstructorRejectsBadInput) {
  EXPECT_BMOTV_ERROR(GridFunction(3, {0, 0}, 0.1, {2, 2}, {1, 2, 3, 4}), ErrorCode::dimension_unsupported);
  EXPECT_BMOTV_ERROR(GridFunction(1, {0, 0}, 0.0, {2, 1}, {1, 2}), ErrorCode::invalid_argument);
  EXPECT_BMOTV_ERROR(GridFunction(1, {0, 0}, 0.1, {3, 1}, {1, 2}), ErrorCode::invalid_argument);
  EXPECT_BMOTV_ERROR(GridFunction(1, {0, 0}, 0.1, {1, 1}, {NAN}), ErrorCode::invalid_argument);
  EXPECT_BMOTV_ERROR(GridFunction(2, {0, 0}, 0.1, {1, 1}, {1}, {1.0, 0.0}), ErrorCode::invalid_argument);
}

TEST(Grid, NormsAndDistances) {
  const auto f = line({1, -1, 2, 0}, 0.25);
  EXPECT_DOUBLE_EQ(mass(f), 0.5);
  EXPECT_DOUBLE_EQ(lp_norm(f, 1.0, f.box()), 1.0);
  EXPECT_NEAR(lp_norm(f, 2.0, f.box()), std::sqrt(1.5), 1e-15);
  const auto g = line({0, 0}, 0.25, 0.25);
  // g covers cells 1,2 of f and is 0 elsewhere
  EXPECT_DOUBLE_EQ(l1_distance(f, g, union_box(f, g)), 1.0);
  // half-cell windows
  EXPECT_DOUBLE_EQ(l1_distance(f, g, Box{{0.125, 0}, {0.375, 0}}), 0.125 + 0.125);
  const auto off = line({0}, 0.25, 0.1);
  EXPECT_BMOTV_ERROR(l1_distance(f, off, f.box()), ErrorCode::incompatible_lattice);
}

TEST(Catalog, CantorIterate) {
  EXPECT_DOUBLE_EQ(detail::cantor_iterate(0.5, 3), 0.5);
  EXPECT_DOUBLE_EQ(detail::cantor_iterate(1.0 / 9.0 + 1e-3, 4), 0.25);
  EXPECT_DOUBLE_EQ(detail::cantor_iterate(0.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(detail::cantor_iterate(1.5, 2), 1.0);
  // linear on [0, 3^-L] with slope (3/2)^L
  EXPECT_NEAR(detail::cantor_iterate(1.0 / 54.0, 3), 1.0 / 54.0 * 3.375, 1e-15);
}

TEST(Catalog, CantorGridIsMonotoneWithClampedTails) {
  FunctionSpec s;
  s.kind = Kind::cantor;
  s.level = 4;
  s.h = 1.0 / 81.0;
  const auto f = generate(s);
  EXPECT_EQ(f.shape()[0], 81);
  EXPECT_EQ(f.exterior()[0], 0.0);
  EXPECT_EQ(f.exterior()[1], 1.0);
  for (Index i = 1; i < 81; ++i) EXPECT_LE(f.at(i - 1), f.at(i));
  EXPECT_NEAR(oracle::face_tv(f), 1.0, 1e-14);
  // the mean of the Cantor function is 1/2 by symmetry
  EXPECT_NEAR(mass(f), 0.5, 1e-14);
  s.h = 1.0 / 64.0;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::resolution_mismatch);
}

TEST(Catalog, RampCellAveragesAreExact) {
  FunctionSpec s;
  s.kind = Kind::ramp;
  s.a = 0.25;
  s.b = 0.75;
  s.slope = 2.0;
  s.shoulder = 0.125;
  s.h = 1.0 / 64.0;
  s.exterior = Exterior::clamp;
  const auto f = generate(s);
  // midpoint quadrature of the profile on each cell
  for (Index i = 0; i < f.shape()[0]; ++i) {
    double q = 0.0;
    const int k = 2000;
    for (int j = 0; j < k; ++j) q += detail::profile_1d(s, (i + (j + 0.5) / k) * s.h);
    EXPECT_NEAR(f.at(i), q / k, 1e-6);
  }
  EXPECT_EQ(f.exterior()[1], 1.0);
  EXPECT_NEAR(oracle::face_tv(f), 1.0, 1e-13);
  EXPECT_TRUE(is_smooth(s));
  const auto d = declared_decomposition(s).value();
  EXPECT_NEAR(d.absolutely_continuous, 1.0, 1e-15);
  EXPECT_EQ(d.jump, 0.0);
}

TEST(Catalog, SbvComboDecomposition) {
  FunctionSpec s;
  s.kind = Kind::sbv_combo;
  s.a = 0.0;
  s.b = 1.0;
  s.jumps = {{0.5, 1.0}};
  s.exterior = Exterior::clamp;
  s.box = Box{{-0.125, 0}, {1.125, 0}};
  s.h = 1.0 / 64.0;
  const auto d = declared_decomposition(s).value();
  EXPECT_DOUBLE_EQ(d.absolutely_continuous, 1.0);
  EXPECT_DOUBLE_EQ(d.jump, 1.0);
  EXPECT_NEAR(oracle::face_tv(generate(s)), 2.0, 1e-13);
  EXPECT_FALSE(is_smooth(s));
}

TEST(Catalog, JumpsOnCellFacesStayOnOneSide) {
  FunctionSpec s;
  s.kind = Kind::step;
  s.h = 1.0 / 8.0;
  const auto f = generate(s);
  for (Index i = 0; i < 8; ++i) EXPECT_EQ(f.at(i), i < 4 ? 0.0 : 1.0) << i;
  s.position = 5.5 / 8.0;
  EXPECT_DOUBLE_EQ(generate(s).at(5), 0.5);

  s.kind = Kind::sbv_combo;
  s.a = 0.0;
  s.b = 1.0;
  s.jumps = {{0.5, 1.0}};
  s.h = 1.0 / 64.0;
  const auto g = generate(s);
  EXPECT_NEAR(g.at(31), 0.5 - 0.5 * s.h, 1e-15);
  EXPECT_NEAR(g.at(32), 1.5 + 0.5 * s.h, 1e-15);
}

TEST(Catalog, IndicatorsUseCellCenters) {
  FunctionSpec s;
  s.kind = Kind::indicator_disk;
  s.dim = 2;
  s.radius = 0.3;
  s.center = {0.0, 0.0};
  s.box = Box{{-0.5, -0.5}, {0.5, 0.5}};
  s.h = 1.0 / 256.0;
  const auto f = generate(s);
  EXPECT_NEAR(mass(f), std::numbers::pi * 0.09, 2e-3);
  for (double v : f.values()) EXPECT_TRUE(v == 0.0 || v == 1.0);

  FunctionSpec q;
  q.kind = Kind::indicator_square;
  q.dim = 2;
  q.center = {0.5, 0.5};
  q.side = 0.5;
  q.h = 1.0 / 16.0;
  EXPECT_DOUBLE_EQ(mass(generate(q)), 0.25);
  EXPECT_NEAR(oracle::face_tv(generate(q)), 2.0, 1e-14);
}

TEST(Catalog, CheckerboardAndGaussian) {
  FunctionSpec c;
  c.kind = Kind::checkerboard;
  c.dim = 2;
  c.period = 0.25;
  c.h = 1.0 / 16.0;
  const auto f = generate(c);
  EXPECT_DOUBLE_EQ(mass(f), 0.5);
  EXPECT_EQ(f.at(0, 0), 0.0);
  EXPECT_EQ(f.at(4, 0), 1.0);
  EXPECT_EQ(f.at(4, 4), 0.0);

  FunctionSpec g;
  g.kind = Kind::gaussian_smooth;
  g.center = {0.5, 0.0};
  g.sigma = 0.05;
  g.value = 1.0;
  g.h = 1.0 / 128.0;
  EXPECT_NEAR(mass(generate(g)), 0.05 * std::sqrt(2.0 * std::numbers::pi), 1e-9);
}

TEST(Catalog, ScaledProfileMass) {
  // integral over [0,1] of (x/s)^-1/2 on x < s is 2 s
  FunctionSpec s;
  s.kind = Kind::scaled_profile;
  s.alpha = 0.5;
  s.scale = 0.125;
  s.h = 1.0 / 256.0;
  EXPECT_NEAR(mass(generate(s)), 0.25, 1e-12);
}

TEST(Catalog, ValidationFailures) {
  FunctionSpec s;
  s.kind = Kind::cantor;
  s.dim = 2;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::invalid_spec);
  s = {};
  s.kind = Kind::ramp;
  s.a = 0.5;
  s.b = 0.25;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::invalid_spec);
  s = {};
  s.kind = Kind::indicator_interval;
  s.a = 0.0;
  s.b = 0.5;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::invalid_spec);
  s = {};
  s.box = Box{{0, 0}, {0.3, 0}};
  s.h = 0.25;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::invalid_spec);
  s = {};
  s.kind = Kind::scaled_profile;
  s.alpha = 1.0;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::invalid_spec);
  s = {};
  s.dim = 3;
  EXPECT_BMOTV_ERROR(generate(s), ErrorCode::dimension_unsupported);
  EXPECT_EQ(kind_from_string("indicator_disk"), Kind::indicator_disk);
  EXPECT_THROW(kind_from_string("blob"), Error);
}

TEST(GridIo, RoundTripIsExact) {
  FunctionSpec s;
  s.kind = Kind::cantor;
  s.level = 3;
  s.h = 1.0 / 27.0;
  s.box = Box{{-1.0 / 9.0, 0}, {1.0, 0}};
  const auto f = generate(s);
  std::stringstream a;
  write_grid(f, a);
  const auto g = read_grid(a);
  EXPECT_EQ(g.values(), f.values());
  EXPECT_EQ(g.exterior(), f.exterior());
  EXPECT_EQ(g.h(), f.h());
  EXPECT_EQ(g.origin(), f.origin());
  std::stringstream b;
  write_grid(g, b);
  EXPECT_EQ(a.str(), b.str());

  const auto p = plane(2, 3, {0.1, 0.2, 0.3, 0.4, 0.5, 1.0 / 3.0});
  std::stringstream c;
  write_grid(p, c);
  const auto q = read_grid(c);
  EXPECT_EQ(q.values(), p.values());
  EXPECT_EQ(q.shape(), p.shape());
}

TEST(GridIo, ParseErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_grid(in);
  };
  EXPECT_BMOTV_ERROR(parse("not-a-grid\n"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(parse("bmotv-grid v1\ndim 1\norigin 0\nh 0.5\nshape 2\n1\n"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(parse("bmotv-grid v1\ndim 1\norigin 0\nh 0.5\nshape 2\n1 x\n"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(parse("bmotv-grid v1\ndim 1\norigin 0\nh 0.5\nshape 2\n1 2 3\n"), ErrorCode::parse_error);
  EXPECT_BMOTV_ERROR(read_grid(std::string("/nonexistent/grid.txt")), ErrorCode::io_error);
  const auto ok = parse("bmotv-grid v1\ndim 1\norigin 0\nh 0.5\nshape 2\nexterior 0 1\n1 2\n");
  EXPECT_EQ(ok.exterior()[1], 1.0);
}
