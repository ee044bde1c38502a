#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pw/grid.hpp"

#include <cmath>
#include <numbers>

using namespace pw;

namespace {

double radius(const Point& p) { return std::hypot(p.x, p.z); }

double interior_area(const MappedGrid& g) {
  double a = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) a += g.kappa[g.cell(i, j)] * g.dxi1 * g.dxi2;
  return a;
}

void check_common(const MappedGrid& g) {
  for (int j = -MappedGrid::ng; j < g.N2 + MappedGrid::ng; ++j)
    for (int i = -MappedGrid::ng; i < g.N1 + MappedGrid::ng; ++i) REQUIRE(g.kappa[g.cell(i, j)] > 0);
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i <= g.N1; ++i) CHECK(std::hypot(g.xn_x[g.xedge(i, j)], g.xn_z[g.xedge(i, j)]) == doctest::Approx(1).epsilon(1e-14));
  for (int j = 0; j <= g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) CHECK(std::hypot(g.yn_x[g.yedge(i, j)], g.yn_z[g.yedge(i, j)]) == doctest::Approx(1).epsilon(1e-14));
}

}  // namespace

TEST_CASE("identity mapping gives unit capacities and axis normals") {
  const MappedGrid g = build_grid(GridMapping::identity(0, 1, 0, 1), 10, 10, [](double, double) { return 0; });
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) CHECK(std::abs(g.kappa[g.cell(i, j)] - 1) < 1e-13);
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i <= 10; ++i) {
      CHECK(g.xn_x[g.xedge(i, j)] == 1);
      CHECK(g.xn_z[g.xedge(i, j)] == 0);
      CHECK(g.x_ratio[g.xedge(i, j)] == doctest::Approx(1));
    }
  for (int j = 0; j <= 10; ++j)
    for (int i = 0; i < 10; ++i) {
      CHECK(g.yn_x[g.yedge(i, j)] == 0);
      CHECK(g.yn_z[g.yedge(i, j)] == 1);
    }
  CHECK(g.total_area() == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("square-to-circle grid partitions the 20 cm square") {
  const GridMapping m = GridMapping::square_to_circle(0.1, 0.025);
  const MappedGrid g = build_grid(m, 128, 128, [](double x, double z) { return std::hypot(x, z) < 0.025 ? 1 : 0; });
  check_common(g);
  CHECK(std::abs(g.total_area() - 0.04) < 1e-10 * 0.04);
  CHECK(std::abs(interior_area(g) - 0.04) < 1e-10 * 0.04);
  // The disk is made of whole cells; its area converges to pi r^2 from the polygon.
  double disk = 0;
  for (int j = 0; j < 128; ++j)
    for (int i = 0; i < 128; ++i)
      if (g.material[g.cell(i, j)] == 1) disk += g.kappa[g.cell(i, j)] * g.dxi1 * g.dxi2;
  CHECK(std::abs(disk - std::numbers::pi * 0.025 * 0.025) < 2e-3 * disk);
}

TEST_CASE("core grid line profile: R(1) = r1, R'(1) = r1, R''(1) = 0") {
  CHECK(core_arc_radius(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(core_arc_radius(0.0) == doctest::Approx(0.9));
  CHECK(core_corner_offset(1.0) == doctest::Approx(1 / std::sqrt(2.0)));
  const double h = 1e-6;
  const double d1 = (core_arc_radius(1 + h) - core_arc_radius(1 - h)) / (2 * h);
  CHECK(std::abs(d1 - 1) < 1e-6);
  const double h2 = 1e-4;
  const double d2 = (core_arc_radius(1 + h2) - 2 * core_arc_radius(1) + core_arc_radius(1 - h2)) / (h2 * h2);
  CHECK(std::abs(d2) < 1e-4 * 342);  // relative to the size of either term of R''
}

TEST_CASE("square-to-circle mapping: centre, circle, continuity") {
  const double r1 = 0.025;
  const GridMapping m = GridMapping::square_to_circle(0.1, r1);
  const Point c = m.map(0, 0);
  CHECK(std::abs(c.x) < 1e-15);
  CHECK(std::abs(c.z) < 1e-15);
  const double s = m.core_half;
  for (double t : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
    CHECK(std::abs(radius(m.map(s, t * s)) - r1) < 1e-12 * r1);
    CHECK(std::abs(radius(m.map(t * s, -s)) - r1) < 1e-12 * r1);
  }
  // Continuity across the blend seam and the outer identity region.
  const double e = 1e-9;
  for (double t : {-0.7, 0.1, 0.9}) {
    const Point a = m.map(m.blend_half - e, t * m.blend_half), b = m.map(m.blend_half + e, t * m.blend_half);
    CHECK(std::hypot(a.x - b.x, a.z - b.z) < 1e-7);
    const Point o = m.map(0.09, t * 0.09);
    CHECK(o.x == doctest::Approx(0.09));
  }
}

TEST_CASE("femur annulus mapping: exact radii, monotone shells, positive Jacobian") {
  const double rc = 0.007, ro = 0.012;
  const GridMapping m = GridMapping::concentric_annulus(0.04, rc, ro);
  for (double t : {-1.0, -0.25, 0.0, 0.6, 1.0}) {
    CHECK(std::abs(radius(m.map(m.core_half, t * m.core_half)) - rc) < 1e-12 * rc);
    CHECK(std::abs(radius(m.map(t * m.shell_half, m.shell_half)) - ro) < 1e-12 * ro);
  }
  for (double t : {0.0, 0.4, 1.0}) {
    double prev = 0;
    for (int k = 0; k <= 50; ++k) {
      const double s = m.core_half + (m.shell_half - m.core_half) * k / 50.0;
      const double r = radius(m.map(s, t * s));
      CHECK(r > prev);
      prev = r;
    }
  }
  const MappedGrid g = build_grid(m, 120, 120, [=](double x, double z) {
    const double r = std::hypot(x, z);
    return r < rc ? 2 : (r < ro ? 1 : 0);
  });
  check_common(g);
  CHECK(std::abs(g.total_area() - 0.0064) < 1e-10 * 0.0064);
}

TEST_CASE("refined grid vertices coincide with the coarse ones") {
  const GridMapping m = GridMapping::square_to_circle(0.1, 0.025);
  const MappedGrid c = build_grid(m, 32, 32, [](double, double) { return 0; });
  const MappedGrid f = build_grid(m, 64, 64, [](double, double) { return 0; });
  for (int j = 0; j <= 32; ++j)
    for (int i = 0; i <= 32; ++i) {
      const Point& a = c.vertices[c.vertex(i, j)];
      const Point& b = f.vertices[f.vertex(2 * i, 2 * j)];
      CHECK(a.x == b.x);
      CHECK(a.z == b.z);
    }
}

TEST_CASE("materials by centroid; ghosts copy the adjacent interior cell") {
  const MappedGrid g = build_grid(GridMapping::identity(-1, 1, -1, 1), 8, 8, [](double x, double) { return x < 0 ? 3 : 5; });
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) CHECK(g.material[g.cell(i, j)] == (g.centroid[g.cell(i, j)].x < 0 ? 3 : 5));
  for (int j = 0; j < 8; ++j) {
    CHECK(g.material[g.cell(-1, j)] == 3);
    CHECK(g.material[g.cell(-2, j)] == 3);
    CHECK(g.material[g.cell(8, j)] == 5);
    CHECK(g.material[g.cell(9, j)] == 5);
  }
}

TEST_CASE("invalid requests are rejected") {
  CHECK_THROWS_AS(build_grid(GridMapping::identity(0, 1, 0, 1), 3, 8, [](double, double) { return 0; }), GridError);
  CHECK_THROWS_AS(GridMapping::identity(1, 0, 0, 1), GridError);
  CHECK_THROWS_AS(GridMapping::square_to_circle(0.1, 0.06), GridError);
  CHECK_THROWS_AS(GridMapping::concentric_annulus(0.04, 0.012, 0.007), GridError);
}

TEST_CASE("quad area by shoelace") {
  CHECK(quad_area({0, 0}, {2, 0}, {2, 3}, {0, 3}) == doctest::Approx(6));
}
