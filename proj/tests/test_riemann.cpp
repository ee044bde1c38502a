#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pw/riemann.hpp"
#include "pw/solver.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

using namespace pw;

namespace {

MaterialModel poro(const PoroMaterial& p, int id, double theta = 0) {
  PoroMaterial q = p;
  q.theta = theta;
  return make_model(Material::make_poro("m", q), id);
}

MaterialModel fluid(const FluidMaterial& f, int id) { return make_model(Material::make_fluid("f", f), id); }

std::vector<PoroMaterial> media() {
  return {presets::sandstone(), presets::shale(), presets::cortical_bone(), presets::cancellous_bone()};
}

Vec8 random_state(std::mt19937& rng, bool fluid_only = false) {
  std::normal_distribution<double> n01;
  Vec8 q;
  for (int i = 0; i < 8; ++i) q(i) = n01(rng) * (i < 4 ? 1e6 : 1.0);
  if (fluid_only) q.segment(1, 5).setZero();
  return q;
}

double rel(const Vec8& a, const Vec8& b) { return (a - b).norm() / std::max(1e-300, std::max(a.norm(), b.norm())); }

}  // namespace

TEST_CASE("sandstone principal-axis speeds") {
  const MaterialModel m = poro(presets::sandstone(), 0);
  const WaveSet ws = edge_eigensystem(m, 1, 0);
  REQUIRE(ws.count == 6);
  const double want[3] = {1030, 3480, 6000};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(ws.speeds[3 + k] - want[k]) < 0.01 * want[k]);
    CHECK(ws.speeds[2 - k] == -ws.speeds[3 + k]);
  }
  for (int k = 0; k + 1 < ws.count; ++k) CHECK(ws.speeds[k] <= ws.speeds[k + 1]);
}

TEST_CASE("fluid eigensystem is the closed-form acoustic pair") {
  const MaterialModel m = fluid(presets::brine(), 0);
  const double c = presets::brine().sound_speed(), Z = presets::brine().impedance();
  for (double a : {0.0, 0.7, 2.0}) {
    const double nx = std::cos(a), nz = std::sin(a);
    const WaveSet ws = edge_eigensystem(m, nx, nz);
    REQUIRE(ws.count == 2);
    CHECK(ws.speeds[0] == doctest::Approx(-c));
    CHECK(ws.speeds[1] == doctest::Approx(c));
    for (int k = 0; k < 2; ++k) {
      const Vec8 r = ws.vectors.col(k);
      Vec8 shape = Vec8::Zero();
      shape << (k == 0 ? -Z : Z), 0, 0, 0, 0, 0, nx, nz;
      const double s = r(6) * nx + r(7) * nz;
      CHECK(rel(r, s * shape) < 1e-12);
      CHECK(r.dot(m.E * r) == doctest::Approx(1).epsilon(1e-12));
    }
  }
}

TEST_CASE("eigensystem properties over media, normals and rotations") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (const PoroMaterial& p : media()) {
    for (int trial = 0; trial < 64; ++trial) {
      const MaterialModel m = poro(p, 0, ang(rng));
      const double a = ang(rng);
      const WaveSet ws = edge_eigensystem(m, std::cos(a), std::sin(a));
      REQUIRE(ws.count == 6);
      const Eigen::Matrix<double, 8, 6> R = ws.vectors;
      const Eigen::Matrix<double, 6, 6> G = R.transpose() * m.E * R;
      CHECK((G - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff() < 1e-10);
      for (int k = 0; k < 6; ++k) {
        const Vec8 r = R.col(k);
        const double es = r.head<4>().dot(m.E.topLeftCorner<4, 4>() * r.head<4>());
        const double ev = r.tail<4>().dot(m.E.bottomRightCorner<4, 4>() * r.tail<4>());
        CHECK(std::abs(es - ev) < 1e-10);
      }
      for (int k = 0; k < 3; ++k) CHECK(ws.speeds[k] == -ws.speeds[5 - k]);
    }
  }
}

TEST_CASE("eigensystem cache hits on identical input and misses on a last-bit change") {
  const MaterialModel m = poro(presets::shale(), 3);
  EigenCache cache;
  const double nx = 0.6, nz = 0.8;
  const WaveSet a = cache.lookup(m, nx, nz);
  const WaveSet b = cache.lookup(m, nx, nz);
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 1);
  CHECK(std::memcmp(&a.vectors, &b.vectors, sizeof(a.vectors)) == 0);
  CHECK(cache.peek(3, nx, nz) != nullptr);
  const double nx2 = std::nextafter(nx, 1.0);
  CHECK(cache.peek(3, nx2, nz) == nullptr);
  cache.lookup(m, nx2, nz);
  CHECK(cache.misses() == 2);
}

TEST_CASE("uniform grid reuses cached eigensystems") {
  const MappedGrid g = build_grid(GridMapping::identity(0, 1, 0, 1), 100, 100, [](double, double) { return 0; });
  const SimulationState s(g, {poro(presets::sandstone(), 0)}, InterfaceTable{});
  const double total = static_cast<double>(s.cache_hits() + s.cache_misses());
  CHECK(s.cache_hits() / total >= 0.99);
}

TEST_CASE("same-material solve: zero jump, unit strength, flux consistency") {
  std::mt19937 rng(22);
  const MaterialModel m = poro(presets::sandstone(), 0, 0.4);
  const double nx = std::cos(1.1), nz = std::sin(1.1);
  const WaveSet ws = edge_eigensystem(m, nx, nz);
  const Vec8 q = random_state(rng);
  RiemannSolution r = solve_same_material(ws, m.E, q, q);
  CHECK(r.left_fluctuation.isZero(0));
  CHECK(r.right_fluctuation.isZero(0));
  for (int k = 0; k < ws.count; ++k) {
    CHECK(r.strengths[k] == 0);
  }
  for (int k = 0; k < ws.count; ++k) {
    r = solve_same_material(ws, m.E, q, q + ws.vectors.col(k));
    for (int j = 0; j < ws.count; ++j) CHECK(std::abs(r.strengths[j] - (j == k ? 1.0 : 0.0)) < 1e-10);
  }
  const Mat8 Ap = m.global.projected(nx, nz);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec8 ql = random_state(rng), qr = random_state(rng);
    r = solve_same_material(ws, m.E, ql, qr);
    const Vec8 want = Ap * (qr - ql);
    const Vec8 got = r.left_fluctuation + r.right_fluctuation;
    // Zero-speed modes carry no flux; compare with the flux scale.
    CHECK((got - want).norm() <= 1e-10 * (Ap.cwiseAbs().maxCoeff() * (qr - ql).norm()));
  }
}

TEST_CASE("interface between identical media reduces to the same-material solve") {
  std::mt19937 rng(23);
  const MaterialModel a = poro(presets::shale(), 0), b = poro(presets::shale(), 1);
  const double nx = std::cos(0.3), nz = std::sin(0.3);
  const EdgeContext ctx = make_context(a, b, nx, nz, 1.0, 0.5);
  CHECK(ctx.kind == InterfaceKind::poro_poro);
  const WaveSet wl = edge_eigensystem(ctx, Side::left), wr = edge_eigensystem(ctx, Side::right);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec8 ql = random_state(rng), qr = random_state(rng);
    const RiemannSolution i = solve_interface(ctx, wl, wr, ql, qr);
    const RiemannSolution s = solve_same_material(edge_eigensystem(a, nx, nz), a.E, ql, qr);
    CHECK(rel(i.left_fluctuation, s.left_fluctuation) < 1e-10);
    CHECK(rel(i.right_fluctuation, s.right_fluctuation) < 1e-10);
  }
}

TEST_CASE("fluid-fluid interface matches the two-impedance acoustic solution") {
  FluidMaterial f2{4.0e9, 1500};
  const MaterialModel l = fluid(presets::brine(), 0), r = fluid(f2, 1);
  const EdgeContext ctx = make_context(l, r, 1, 0);
  const double Zl = presets::brine().impedance(), Zr = f2.impedance();
  Vec8 ql = Vec8::Zero(), qr = Vec8::Zero();
  ql(0) = 3.0e5;
  ql(6) = 0.2;
  qr(0) = -1.0e5;
  qr(6) = -0.1;
  const RiemannSolution s = solve_interface(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right), ql, qr);
  const double u = (ql(0) - qr(0) + Zl * ql(6) + Zr * qr(6)) / (Zl + Zr);
  const double p = ql(0) + Zl * ql(6) - Zl * u;
  CHECK(s.left_limit(0) == doctest::Approx(p).epsilon(1e-12));
  CHECK(s.right_limit(0) == doctest::Approx(p).epsilon(1e-12));
  CHECK(s.left_limit(6) == doctest::Approx(u).epsilon(1e-12));
  CHECK(s.right_limit(6) == doctest::Approx(u).epsilon(1e-12));
  // Left-going strength in units of the unit-energy eigenvector: (dp - Zl du) / (2 Zl) scaled.
  const WaveSet wl = edge_eigensystem(ctx, Side::left);
  const Vec8 left_wave = s.strengths[0] * s.vectors.col(0);
  CHECK(left_wave(0) == doctest::Approx(p - ql(0)).epsilon(1e-12));
  CHECK(std::abs(wl.vectors.col(0)(0) / wl.vectors.col(0)(6) + Zl) < 1e-6 * Zl);
}

TEST_CASE("poro-fluid interface: open pores equalize pressure, sealed pores stop flow") {
  std::mt19937 rng(24);
  const MaterialModel p = poro(presets::sandstone(), 0, 0.5), f = fluid(presets::brine(), 1);
  const double nx = std::cos(0.9), nz = std::sin(0.9);
  for (double eta_d : {1.0, 0.0, 0.5}) {
    const EdgeContext ctx = make_context(p, f, nx, nz, eta_d);
    CHECK(ctx.kind == InterfaceKind::poro_fluid);
    const InterfaceMatrices C = interface_matrices(ctx);
    CHECK(C.Cl.rows() == 4);
    const Vec8 ql = random_state(rng), qr = random_state(rng, true);
    const RiemannSolution s = solve_interface(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right), ql, qr);
    const Eigen::VectorXd lhs = C.Cl * s.left_limit, rhs = C.Cr * s.right_limit;
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(lhs.norm(), rhs.norm()));
    const double qn = s.left_limit(6) * nx + s.left_limit(7) * nz;
    if (eta_d == 1.0) CHECK(std::abs(s.left_limit(0) - s.right_limit(0)) < 1e-9 * std::abs(ql(0)) + 1e-6);
    if (eta_d == 0.0) CHECK(std::abs(qn) < 1e-10 * qr.tail<2>().norm() + 1e-12);
  }
  // Fluid on the left is the mirrored case.
  const EdgeContext fp = make_context(f, p, nx, nz, 0.0);
  CHECK(fp.kind == InterfaceKind::fluid_poro);
  const Vec8 ql = random_state(rng, true), qr = random_state(rng);
  const RiemannSolution s = solve_interface(fp, edge_eigensystem(fp, Side::left), edge_eigensystem(fp, Side::right), ql, qr);
  CHECK(std::abs(s.right_limit(6) * nx + s.right_limit(7) * nz) < 1e-10 * ql.tail<2>().norm() + 1e-12);
}

TEST_CASE("poro-poro interface traces satisfy the interface condition") {
  std::mt19937 rng(25);
  const MaterialModel a = poro(presets::sandstone(), 0, 0.5), b = poro(presets::shale(), 1);
  for (double eta_d : {0.0, 0.5, 1.0})
    for (double zeta : {0.0, 0.5, 1.0}) {
      const EdgeContext ctx = make_context(a, b, 0.8, -0.6, eta_d, zeta);
      const InterfaceMatrices C = interface_matrices(ctx);
      CHECK(C.Cl.rows() == 6);
      const RiemannSolution s = solve_interface(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right),
                                                random_state(rng), random_state(rng));
      const Eigen::VectorXd lhs = C.Cl * s.left_limit, rhs = C.Cr * s.right_limit;
      CHECK((lhs - rhs).norm() <= 1e-10 * std::max(lhs.norm(), rhs.norm()));
    }
}

TEST_CASE("zero states give zero solutions") {
  const MaterialModel a = poro(presets::sandstone(), 0), b = fluid(presets::brine(), 1);
  const EdgeContext ctx = make_context(a, b, 1, 0);
  const RiemannSolution s = solve_interface(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right),
                                            Vec8::Zero(), Vec8::Zero());
  CHECK(s.left_fluctuation.isZero(0));
  CHECK(s.right_fluctuation.isZero(0));
}

TEST_CASE("EdgeSolver reproduces the direct solves") {
  std::mt19937 rng(26);
  const MaterialModel a = poro(presets::sandstone(), 0, 0.2), b = fluid(presets::brine(), 1);
  const EdgeContext ctx = make_context(a, b, 0.6, 0.8, 0.5);
  const EdgeSolver es = EdgeSolver::build(ctx);
  const Vec8 ql = random_state(rng), qr = random_state(rng, true);
  const RiemannSolution d = solve_interface(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right), ql, qr);
  const RiemannSolution p = es.solve(ql, qr);
  CHECK(rel(d.left_fluctuation, p.left_fluctuation) < 1e-10);
  CHECK(rel(d.right_fluctuation, p.right_fluctuation) < 1e-10);
}

TEST_CASE("transverse decomposition") {
  std::mt19937 rng(27);
  const MaterialModel m = poro(presets::sandstone(), 0, 0.3);
  const EdgeSolver es = EdgeSolver::build(make_context(m, m, 0, 1));
  const Vec8 f = random_state(rng);
  // A fluctuation in the lower cell is a jump of -f across the edge.
  const Vec8 want = m.global.projected(0, 1) * f;
  const double scale = 1e-10 * m.global.projected(0, 1).cwiseAbs().maxCoeff() * f.norm();
  const TransverseResult lower = transverse_solve(es, f, true, 1.0), upper = transverse_solve(es, f, false, 1.0);
  CHECK((lower.up + lower.down + want).norm() < scale);
  CHECK((upper.up + upper.down - want).norm() < scale);
  CHECK((2.5 * upper.up - transverse_solve(es, f, false, 2.5).up).norm() < scale);

  const TransverseResult z = transverse_solve(es, Vec8::Zero(), false, 1.0);
  CHECK(z.up.isZero(0));
  CHECK(z.down.isZero(0));

  const MaterialModel fl = fluid(presets::brine(), 1);
  const EdgeSolver mixed = EdgeSolver::build(make_context(fl, m, 0, 1, 0.5));
  const TransverseResult tf = transverse_solve(mixed, random_state(rng, true), true, 1.0);
  for (int k = 1; k <= 5; ++k) CHECK(tf.down(k) == 0);
}
