#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pw/analytic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

using namespace pw;

namespace {

MaterialModel poro(const char* name, PoroMaterial p, int id, double theta = 0) {
  p.theta = theta;
  return make_model(Material::make_poro(name, p), id);
}

MaterialModel fluid(const char* name, FluidMaterial f, int id) { return make_model(Material::make_fluid(name, f), id); }

PlaneWaveSpec spec(WaveFamily f, double angle_deg, bool viscous = false, double omega = 1.0) {
  const double a = angle_deg * std::numbers::pi / 180;
  PlaneWaveSpec s;
  s.omega = omega;
  s.px = std::cos(a);
  s.pz = std::sin(a);
  s.family = f;
  s.viscous = viscous;
  return s;
}

double energy(const CVec8& v, const Mat8& E) { return std::real(v.dot(E.cast<cplx>() * v)); }

// Positive eigenvalues of p.(A, B), sorted descending, through the symmetric
// form E^1/2 M E^-1/2 (the unbalanced nonsymmetric solver loses digits here).
std::vector<double> speeds(const MaterialModel& m, double px, double pz) {
  const Eigen::SelfAdjointEigenSolver<Mat8> ee(m.E);
  const Mat8 S = ee.operatorSqrt() * (px * m.global.A() + pz * m.global.B()) * ee.operatorInverseSqrt();
  const Eigen::SelfAdjointEigenSolver<Mat8> es(0.5 * (S + S.transpose()));
  std::vector<double> s;
  for (int k = 0; k < 8; ++k)
    if (es.eigenvalues()(k) > 1.0) s.push_back(es.eigenvalues()(k));
  std::sort(s.rbegin(), s.rend());
  return s;
}

}  // namespace

TEST_CASE("acoustic wavenumber and normalization") {
  const MaterialModel b = fluid("brine", presets::brine(), 0);
  const PlaneWave w = plane_wave(b, spec(WaveFamily::acoustic, 30));
  const double c = std::sqrt(presets::brine().K_f / presets::brine().rho_f);
  CHECK(std::abs(w.k - cplx(1 / c, 0)) < 1e-12 / c);
  CHECK(std::abs(w.k.real() - 1 / 1550.3) < 1e-4 / 1550.3);
  CHECK(energy(w.V, b.E) == doctest::Approx(1).epsilon(1e-12));
  CHECK(w.period == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("inviscid poroelastic wavenumbers are omega over the characteristic speeds") {
  for (double theta : {0.0, 0.7}) {
    const MaterialModel s = poro("sandstone", presets::sandstone(), 0, theta);
    for (double ang : {0.0, 40.0, 90.0}) {
      const PlaneWaveSpec base = spec(WaveFamily::fast_P, ang);
      const std::vector<double> c = speeds(s, base.px, base.pz);
      REQUIRE(c.size() == 3);
      int idx = 0;
      for (WaveFamily f : {WaveFamily::fast_P, WaveFamily::S, WaveFamily::slow_P}) {
        PlaneWaveSpec sp = base;
        sp.family = f;
        const PlaneWave w = plane_wave(s, sp);
        CAPTURE(to_string(f));
        CHECK(std::abs(w.k - cplx(1 / c[idx], 0)) < 1e-10 / c[idx]);
        CHECK(energy(w.V, s.E) == doctest::Approx(1).epsilon(1e-10));
        ++idx;
      }
    }
  }
  const PlaneWave fp = plane_wave(poro("sandstone", presets::sandstone(), 0), spec(WaveFamily::fast_P, 0));
  CHECK(std::abs(1 / fp.k.real() - 6000) < 60);
}

TEST_CASE("viscous modes attenuate and satisfy the dispersion relation") {
  const MaterialModel s = poro("sandstone", presets::sandstone(), 0, 0.3);
  const double omega = 2 * std::numbers::pi * 1e4;
  for (WaveFamily f : {WaveFamily::fast_P, WaveFamily::S, WaveFamily::slow_P}) {
    CAPTURE(to_string(f));
    const AnalyticField a = homogeneous_field(s, spec(f, 20, true, omega));
    CHECK(a.k_in.imag() > 0);
    CHECK(a.dispersion_residual() < 1e-10);
  }
  // Slow P is strongly diffusive below the Biot frequency.
  const PlaneWave slow = plane_wave(s, spec(WaveFamily::slow_P, 20, true, omega));
  const PlaneWave fast = plane_wave(s, spec(WaveFamily::fast_P, 20, true, omega));
  CHECK(slow.k.imag() / slow.k.real() > 10 * fast.k.imag() / fast.k.real());
}

TEST_CASE("identical fluids transmit everything") {
  const MaterialModel a = fluid("brine", presets::brine(), 0), b = fluid("brine", presets::brine(), 1);
  const AnalyticField f = reflect_transmit(a, b, 1, 0.5, spec(WaveFamily::acoustic, -60));
  REQUIRE(f.reflected.size() == 1);
  REQUIRE(f.transmitted.size() == 1);
  CHECK(std::abs(f.reflected[0].beta) < 1e-12);
  CHECK(std::abs(std::abs(f.transmitted[0].beta) - 1) < 1e-12);
}

TEST_CASE("normal incidence between fluids: pressure ratio from impedances") {
  const FluidMaterial f1 = presets::brine(), f2{5e9, 1500};
  const double Z1 = std::sqrt(f1.K_f * f1.rho_f), Z2 = std::sqrt(f2.K_f * f2.rho_f);
  const AnalyticField f = reflect_transmit(fluid("a", f1, 0), fluid("b", f2, 1), 1, 0.5, spec(WaveFamily::acoustic, -90));
  const cplx r = f.reflected[0].V(0) / f.V_in(0), t = f.transmitted[0].V(0) / f.V_in(0);
  CHECK(std::abs(r - (Z2 - Z1) / (Z2 + Z1)) < 1e-12);
  CHECK(std::abs(t - 2 * Z2 / (Z2 + Z1)) < 1e-12);
}

TEST_CASE("reflection and transmission invariants") {
  const MaterialModel brine = fluid("brine", presets::brine(), 0);
  const MaterialModel sand = poro("sandstone", presets::sandstone(), 1, 0.5);
  const MaterialModel shale = poro("shale", presets::shale(), 2);
  struct Case {
    const MaterialModel *up, *down;
    WaveFamily f;
    double eta_d, angle;
    bool viscous;
  };
  const double omega = 2 * std::numbers::pi * 1e4;
  for (const Case& c : {Case{&brine, &sand, WaveFamily::acoustic, 1.0, -60, false},
                        Case{&brine, &sand, WaveFamily::acoustic, 0.0, -45, false},
                        Case{&brine, &sand, WaveFamily::acoustic, 0.5, -45, true},
                        Case{&sand, &brine, WaveFamily::fast_P, 0.5, -70, false},
                        Case{&shale, &sand, WaveFamily::fast_P, 0.5, -45, false},
                        Case{&shale, &sand, WaveFamily::S, 1.0, -80, true}}) {
    CAPTURE(c.angle);
    CAPTURE(c.eta_d);
    const AnalyticField f = reflect_transmit(*c.up, *c.down, c.eta_d, 0.5, spec(c.f, c.angle, c.viscous, omega));
    CHECK(f.dispersion_residual() < 1e-10);
    CHECK(f.tangential_mismatch() < 1e-12);
    CHECK(f.interface_residual() < 1e-10);
    if (!c.viscous) CHECK(f.energy_flux_balance() < 1e-10);
  }
}

TEST_CASE("real field is periodic in time and continuous in traces") {
  const AnalyticField f = reflect_transmit(fluid("brine", presets::brine(), 0), poro("sandstone", presets::sandstone(), 1),
                                           1, 0.5, spec(WaveFamily::acoustic, -60));
  CHECK(f.period() == doctest::Approx(2 * std::numbers::pi));
  for (double x : {-300.0, 0.0, 511.0})
    for (double z : {-200.0, 150.0}) {
      const Vec8 a = f.evaluate(x, z, 0.3), b = f.evaluate(x, z, 0.3 + f.period());
      CHECK((a - b).norm() <= 1e-9 * (a.norm() + 1e-300));
    }
  const CVec8 tin = f.trace(120, 0.2, true), tout = f.trace(120, 0.2, false);
  const Eigen::VectorXcd lhs = f.C.Cr.cast<cplx>() * tin, rhs = f.C.Cl.cast<cplx>() * tout;
  CHECK((lhs - rhs).norm() < 1e-10 * lhs.norm());
}

TEST_CASE("evanescent modes decay away from the interface") {
  // S from sandstone at 60 degrees incidence: the reflected fast P is evanescent.
  const AnalyticField f = reflect_transmit(poro("sandstone", presets::sandstone(), 0), fluid("brine", presets::brine(), 1),
                                           1, 0.5, spec(WaveFamily::S, -30));
  CHECK_FALSE(f.all_propagating());
  bool decays = false;
  for (const OutgoingMode& m : f.reflected)
    if (!m.propagating) {
      CHECK(m.kn.imag() != 0);
      decays = true;
    }
  CHECK(decays);
  CHECK(f.interface_residual() < 1e-10);
  CHECK(f.energy_flux_balance() < 1e-10);
  const double far = 1e6;
  for (double z : {far, -far}) CHECK(f.evaluate(0, z, 0).allFinite());
}

TEST_CASE("invalid requests") {
  const MaterialModel b = fluid("brine", presets::brine(), 0);
  CHECK_THROWS_AS(plane_wave(b, spec(WaveFamily::fast_P, 0)), AnalyticError);
  const MaterialModel s = poro("sandstone", presets::sandstone(), 1);
  CHECK_THROWS_AS(plane_wave(s, spec(WaveFamily::acoustic, 0)), AnalyticError);
  // Incident wave must travel toward the interface.
  CHECK_THROWS_AS(reflect_transmit(b, s, 1, 0.5, spec(WaveFamily::acoustic, 60)), AnalyticError);
}
