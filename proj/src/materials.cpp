#include "pw/materials.hpp"

#include "pw/linalg.hpp"

#include <cmath>
#include <limits>

namespace pw {

double FluidMaterial::sound_speed() const { return std::sqrt(K_f / rho_f); }
double FluidMaterial::impedance() const { return rho_f * sound_speed(); }

namespace {

Mat8 assemble(const Mat4& sv, const Mat4& vs) {
  Mat8 out = Mat8::Zero();
  out.block<4, 4>(0, 4) = sv;
  out.block<4, 4>(4, 0) = vs;
  return out;
}

// Squared principal-direction speeds, sorted descending.
Speeds principal_speeds(const CoefficientSet& c, bool dir1) {
  const Mat4& sv = dir1 ? c.A_sv : c.B_sv;
  const Mat4 K = sv.transpose() * c.E_s * sv;
  // E_v^{-1/2} via Cholesky keeps the reduced problem symmetric.
  const Eigen::LLT<Mat4> llt(c.E_v);
  const Mat4 Linv = llt.matrixL().solve(Mat4::Identity());
  Mat4 M = Linv * K * Linv.transpose();
  M = 0.5 * (M + M.transpose()).eval();
  const SymEigen ev = sym_eigen(SmallMat(M));
  Speeds s;
  s.fast_p = std::sqrt(std::max(0.0, ev.values(3)));
  s.shear = std::sqrt(std::max(0.0, ev.values(2)));
  s.slow_p = std::sqrt(std::max(0.0, ev.values(1)));
  return s;
}

}  // namespace

Mat8 CoefficientSet::A() const { return assemble(A_sv, A_vs); }
Mat8 CoefficientSet::B() const { return assemble(B_sv, B_vs); }

Mat8 CoefficientSet::D() const {
  Mat8 out = Mat8::Zero();
  out.block<4, 4>(4, 4) = D_v;
  return out;
}

Mat8 CoefficientSet::E() const {
  Mat8 out = Mat8::Zero();
  out.block<4, 4>(0, 0) = E_s;
  out.block<4, 4>(4, 4) = E_v;
  return out;
}

Mat8 CoefficientSet::projected(double nx, double nz) const {
  return assemble(nx * A_sv + nz * B_sv, nx * A_vs + nz * B_vs);
}

void validate(const PoroMaterial& m) {
  auto pos = [](double v, const char* what) {
    if (!(v > 0.0)) throw MaterialError(std::string("poroelastic material: ") + what + " must be positive");
  };
  pos(m.K_s, "K_s");
  pos(m.rho_s, "rho_s");
  pos(m.c11, "c11");
  pos(m.c33, "c33");
  pos(m.c55, "c55");
  pos(m.kappa1, "kappa1");
  pos(m.kappa3, "kappa3");
  pos(m.K_f, "K_f");
  pos(m.rho_f, "rho_f");
  if (!(m.phi > 0.0 && m.phi < 1.0)) throw MaterialError("poroelastic material: porosity must lie in (0, 1)");
  if (m.T1 < 1.0 || m.T3 < 1.0) throw MaterialError("poroelastic material: tortuosity must be >= 1");
  if (m.eta < 0.0) throw MaterialError("poroelastic material: viscosity must be non-negative");
  if (m.c11 * m.c33 - m.c13 * m.c13 <= 0.0)
    throw MaterialError("poroelastic material: drained stiffness [[c11,c13],[c13,c33]] is singular or indefinite");
}

void validate(const FluidMaterial& m) {
  if (!(m.K_f > 0.0) || !(m.rho_f > 0.0)) throw MaterialError("fluid material: K_f and rho_f must be positive");
}

namespace {

DerivedScalars base_scalars(const PoroMaterial& m) {
  validate(m);
  DerivedScalars d;
  d.rho = (1.0 - m.phi) * m.rho_s + m.phi * m.rho_f;
  d.m1 = m.T1 * m.rho_f / m.phi;
  d.m3 = m.T3 * m.rho_f / m.phi;
  d.Delta1 = d.rho * d.m1 - m.rho_f * m.rho_f;
  d.Delta3 = d.rho * d.m3 - m.rho_f * m.rho_f;
  if (!(d.Delta1 > 0.0) || !(d.Delta3 > 0.0))
    throw MaterialError("poroelastic material: rho*m_i - rho_f^2 must be positive");
  // Transversely isotropic completion: c22 = c11, c23 = c13.
  const double c22 = m.c11, c23 = m.c13;
  d.alpha1 = 1.0 - (m.c11 + m.c12 + m.c13) / (3.0 * m.K_s);
  d.alpha3 = 1.0 - (m.c13 + c23 + m.c33) / (3.0 * m.K_s);
  d.K_bar = (m.c11 + c22 + m.c33 + 2.0 * (m.c12 + m.c13 + c23)) / 9.0;
  const double denom = (1.0 - d.K_bar / m.K_s) - m.phi * (1.0 - m.K_s / m.K_f);
  if (!(denom > 0.0)) throw MaterialError("poroelastic material: Biot modulus denominator is not positive");
  d.M = m.K_s / denom;
  d.c11u = m.c11 + d.M * d.alpha1 * d.alpha1;
  d.c13u = m.c13 + d.M * d.alpha1 * d.alpha3;
  d.c33u = m.c33 + d.M * d.alpha3 * d.alpha3;
  d.c55u = m.c55;
  if (m.eta > 0.0) {
    d.tau_d1 = d.Delta1 * m.kappa1 / (d.rho * m.eta);
    d.tau_d3 = d.Delta3 * m.kappa3 / (d.rho * m.eta);
  } else {
    d.tau_d1 = d.tau_d3 = std::numeric_limits<double>::infinity();
  }
  return d;
}

CoefficientSet poro_blocks(const PoroMaterial& m, const DerivedScalars& d) {
  CoefficientSet c;
  c.kind = MaterialKind::poroelastic;
  c.axes = Axes::principal;
  const double M = d.M, a1 = d.alpha1, a3 = d.alpha3;
  const double rf = m.rho_f, rho = d.rho, m1 = d.m1, m3 = d.m3, D1 = d.Delta1, D3 = d.Delta3;

  c.A_sv << a1 * M, 0, M, 0,
            -d.c11u, 0, -a1 * M, 0,
            -d.c13u, 0, -a3 * M, 0,
            0, -d.c55u, 0, 0;
  c.A_vs << -rf / D1, -m1 / D1, 0, 0,
            0, 0, 0, -m3 / D3,
            rho / D1, rf / D1, 0, 0,
            0, 0, 0, rf / D3;
  c.B_sv << 0, a3 * M, 0, M,
            0, -d.c13u, 0, -a1 * M,
            0, -d.c33u, 0, -a3 * M,
            -d.c55u, 0, 0, 0;
  c.B_vs << 0, 0, 0, -m1 / D1,
            -rf / D3, 0, -m3 / D3, 0,
            0, 0, 0, rf / D1,
            rho / D3, 0, rf / D3, 0;
  c.D_v.setZero();
  if (m.eta > 0.0) {
    const double g1 = m.eta / (D1 * m.kappa1), g3 = m.eta / (D3 * m.kappa3);
    c.D_v(0, 2) = rf * g1;
    c.D_v(1, 3) = rf * g3;
    c.D_v(2, 2) = -rho * g1;
    c.D_v(3, 3) = -rho * g3;
  }
  const double det = m.c11 * m.c33 - m.c13 * m.c13;
  c.E_s.setZero();
  c.E_s(0, 0) = 1.0 / M + (a1 * a1 * m.c33 + a3 * a3 * m.c11 - 2.0 * a1 * a3 * m.c13) / det;
  c.E_s(0, 1) = c.E_s(1, 0) = (a1 * m.c33 - a3 * m.c13) / det;
  c.E_s(0, 2) = c.E_s(2, 0) = (a3 * m.c11 - a1 * m.c13) / det;
  c.E_s(1, 1) = m.c33 / det;
  c.E_s(1, 2) = c.E_s(2, 1) = -m.c13 / det;
  c.E_s(2, 2) = m.c11 / det;
  c.E_s(3, 3) = 1.0 / m.c55;
  c.E_v << rho, 0, rf, 0,
           0, rho, 0, rf,
           rf, 0, m1, 0,
           0, rf, 0, m3;
  return c;
}

}  // namespace

DerivedScalars derive_scalars(const PoroMaterial& m) {
  DerivedScalars d = base_scalars(m);
  const CoefficientSet c = poro_blocks(m, d);
  d.dir1 = principal_speeds(c, true);
  d.dir3 = principal_speeds(c, false);
  return d;
}

CoefficientSet poro_coefficients(const PoroMaterial& m) {
  const DerivedScalars d = base_scalars(m);
  return poro_blocks(m, d);
}

CoefficientSet fluid_coefficients(const FluidMaterial& m) {
  validate(m);
  CoefficientSet c;
  c.kind = MaterialKind::fluid;
  c.axes = Axes::principal;
  c.A_sv(0, 2) = m.K_f;
  c.A_vs(2, 0) = 1.0 / m.rho_f;
  c.B_sv(0, 3) = m.K_f;
  c.B_vs(3, 0) = 1.0 / m.rho_f;
  c.E_s(0, 0) = 1.0 / m.K_f;
  c.E_v(2, 2) = m.rho_f;
  c.E_v(3, 3) = m.rho_f;
  return c;
}

Mat8 state_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat8 P = Mat8::Zero();
  P(0, 0) = 1.0;
  // tau' = R tau R^T with rows of R the principal unit vectors
  P(1, 1) = c * c;
  P(1, 2) = s * s;
  P(1, 3) = 2.0 * c * s;
  P(2, 1) = s * s;
  P(2, 2) = c * c;
  P(2, 3) = -2.0 * c * s;
  P(3, 1) = -c * s;
  P(3, 2) = c * s;
  P(3, 3) = c * c - s * s;
  for (int k : {4, 6}) {
    P(k, k) = c;
    P(k, k + 1) = s;
    P(k + 1, k) = -s;
    P(k + 1, k + 1) = c;
  }
  return P;
}

CoefficientSet rotate_to_global(const CoefficientSet& in, double theta) {
  CoefficientSet out = in;
  out.axes = Axes::global;
  if (theta == 0.0) return out;
  const double c = std::cos(theta), s = std::sin(theta);
  const Mat8 P = state_rotation(theta);
  const Mat8 Pinv = state_rotation(-theta);
  const Mat4 Ps = P.block<4, 4>(0, 0), Pv = P.block<4, 4>(4, 4);
  const Mat4 Psi = Pinv.block<4, 4>(0, 0), Pvi = Pinv.block<4, 4>(4, 4);
  out.A_sv = Psi * (c * in.A_sv - s * in.B_sv) * Pv;
  out.A_vs = Pvi * (c * in.A_vs - s * in.B_vs) * Ps;
  out.B_sv = Psi * (s * in.A_sv + c * in.B_sv) * Pv;
  out.B_vs = Pvi * (s * in.A_vs + c * in.B_vs) * Ps;
  out.D_v = Pvi * in.D_v * Pv;
  out.E_s = Ps.transpose() * in.E_s * Ps;
  out.E_v = Pv.transpose() * in.E_v * Pv;
  return out;
}

namespace presets {

PoroMaterial sandstone() {
  PoroMaterial m;
  m.K_s = 80e9;
  m.rho_s = 2500;
  m.c11 = 71.8e9;
  m.c12 = 3.2e9;
  m.c13 = 1.2e9;
  m.c33 = 53.4e9;
  m.c55 = 26.1e9;
  m.phi = 0.2;
  m.kappa1 = 600e-15;
  m.kappa3 = 100e-15;
  m.T1 = 2;
  m.T3 = 3.6;
  m.K_f = 2.5e9;
  m.rho_f = 1040;
  m.eta = 1e-3;
  return m;
}

PoroMaterial shale() {
  PoroMaterial m;
  m.K_s = 7.6e9;
  m.rho_s = 2210;
  m.c11 = 11.9e9;
  m.c12 = 3.96e9;
  m.c13 = 3.96e9;
  m.c33 = 11.9e9;
  m.c55 = 3.96e9;
  m.phi = 0.16;
  m.kappa1 = 100e-15;
  m.kappa3 = 100e-15;
  m.T1 = 2;
  m.T3 = 2;
  m.K_f = 2.5e9;
  m.rho_f = 1040;
  m.eta = 1e-3;
  return m;
}

PoroMaterial cortical_bone() {
  PoroMaterial m;
  m.K_s = 14e9;
  m.rho_s = 1960;
  m.c11 = 20.6e9;
  m.c12 = 10.6e9;
  m.c13 = 10.6e9;
  m.c33 = 20.6e9;
  m.c55 = 5e9;
  m.phi = 0.04;
  m.kappa1 = 630e-15;
  m.kappa3 = 630e-15;
  m.T1 = 2;
  m.T3 = 2;
  m.K_f = 2.3e9;
  m.rho_f = 1060;
  m.eta = 1e-3;
  return m;
}

PoroMaterial cancellous_bone() {
  PoroMaterial m;
  m.K_s = 18.5e9;
  m.rho_s = 1960;
  m.c11 = 5.2e9;
  m.c12 = 2.4e9;
  m.c13 = 2.4e9;
  m.c33 = 5.2e9;
  m.c55 = 1.38e9;
  m.phi = 0.75;
  m.kappa1 = 7e-9;
  m.kappa3 = 7e-9;
  m.T1 = 1;
  m.T3 = 1;
  m.K_f = 2.2e9;
  m.rho_f = 990;
  m.eta = 40e-3;
  return m;
}

FluidMaterial brine() { return FluidMaterial{2.5e9, 1040}; }
FluidMaterial water() { return FluidMaterial{2.25e9, 1000}; }
FluidMaterial pore_fluid(const PoroMaterial& m) { return FluidMaterial{m.K_f, m.rho_f}; }

}  // namespace presets

Material Material::make_poro(std::string name, const PoroMaterial& p) {
  validate(p);
  Material m;
  m.name = std::move(name);
  m.kind = MaterialKind::poroelastic;
  m.poro = p;
  m.fluid = presets::pore_fluid(p);
  return m;
}

Material Material::make_fluid(std::string name, const FluidMaterial& f) {
  validate(f);
  Material m;
  m.name = std::move(name);
  m.kind = MaterialKind::fluid;
  m.fluid = f;
  return m;
}

}  // namespace pw
