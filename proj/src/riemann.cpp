#include "pw/riemann.hpp"

#include "pw/linalg.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace pw {

MaterialModel make_model(const Material& m, int id) {
  MaterialModel mm;
  mm.id = id;
  mm.mat = m;
  mm.kind = m.kind;
  if (m.kind == MaterialKind::fluid) {
    mm.principal = fluid_coefficients(m.fluid);
    mm.global = mm.principal;
    mm.global.axes = Axes::global;
    mm.E = mm.global.E();
    mm.Zf = m.fluid.impedance();
    mm.sound_speed = m.fluid.sound_speed();
    return mm;
  }
  const PoroMaterial& p = m.poro;
  mm.theta = p.theta;
  mm.scalars = derive_scalars(p);
  mm.principal = poro_coefficients(p);
  mm.global = rotate_to_global(mm.principal, p.theta);
  mm.E = mm.global.E();
  mm.to_principal = state_rotation(p.theta);
  mm.to_global = state_rotation(-p.theta);
  mm.Zf = m.fluid.impedance();

  const DerivedScalars& d = mm.scalars;
  Mat4 L = Mat4::Zero();
  L(0, 0) = std::sqrt(d.Delta1 / d.m1);
  L(0, 2) = p.rho_f / std::sqrt(d.m1);
  L(1, 1) = std::sqrt(d.Delta3 / d.m3);
  L(1, 3) = p.rho_f / std::sqrt(d.m3);
  L(2, 2) = std::sqrt(d.m1);
  L(3, 3) = std::sqrt(d.m3);
  mm.Linv = L.triangularView<Eigen::Upper>().solve(Mat4::Identity());

  const CoefficientSet& c = mm.principal;
  const Mat4 Lt = mm.Linv.transpose();
  mm.M411 = mm.Linv * c.A_sv.transpose() * c.E_s * c.A_sv * Lt;
  mm.M433 = mm.Linv * c.B_sv.transpose() * c.E_s * c.B_sv * Lt;
  const Mat4 cross = mm.Linv * c.A_sv.transpose() * c.E_s * c.B_sv * Lt;
  mm.M413 = cross + cross.transpose();
  return mm;
}

const char* to_string(InterfaceKind k) {
  switch (k) {
    case InterfaceKind::same: return "same";
    case InterfaceKind::fluid_fluid: return "fluid-fluid";
    case InterfaceKind::poro_poro: return "poro-poro";
    case InterfaceKind::poro_fluid: return "poro-fluid";
    case InterfaceKind::fluid_poro: return "fluid-poro";
  }
  return "?";
}

EdgeContext make_context(const MaterialModel& left, const MaterialModel& right, double nx, double nz,
                         double eta_d, double zeta) {
  if (std::abs(std::hypot(nx, nz) - 1.0) > 1e-14) throw RiemannError("edge normal is not unit length");
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) throw RiemannError("discharge efficiency outside [0,1]");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw RiemannError("zeta outside [0,1]");
  EdgeContext ctx;
  ctx.nx = nx;
  ctx.nz = nz;
  ctx.left = &left;
  ctx.right = &right;
  ctx.eta_d = eta_d;
  ctx.zeta = zeta;
  const bool lp = left.kind == MaterialKind::poroelastic, rp = right.kind == MaterialKind::poroelastic;
  if (left.id == right.id)
    ctx.kind = InterfaceKind::same;
  else if (lp && rp)
    ctx.kind = InterfaceKind::poro_poro;
  else if (lp)
    ctx.kind = InterfaceKind::poro_fluid;
  else if (rp)
    ctx.kind = InterfaceKind::fluid_poro;
  else
    ctx.kind = InterfaceKind::fluid_fluid;
  return ctx;
}

WaveSet edge_eigensystem(const MaterialModel& m, double nx, double nz) {
  WaveSet ws;
  ws.material = m.id;
  ws.nx = nx;
  ws.nz = nz;
  if (m.kind == MaterialKind::fluid) {
    const double scale = 1.0 / std::sqrt(2.0 * m.mat.fluid.rho_f);
    ws.count = 2;
    ws.speeds = {-m.sound_speed, m.sound_speed, 0, 0, 0, 0};
    for (int k = 0; k < 2; ++k) {
      Vec8 r = Vec8::Zero();
      r(0) = (k == 0 ? -m.Zf : m.Zf) * scale;
      r(6) = nx * scale;
      r(7) = nz * scale;
      ws.vectors.col(k) = r;
    }
    return ws;
  }

  const double c = std::cos(m.theta), s = std::sin(m.theta);
  const double n1 = c * nx + s * nz, n3 = -s * nx + c * nz;
  const Mat4 Asv = n1 * m.principal.A_sv + n3 * m.principal.B_sv;
  Mat4 M4 = n1 * n1 * m.M411 + n1 * n3 * m.M413 + n3 * n3 * m.M433;
  M4 = 0.5 * (M4 + M4.transpose()).eval();

  // Null direction: tangential relative fluid flow. Its first two components vanish.
  const double m1 = m.scalars.m1, m3 = m.scalars.m3;
  Vec4 y0(0.0, 0.0, -n3 * std::sqrt(m1), n1 * std::sqrt(m3));
  y0 /= y0.norm();
  Eigen::Matrix<double, 4, 3> Y3 = Eigen::Matrix<double, 4, 3>::Zero();
  Y3(0, 0) = 1.0;
  Y3(1, 1) = 1.0;
  Vec4 e = Vec4::Zero();
  e(std::abs(y0(2)) <= std::abs(y0(3)) ? 2 : 3) = 1.0;
  e -= e.dot(y0) * y0;
  Y3.col(2) = e / e.norm();

  Eigen::Matrix3d M3 = Y3.transpose() * M4 * Y3;
  M3 = 0.5 * (M3 + M3.transpose()).eval();
  const SymEigen eig = sym_eigen(SmallMat(M3));

  ws.count = 6;
  const Mat4 LinvT = m.Linv.transpose();
  for (int k = 0; k < 3; ++k) {
    const double lam2 = eig.values(k);
    if (!(lam2 > 0.0))
      throw RiemannError("non-positive squared wave speed for material '" + m.mat.name + "'");
    const double lam = std::sqrt(lam2);
    const Eigen::Vector3d u = eig.vectors.col(k) / std::sqrt(2.0);
    const Vec4 rv = LinvT * (Y3 * u);
    const Vec4 rs = Asv * rv / lam;
    Vec8 rp, rm;
    rp << rs, rv;
    rm << -rs, rv;
    // ascending: -fast ... -slow, +slow ... +fast
    ws.speeds[2 - k] = -lam;
    ws.vectors.col(2 - k) = m.to_global * rm;
    ws.speeds[3 + k] = lam;
    ws.vectors.col(3 + k) = m.to_global * rp;
  }
  return ws;
}

WaveSet edge_eigensystem(const EdgeContext& ctx, Side side) {
  return edge_eigensystem(side == Side::left ? *ctx.left : *ctx.right, ctx.nx, ctx.nz);
}

const WaveSet* EigenCache::peek(int material, double nx, double nz) const {
  if (valid_ && material == material_ && std::bit_cast<std::uint64_t>(nx) == nx_bits_ &&
      std::bit_cast<std::uint64_t>(nz) == nz_bits_)
    return &entry_;
  return nullptr;
}

const WaveSet& EigenCache::lookup(const MaterialModel& m, double nx, double nz) {
  if (peek(m.id, nx, nz)) {
    ++hits_;
    return entry_;
  }
  ++misses_;
  entry_ = edge_eigensystem(m, nx, nz);
  valid_ = true;
  material_ = m.id;
  nx_bits_ = std::bit_cast<std::uint64_t>(nx);
  nz_bits_ = std::bit_cast<std::uint64_t>(nz);
  return entry_;
}

namespace {

void assemble_fluctuations(RiemannSolution& sol, int n_left) {
  for (int k = 0; k < sol.count; ++k) {
    const Vec8 w = sol.strengths[k] * sol.vectors.col(k);
    if (k < n_left) {
      sol.left_fluctuation += sol.speeds[k] * w;
      sol.left_limit += w;
    } else {
      sol.right_fluctuation += sol.speeds[k] * w;
      sol.right_limit -= w;
    }
  }
}

}  // namespace

RiemannSolution solve_same_material(const WaveSet& ws, const Mat8& E, const Vec8& Ql, const Vec8& Qr) {
  RiemannSolution sol;
  sol.count = ws.count;
  sol.speeds = ws.speeds;
  sol.vectors = ws.vectors;
  const Vec8 EdQ = E * (Qr - Ql);
  for (int k = 0; k < ws.count; ++k) sol.strengths[k] = ws.vectors.col(k).dot(EdQ);
  sol.left_limit = Ql;
  sol.right_limit = Qr;
  assemble_fluctuations(sol, ws.count / 2);
  return sol;
}

namespace {

// Poroelastic medium on the left, normal pointing into the fluid.
void poro_fluid_rows(double nx, double nz, double eta_d, double Zf, CondMat& Cp, CondMat& Cf) {
  Cp.setZero(4, 8);
  Cf.setZero(4, 8);
  Cp(0, 4) = nx;
  Cp(0, 5) = nz;
  Cp(0, 6) = nx;
  Cp(0, 7) = nz;
  Cp(1, 1) = nx;
  Cp(1, 3) = nz;
  Cp(2, 2) = nz;
  Cp(2, 3) = nx;
  Cp(3, 0) = eta_d;
  Cp(3, 6) = -Zf * (1.0 - eta_d) * nx;
  Cp(3, 7) = -Zf * (1.0 - eta_d) * nz;
  Cf(0, 6) = nx;
  Cf(0, 7) = nz;
  Cf(1, 0) = -nx;
  Cf(2, 0) = -nz;
  Cf(3, 0) = eta_d;
}

}  // namespace

InterfaceMatrices interface_matrices(const EdgeContext& ctx) {
  InterfaceMatrices im;
  const double nx = ctx.nx, nz = ctx.nz, eta = ctx.eta_d;
  switch (ctx.kind) {
    case InterfaceKind::poro_fluid:
      poro_fluid_rows(nx, nz, eta, ctx.right->Zf, im.Cl, im.Cr);
      break;
    case InterfaceKind::fluid_poro:
      poro_fluid_rows(-nx, -nz, eta, ctx.left->Zf, im.Cr, im.Cl);
      break;
    case InterfaceKind::poro_poro: {
      const double Zf = ctx.left->Zf, z = ctx.zeta;
      for (CondMat* C : {&im.Cl, &im.Cr}) {
        C->setZero(6, 8);
        (*C)(0, 1) = nx;
        (*C)(0, 3) = nz;
        (*C)(1, 2) = nz;
        (*C)(1, 3) = nx;
        (*C)(2, 4) = 1.0;
        (*C)(3, 5) = 1.0;
        (*C)(4, 6) = nx;
        (*C)(4, 7) = nz;
        (*C)(5, 0) = eta;
      }
      im.Cl(5, 6) = -(1.0 - z) * Zf * (1.0 - eta) * nx;
      im.Cl(5, 7) = -(1.0 - z) * Zf * (1.0 - eta) * nz;
      im.Cr(5, 6) = z * Zf * (1.0 - eta) * nx;
      im.Cr(5, 7) = z * Zf * (1.0 - eta) * nz;
      break;
    }
    case InterfaceKind::fluid_fluid:
    case InterfaceKind::same:
      for (CondMat* C : {&im.Cl, &im.Cr}) {
        C->setZero(2, 8);
        (*C)(0, 0) = 1.0;
        (*C)(1, 6) = nx;
        (*C)(1, 7) = nz;
      }
      if (ctx.kind == InterfaceKind::same && ctx.left->kind == MaterialKind::poroelastic)
        throw RiemannError("interface_matrices called for a same-material poroelastic edge");
      break;
  }
  return im;
}

namespace {

// Outgoing wave columns: negative-speed waves of the left medium, then
// positive-speed waves of the right medium.
WaveMat outgoing_waves(const WaveSet& wl, const WaveSet& wr, std::array<double, kMaxWaves>& speeds, int& nl,
                       int& total) {
  WaveMat R = WaveMat::Zero();
  nl = wl.count / 2;
  const int nr = wr.count / 2;
  total = nl + nr;
  for (int k = 0; k < nl; ++k) {
    R.col(k) = wl.vectors.col(k);
    speeds[k] = wl.speeds[k];
  }
  for (int k = 0; k < nr; ++k) {
    R.col(nl + k) = wr.vectors.col(nr + k);
    speeds[nl + k] = wr.speeds[nr + k];
  }
  return R;
}

std::string interface_name(const EdgeContext& ctx) {
  return std::string(to_string(ctx.kind)) + " interface between '" + ctx.left->mat.name + "' and '" +
         ctx.right->mat.name + "' (normal " + std::to_string(ctx.nx) + ", " + std::to_string(ctx.nz) + ")";
}

}  // namespace

SmallMat interface_system(const EdgeContext& ctx, const WaveSet& ws_left, const WaveSet& ws_right) {
  const InterfaceMatrices im = interface_matrices(ctx);
  std::array<double, kMaxWaves> speeds{};
  int nl = 0, total = 0;
  const WaveMat R = outgoing_waves(ws_left, ws_right, speeds, nl, total);
  if (im.Cl.rows() != total)
    throw RiemannError("interface condition row count does not match outgoing wave count for " +
                       interface_name(ctx));
  SmallMat S(total, total);
  S.leftCols(nl) = im.Cl * R.leftCols(nl);
  S.rightCols(total - nl) = im.Cr * R.middleCols(nl, total - nl);
  return S;
}

RiemannSolution solve_interface(const EdgeContext& ctx, const WaveSet& ws_left, const WaveSet& ws_right,
                                const Vec8& Ql, const Vec8& Qr) {
  const InterfaceMatrices im = interface_matrices(ctx);
  const SmallMat S = interface_system(ctx, ws_left, ws_right);
  RiemannSolution sol;
  int nl = 0;
  sol.vectors = outgoing_waves(ws_left, ws_right, sol.speeds, nl, sol.count);
  const SmallVec rhs = im.Cr * Qr - im.Cl * Ql;
  SmallVec beta;
  try {
    beta = solve_lu(S, rhs);
  } catch (const SingularMatrixError&) {
    throw RiemannError("singular Riemann system at " + interface_name(ctx));
  }
  for (int k = 0; k < sol.count; ++k) sol.strengths[k] = beta(k);
  sol.left_limit = Ql;
  sol.right_limit = Qr;
  assemble_fluctuations(sol, nl);
  return sol;
}

EdgeSolver EdgeSolver::build(const EdgeContext& ctx, EigenCache* cache) {
  EdgeSolver es;
  es.kind = ctx.kind;
  es.mat_left = ctx.left->id;
  es.mat_right = ctx.right->id;
  if (ctx.kind == InterfaceKind::same) {
    const WaveSet ws = cache ? cache->lookup(*ctx.left, ctx.nx, ctx.nz) : edge_eigensystem(*ctx.left, ctx.nx, ctx.nz);
    es.count = ws.count;
    es.n_left = ws.count / 2;
    es.speeds = ws.speeds;
    es.R = ws.vectors;
    es.Pl.topRows(es.count) = ws.vectors.leftCols(es.count).transpose() * ctx.left->E;
    es.Pr = es.Pl;
    return es;
  }
  const WaveSet wl = cache ? cache->lookup(*ctx.left, ctx.nx, ctx.nz) : edge_eigensystem(*ctx.left, ctx.nx, ctx.nz);
  const WaveSet wr =
      cache ? cache->lookup(*ctx.right, ctx.nx, ctx.nz) : edge_eigensystem(*ctx.right, ctx.nx, ctx.nz);
  const InterfaceMatrices im = interface_matrices(ctx);
  const SmallMat S = interface_system(ctx, wl, wr);
  es.R = outgoing_waves(wl, wr, es.speeds, es.n_left, es.count);
  const int m = es.count;
  SmallMat Sinv(m, m);
  try {
    for (int j = 0; j < m; ++j) {
      SmallVec e = SmallVec::Zero(m);
      e(j) = 1.0;
      Sinv.col(j) = solve_lu(S, e);
    }
  } catch (const SingularMatrixError&) {
    throw RiemannError("singular Riemann system at " + interface_name(ctx));
  }
  es.Pl.topRows(m) = Sinv * im.Cl;
  es.Pr.topRows(m) = Sinv * im.Cr;
  return es;
}

RiemannSolution EdgeSolver::solve(const Vec8& Ql, const Vec8& Qr) const {
  RiemannSolution sol;
  sol.count = count;
  sol.speeds = speeds;
  sol.vectors = R;
  const Eigen::Matrix<double, kMaxWaves, 1> beta = Pr * Qr - Pl * Ql;
  for (int k = 0; k < count; ++k) sol.strengths[k] = beta(k);
  sol.left_limit = Ql;
  sol.right_limit = Qr;
  assemble_fluctuations(sol, n_left);
  return sol;
}

double EdgeSolver::max_speed() const {
  double s = 0;
  for (int k = 0; k < count; ++k) s = std::max(s, std::abs(speeds[k]));
  return s;
}

TransverseResult transverse_solve(const EdgeSolver& es, const Vec8& fluctuation, bool from_lower, double ratio) {
  TransverseResult out;
  const Eigen::Matrix<double, kMaxWaves, 1> beta = from_lower ? Eigen::Matrix<double, kMaxWaves, 1>(-(es.Pl * fluctuation))
                                                              : Eigen::Matrix<double, kMaxWaves, 1>(es.Pr * fluctuation);
  for (int k = 0; k < es.count; ++k) {
    const double a = ratio * es.speeds[k] * beta(k);
    if (k < es.n_left)
      out.down += a * es.R.col(k);
    else
      out.up += a * es.R.col(k);
  }
  return out;
}

}  // namespace pw
