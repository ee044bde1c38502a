#include "pw/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace pw {

const char* to_string(WaveFamily f) {
  switch (f) {
    case WaveFamily::fast_P: return "fast_P";
    case WaveFamily::S: return "S";
    case WaveFamily::slow_P: return "slow_P";
    case WaveFamily::acoustic: return "acoustic";
  }
  return "?";
}

namespace {

using CMat8 = Eigen::Matrix<cplx, 8, 8>;
constexpr cplx I{0.0, 1.0};

double energy_norm(const CVec8& V, const Mat8& E) { return std::sqrt(std::abs((V.adjoint() * E * V)(0))); }

/// Scale to V^H E V = 1 and rotate the phase so the dominant entry is real positive.
CVec8 normalize(CVec8 V, const Mat8& E) {
  V /= energy_norm(V, E);
  int imax = 0;
  double best = -1;
  for (int i = 0; i < 8; ++i) {
    const double w = std::abs(V(i)) * std::sqrt(std::max(E(i, i), 0.0));
    if (w > best + 1e-12 * std::abs(best)) {
      best = w;
      imax = i;
    }
  }
  if (std::abs(V(imax)) > 0) V *= std::conj(V(imax)) / std::abs(V(imax));
  return V;
}

SmallCMat solve_columns(const SmallCMat& A, const SmallCMat& B) {
  SmallCMat X(A.cols(), B.cols());
  for (int j = 0; j < B.cols(); ++j) X.col(j) = solve_lu(A, SmallCVec(B.col(j)));
  return X;
}

std::vector<int> active_slots(const MaterialModel& m) {
  if (m.kind == MaterialKind::fluid) return {0, 6, 7};
  return {0, 1, 2, 3, 4, 5, 6, 7};
}

int family_index(const MaterialModel& m, WaveFamily f) {
  if (m.kind == MaterialKind::fluid) {
    if (f != WaveFamily::acoustic) throw AnalyticError("fluid media only carry the acoustic family");
    return 0;
  }
  switch (f) {
    case WaveFamily::slow_P: return 2;
    case WaveFamily::S: return 1;
    case WaveFamily::fast_P: return 0;
    default: throw AnalyticError("poroelastic media carry fast_P, S and slow_P families");
  }
}

struct SideOperators {
  Mat8 E, At, Bn, D;
};

SideOperators side_operators(const MaterialModel& m, double tx, double tz, bool viscous) {
  SideOperators s;
  s.E = m.E;
  s.At = m.global.projected(tx, tz);
  s.Bn = m.global.projected(-tz, tx);
  s.D = viscous ? m.global.D() : Mat8::Zero();
  return s;
}

/**
 * Outgoing modes on one side for a fixed tangential wavenumber.
 * sigma = +1 selects modes carrying energy toward +n (or decaying there),
 * sigma = -1 toward -n.
 */
std::vector<OutgoingMode> outgoing_modes(const MaterialModel& m, const SideOperators& op, double omega, cplx kt,
                                         int sigma) {
  const std::vector<int> slots = active_slots(m);
  const int n = static_cast<int>(slots.size());
  const CMat8 Lfull = omega * op.E.cast<cplx>() - kt * (op.E * op.At).cast<cplx>() - I * (op.E * op.D).cast<cplx>();
  const Mat8 Rfull = op.E * op.Bn;

  // Congruence with diag(E)^{-1/2} so all slots carry energy-norm units.
  std::vector<double> w(n);
  for (int a = 0; a < n; ++a) w[a] = 1.0 / std::sqrt(op.E(slots[a], slots[a]));
  SmallMat R(n, n);
  SmallCMat L(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      R(a, b) = 0.5 * (Rfull(slots[a], slots[b]) + Rfull(slots[b], slots[a])) * w[a] * w[b];
      L(a, b) = Lfull(slots[a], slots[b]) * w[a] * w[b];
    }

  const SymEigen se = sym_eigen(R);
  const double scale = se.values.cwiseAbs().maxCoeff();
  std::vector<int> live, null;
  for (int k = 0; k < n; ++k) (std::abs(se.values(k)) > 1e-9 * scale ? live : null).push_back(k);
  const int r = static_cast<int>(live.size()), z = static_cast<int>(null.size());
  if (r % 2 != 0) throw AnalyticError("normal operator has odd rank");

  SmallCMat Y(n, r), N(n, z);
  for (int k = 0; k < r; ++k) Y.col(k) = se.vectors.col(live[k]).cast<cplx>();
  for (int k = 0; k < z; ++k) N.col(k) = se.vectors.col(null[k]).cast<cplx>();

  SmallCMat S = Y.adjoint() * L * Y;
  SmallCMat elim(z, r);  // u0 = elim * u
  if (z > 0) {
    const SmallCMat LNN = N.adjoint() * L * N;
    const SmallCMat LNY = N.adjoint() * L * Y;
    try {
      elim = -solve_columns(LNN, LNY);
    } catch (const SingularMatrixError&) {
      throw AnalyticError("null-space block of the normal operator is singular");
    }
    S += (Y.adjoint() * L * N) * elim;
  }
  for (int k = 0; k < r; ++k) S.row(k) /= se.values(live[k]);

  const ComplexEigen ce = complex_eigen(S);
  std::vector<OutgoingMode> out;
  for (int k = 0; k < r; ++k) {
    const cplx kn = ce.values(k);
    SmallCVec u = ce.vectors.col(k);
    SmallCVec v = Y * u;
    if (z > 0) v += N * (elim * u);
    CVec8 V = CVec8::Zero();
    for (int a = 0; a < n; ++a) V(slots[a]) = v(a) * w[a];
    V = normalize(V, op.E);
    OutgoingMode mode;
    mode.kt = kt;
    mode.kn = kn;
    mode.V = V;
    mode.propagating = std::abs(kn.imag()) < 1e-8 * std::abs(kn);
    bool outgoing;
    if (mode.propagating) {
      const double flux = (V.adjoint() * op.E * op.Bn * V)(0).real();
      outgoing = sigma * flux > 0;
    } else {
      outgoing = sigma * kn.imag() > 0;
    }
    if (outgoing) out.push_back(mode);
  }
  if (static_cast<int>(out.size()) != r / 2)
    throw AnalyticError("expected " + std::to_string(r / 2) + " outgoing modes, found " + std::to_string(out.size()));
  std::sort(out.begin(), out.end(), [](const OutgoingMode& a, const OutgoingMode& b) {
    return std::abs(a.kn) < std::abs(b.kn);
  });
  return out;
}

cplx phase(cplx k_t, double xi_t, cplx k_n, double xi_n, double omega, double t) {
  return std::exp(I * (k_t * xi_t + k_n * xi_n - omega * t));
}

/// Period average of f(t) over 64 (or more) equally spaced samples.
template <class F>
double period_average(F f, double period, int n) {
  double sum = 0;
  for (int k = 0; k < n; ++k) sum += f(period * k / n);
  return sum / n;
}

}  // namespace

PlaneWave plane_wave(const MaterialModel& m, const PlaneWaveSpec& spec) {
  if (!(spec.omega > 0)) throw AnalyticError("angular frequency must be positive");
  const double pn = std::hypot(spec.px, spec.pz);
  if (std::abs(pn - 1.0) > 1e-12) throw AnalyticError("propagation direction must be a unit vector");
  const int fam = family_index(m, spec.family);
  PlaneWave pw;
  pw.period = 2 * std::numbers::pi / spec.omega;

  const bool viscous = spec.viscous && m.kind == MaterialKind::poroelastic && m.global.D().norm() > 0;
  if (!viscous) {
    const WaveSet ws = edge_eigensystem(m, spec.px, spec.pz);
    const int col = ws.count - 1 - fam;  // ascending speeds: fastest last
    pw.k = spec.omega / ws.speeds[col];
    pw.V = normalize(ws.vectors.col(col).cast<cplx>(), m.E);
    if (pw.V.real().dot(ws.vectors.col(col)) < 0) pw.V = -pw.V;
    return pw;
  }

  // (w I - i D)^{-1} A_p V = mu V with k = 1/mu.
  const Mat8 Ap = m.global.projected(spec.px, spec.pz);
  const CMat8 W = spec.omega * CMat8::Identity() - I * m.global.D().cast<cplx>();
  SmallCMat Wd = W, Ad = Ap.cast<cplx>();
  const SmallCMat M = solve_columns(Wd, Ad);
  const ComplexEigen ce = complex_eigen(M);
  std::vector<int> fwd;
  double mu_scale = 0;
  for (int k = 0; k < 8; ++k) mu_scale = std::max(mu_scale, std::abs(ce.values(k)));
  for (int k = 0; k < 8; ++k)
    if (ce.values(k).real() > 1e-9 * mu_scale) fwd.push_back(k);
  if (fwd.size() != 3) throw AnalyticError("expected three forward viscous modes, found " + std::to_string(fwd.size()));
  std::sort(fwd.begin(), fwd.end(), [&](int a, int b) { return ce.values(a).real() > ce.values(b).real(); });
  const int k = fwd[fam];
  const cplx mu = ce.values(k);
  pw.k = 1.0 / mu;
  if (pw.k.imag() < -1e-12 * std::abs(pw.k)) throw AnalyticError("viscous mode grows along its direction of travel");
  pw.V = normalize(CVec8(ce.vectors.col(k)), m.E);
  return pw;
}

double AnalyticField::period() const { return 2 * std::numbers::pi / omega; }

CVec8 AnalyticField::trace(double xi, double t, bool incident_side) const {
  const cplx kt = k_in * (px * tx + pz * tz);
  CVec8 Q = CVec8::Zero();
  if (incident_side) {
    Q += V_in * phase(kt, xi, 0.0, 0.0, omega, t);
    for (const auto& m : reflected) Q += m.V * phase(m.kt, xi, 0.0, 0.0, omega, t);
  } else {
    for (const auto& m : transmitted) Q += m.V * phase(m.kt, xi, 0.0, 0.0, omega, t);
  }
  return Q;
}

CVec8 AnalyticField::evaluate_complex(double x, double z, double t) const {
  const double dx = x - x0, dz = z - z0;
  if (!has_interface) return V_in * std::exp(I * (k_in * (px * dx + pz * dz) - omega * t));
  const double xi_t = dx * tx + dz * tz;
  const double xi_n = dx * nx() + dz * nz();
  CVec8 Q = CVec8::Zero();
  if (xi_n >= 0) {
    Q += V_in * std::exp(I * (k_in * (px * dx + pz * dz) - omega * t));
    for (const auto& m : reflected) Q += m.V * phase(m.kt, xi_t, m.kn, xi_n, omega, t);
  } else {
    for (const auto& m : transmitted) Q += m.V * phase(m.kt, xi_t, m.kn, xi_n, omega, t);
  }
  return Q;
}

Vec8 AnalyticField::evaluate(double x, double z, double t) const { return evaluate_complex(x, z, t).real(); }

double AnalyticField::dispersion_residual() const {
  double worst = 0;
  auto check = [&](const CVec8& V, cplx kt, cplx kn, const Mat8& E, const Mat8& At, const Mat8& Bn, const Mat8& D) {
    const CVec8 res = (-I * omega) * V + I * (kt * At.cast<cplx>() + kn * Bn.cast<cplx>()) * V - D.cast<cplx>() * V;
    const double scale = omega * energy_norm(V, E);
    if (scale > 0) worst = std::max(worst, energy_norm(res, E) / scale);
  };
  const cplx kt = k_in * (px * tx + pz * tz);
  const cplx kn = k_in * (px * nx() + pz * nz());
  check(V_in, kt, kn, E_in, At_in, Bn_in, D_in);
  for (const auto& m : reflected) check(m.V, m.kt, m.kn, E_in, At_in, Bn_in, D_in);
  for (const auto& m : transmitted) check(m.V, m.kt, m.kn, E_out, At_out, Bn_out, D_out);
  return worst;
}

double AnalyticField::tangential_mismatch() const {
  const cplx kt = k_in * (px * tx + pz * tz);
  const double scale = std::max(std::abs(kt), 1e-300);
  double worst = 0;
  for (const auto& m : reflected) worst = std::max(worst, std::abs(m.kt - kt) / scale);
  for (const auto& m : transmitted) worst = std::max(worst, std::abs(m.kt - kt) / scale);
  return worst;
}

double AnalyticField::interface_residual(int samples) const {
  if (!has_interface) return 0;
  const cplx kt = k_in * (px * tx + pz * tz);
  const double span = std::abs(kt) > 0 ? 2 * std::numbers::pi / std::abs(kt) : 1.0;
  const Eigen::Matrix<cplx, Eigen::Dynamic, 8, 0, kMaxWaves, 8> Cin = C.Cr.cast<cplx>(), Cout = C.Cl.cast<cplx>();
  const double ref = (Cin * V_in).norm();
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const double xi = span * s / samples;
    const double t = period() * s / samples;
    const auto res = Cin * trace(xi, t, true) - Cout * trace(xi, t, false);
    worst = std::max(worst, res.norm() / ref);
  }
  return worst;
}

bool AnalyticField::all_propagating() const {
  for (const auto& m : reflected)
    if (!m.propagating) return false;
  for (const auto& m : transmitted)
    if (!m.propagating) return false;
  return std::abs(k_in.imag()) < 1e-8 * std::abs(k_in);
}

double AnalyticField::energy_flux_balance(int quad_points) const {
  if (!has_interface) return 0;
  const double T = period();
  auto flux = [&](const CVec8& V, const Mat8& E, const Mat8& Bn) {
    return period_average(
        [&](double t) {
          const Vec8 q = (V * std::exp(-I * omega * t)).real();
          return 0.5 * q.dot(E * Bn * q);
        },
        T, quad_points);
  };
  const double f_inc = flux(V_in, E_in, Bn_in);
  double f_in_side = f_inc, f_out_side = 0;
  for (const auto& m : reflected) f_in_side += flux(m.V, E_in, Bn_in);
  for (const auto& m : transmitted) f_out_side += flux(m.V, E_out, Bn_out);

  // Power lost to the pressure jump across a partially open contact:
  // (p_left - p_right) times the normal relative fluid flux of the porous side.
  double lost = 0;
  if (out_is_poro || in_is_poro) {
    lost = period_average(
        [&](double t) {
          const Vec8 qi = trace(0.0, t, true).real(), qo = trace(0.0, t, false).real();
          const Vec8& qp = out_is_poro ? qo : qi;
          const double qn = qp(6) * nx() + qp(7) * nz();
          return (qo(0) - qi(0)) * qn;
        },
        T, quad_points);
  }
  return std::abs(f_out_side - f_in_side - lost) / std::abs(f_inc);
}

AnalyticField homogeneous_field(const MaterialModel& m, const PlaneWaveSpec& spec, double x0, double z0) {
  const PlaneWave w = plane_wave(m, spec);
  AnalyticField f;
  f.omega = spec.omega;
  f.x0 = x0;
  f.z0 = z0;
  f.px = spec.px;
  f.pz = spec.pz;
  f.k_in = w.k;
  f.V_in = w.V;
  const SideOperators op = side_operators(m, 1, 0, spec.viscous);
  f.E_in = f.E_out = op.E;
  f.At_in = f.At_out = op.At;
  f.Bn_in = f.Bn_out = op.Bn;
  f.D_in = f.D_out = op.D;
  f.in_is_poro = f.out_is_poro = m.kind == MaterialKind::poroelastic;
  return f;
}

AnalyticField reflect_transmit(const MaterialModel& upper, const MaterialModel& lower, double eta_d, double zeta,
                               const PlaneWaveSpec& incident, double x0, double z0) {
  if (incident.pz >= 0) throw AnalyticError("incident wave must travel toward the interface (p_z < 0)");
  AnalyticField f = homogeneous_field(upper, incident, x0, z0);
  f.has_interface = true;
  f.tx = 1;
  f.tz = 0;

  const SideOperators in = side_operators(upper, f.tx, f.tz, incident.viscous);
  const SideOperators out = side_operators(lower, f.tx, f.tz, incident.viscous);
  f.E_in = in.E;
  f.At_in = in.At;
  f.Bn_in = in.Bn;
  f.D_in = in.D;
  f.E_out = out.E;
  f.At_out = out.At;
  f.Bn_out = out.Bn;
  f.D_out = out.D;
  f.in_is_poro = upper.kind == MaterialKind::poroelastic;
  f.out_is_poro = lower.kind == MaterialKind::poroelastic;

  const cplx kt = f.k_in * (incident.px * f.tx + incident.pz * f.tz);
  f.reflected = outgoing_modes(upper, in, incident.omega, kt, +1);
  f.transmitted = outgoing_modes(lower, out, incident.omega, kt, -1);

  // Distinct IDs so identical media still get an explicit interface.
  MaterialModel lo = lower, up = upper;
  lo.id = 0;
  up.id = 1;
  const EdgeContext ctx = make_context(lo, up, f.nx(), f.nz(), eta_d, zeta);
  f.C = interface_matrices(ctx);

  const int nr = static_cast<int>(f.reflected.size()), nt = static_cast<int>(f.transmitted.size());
  const int rows = static_cast<int>(f.C.Cl.rows());
  if (rows != nr + nt)
    throw AnalyticError("interface conditions (" + std::to_string(rows) + ") do not match outgoing modes (" +
                        std::to_string(nr + nt) + ")");
  SmallCMat S(rows, rows);
  const auto Cin = f.C.Cr.cast<cplx>();
  const auto Cout = f.C.Cl.cast<cplx>();
  for (int k = 0; k < nr; ++k) S.col(k) = -(Cin * f.reflected[k].V);
  for (int k = 0; k < nt; ++k) S.col(nr + k) = Cout * f.transmitted[k].V;
  const SmallCVec rhs = Cin * f.V_in;
  SmallCVec beta;
  try {
    beta = solve_lu(S, rhs);
  } catch (const SingularMatrixError&) {
    throw AnalyticError(std::string("singular reflection/transmission system at ") + to_string(ctx.kind) +
                        " interface");
  }
  for (int k = 0; k < nr; ++k) {
    f.reflected[k].beta = beta(k);
    f.reflected[k].V *= beta(k);
  }
  for (int k = 0; k < nt; ++k) {
    f.transmitted[k].beta = beta(nr + k);
    f.transmitted[k].V *= beta(nr + k);
  }
  return f;
}

}  // namespace pw
