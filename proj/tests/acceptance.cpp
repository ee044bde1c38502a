// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select
// criteria whose key contains any of them (e.g. `acceptance material zeta`).
#include "pw/config.hpp"
#include "pw/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pw;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(PW_SOURCE_DIR) / "configs";

ScenarioConfig config(const std::string& name) { return load_config((kConfigs / (name + ".yaml")).string()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double rel(double v, double want) { return std::abs(v - want) / std::abs(want); }

// Material table: speeds per direction and dissipation times within 1%;
// rho and m_i against their closed forms from the base properties.
Outcome material_oracle() {
  struct Row {
    const char* name;
    PoroMaterial m;
    double v[8];
  };
  const Row rows[] = {{"sandstone", presets::sandstone(), {6000, 5260, 3480, 3520, 1030, 746, 5.95, 1.82}},
                      {"shale", presets::shale(), {2480, 2480, 1430, 1430, 1130, 1130, 1.25, 1.25}},
                      {"cortical", presets::cortical_bone(), {3290, 3290, 1620, 1620, 1123, 1123, 33, 33}},
                      {"cancellous", presets::cancellous_bone(), {3260, 3260, 1680, 1680, 1480, 1480, 92, 92}}};
  double worst = 0, worst_closed = 0;
  for (const Row& r : rows) {
    const DerivedScalars d = derive_scalars(r.m);
    const double got[8] = {d.dir1.fast_p, d.dir3.fast_p, d.dir1.shear,     d.dir3.shear,
                           d.dir1.slow_p, d.dir3.slow_p, d.tau_d1 * 1e6, d.tau_d3 * 1e6};
    for (int k = 0; k < 8; ++k) worst = std::max(worst, rel(got[k], r.v[k]));
    const PoroMaterial& m = r.m;
    const double rho = (1 - m.phi) * m.rho_s + m.phi * m.rho_f;
    worst_closed = std::max({worst_closed, rel(d.rho, rho), rel(d.m1, m.T1 * m.rho_f / m.phi),
                             rel(d.m3, m.T3 * m.rho_f / m.phi)});
  }
  Detail s;
  s << "max table deviation " << worst * 100 << "% (limit 1%), rho/m_i closed-form deviation " << worst_closed;
  return {worst <= 0.01 && worst_closed <= 1e-12, s.str()};
}

Outcome eigensystem_properties() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  std::normal_distribution<double> n01;
  double orth = 0, equi = 0, flux = 0;
  bool paired = true;
  int n = 0;
  for (const PoroMaterial& base :
       {presets::sandstone(), presets::shale(), presets::cortical_bone(), presets::cancellous_bone()}) {
    for (int trial = 0; trial < 64; ++trial, ++n) {
      PoroMaterial p = base;
      p.theta = ang(rng);
      const MaterialModel m = make_model(Material::make_poro("m", p), 0);
      const double a = ang(rng), nx = std::cos(a), nz = std::sin(a);
      const WaveSet ws = edge_eigensystem(m, nx, nz);
      if (ws.count != 6) return {false, "expected six propagating waves"};
      const Eigen::Matrix<double, 8, 6> R = ws.vectors;
      orth = std::max(orth, (R.transpose() * m.E * R - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff());
      for (int k = 0; k < 6; ++k) {
        const Vec8 r = R.col(k);
        equi = std::max(equi, std::abs(r.head<4>().dot(m.E.topLeftCorner<4, 4>() * r.head<4>()) -
                                       r.tail<4>().dot(m.E.bottomRightCorner<4, 4>() * r.tail<4>())));
      }
      for (int k = 0; k < 3; ++k) paired &= ws.speeds[k] == -ws.speeds[5 - k];
      const Mat8 Ap = m.global.projected(nx, nz);
      Vec8 ql, qr;
      for (int k = 0; k < 8; ++k) {
        ql(k) = n01(rng) * (k < 4 ? 1e6 : 1.0);
        qr(k) = n01(rng) * (k < 4 ? 1e6 : 1.0);
      }
      const RiemannSolution s = solve_same_material(ws, m.E, ql, qr);
      const Vec8 d = s.left_fluctuation + s.right_fluctuation - Ap * (qr - ql);
      flux = std::max(flux, d.norm() / (Ap.cwiseAbs().maxCoeff() * (qr - ql).norm()));
    }
  }
  Detail s;
  s << n << " cases: E-orthonormality " << orth << ", equipartition " << equi << ", flux consistency " << flux
    << ", speed pairing " << (paired ? "exact" : "broken") << " (limits 1e-10)";
  return {orth <= 1e-10 && equi <= 1e-10 && flux <= 1e-10 && paired, s.str()};
}

Outcome interface_conditioning() {
  const std::vector<ZetaRow> rows = zeta_sweep(config("zeta_sweep"));
  double worst = 0, worst_ratio = 0;
  std::map<std::tuple<std::string, std::string, double, double>, std::pair<double, double>> groups;  // min, at 0.5
  for (const ZetaRow& r : rows) {
    worst = std::max(worst, r.cond);
    auto [it, fresh] = groups.try_emplace({r.left, r.right, r.eta_d, r.normal_angle}, r.cond, -1.0);
    it->second.first = std::min(it->second.first, r.cond);
    if (r.zeta == 0.5) it->second.second = r.cond;
  }
  for (const auto& [key, v] : groups) {
    if (v.second < 0) return {false, "zeta = 0.5 missing from the sweep"};
    worst_ratio = std::max(worst_ratio, v.second / v.first);
  }
  Detail s;
  s << rows.size() << " systems: max cond " << worst << " (limit 1e8), worst cond(0.5)/min " << worst_ratio
    << " (limit 5)";
  return {worst <= 1e8 && worst_ratio <= 5, s.str()};
}

Outcome rt_self_consistency() {
  double ires = 0, tang = 0, flux = 0;
  int fields = 0, balanced = 0;
  for (const char* name : {"rt_fluid_poro_inviscid", "rt_poro_poro_inviscid"}) {
    const ScenarioConfig c = config(name);
    const std::vector<MaterialModel> models = build_models(c, true);
    const MaterialModel& up = models[c.material_index(c.reflection.upper)];
    const MaterialModel& lo = models[c.material_index(c.reflection.lower)];
    PlaneWaveSpec spec = wave_spec(c);
    spec.viscous = false;
    for (int a = 1; a <= 8; ++a) {
      const double inc = a * 10.0 * std::numbers::pi / 180;  // below horizontal
      spec.px = std::cos(inc);
      spec.pz = -std::sin(inc);
      for (double ed : {0.0, 0.5, 1.0}) {
        const AnalyticField f = reflect_transmit(up, lo, ed, c.interface.zeta, spec);
        ires = std::max(ires, f.interface_residual());
        tang = std::max(tang, f.tangential_mismatch());
        if (f.all_propagating()) {
          flux = std::max(flux, f.energy_flux_balance());
          ++balanced;
        }
        ++fields;
      }
    }
  }
  Detail s;
  s << fields << " fields: interface residual " << ires << " (limit 1e-9), tangential mismatch " << tang
    << " (limit 1e-10), energy balance " << flux << " over " << balanced << " all-propagating fields (limit 1e-8)";
  return {ires < 1e-9 && tang < 1e-10 && flux < 1e-8 && balanced > 0, s.str()};
}

const std::vector<int> kGrids{100, 200, 400};

std::string describe(const ConvergenceResult& r) {
  Detail s;
  s << r.id << ": 1-norm";
  for (const ErrorReport& e : r.reports) s << ' ' << e.norm1;
  s << " rate " << r.fit1.rate << ", max-norm rate " << r.fit_max.rate;
  return s.str();
}

Outcome desk_convergence() {
  const ConvergenceResult a = run_convergence(reflection_case(config("rt_fluid_poro_inviscid")), kGrids);
  const ConvergenceResult b = run_convergence(reflection_case(config("rt_poro_poro_inviscid")), kGrids);
  const ConvergenceResult v = run_convergence(reflection_case(config("rt_fluid_poro_viscous_10khz")), kGrids);
  const double finest = a.reports.back().norm1;
  const bool pass = a.fit1.rate >= 1.9 && a.fit_max.rate >= 0.85 && finest <= 5e-3 && b.fit1.rate >= 1.9 &&
                    v.fit1.rate >= 1.85;
  return {pass, describe(a) + " (limits 1.9, 0.85, finest <= 5e-3); " + describe(b) + " (limit 1.9); " + describe(v) +
                    " (limit 1.85)"};
}

Outcome omit_line() {
  const ConvergenceResult a = run_convergence(plane_wave_case(config("plane_wave_acoustic_omit_line")), kGrids);
  const ConvergenceResult f = run_convergence(plane_wave_case(config("plane_wave_fast_p_omit_line")), kGrids);
  const bool pass = a.fit1.rate >= 1.9 && a.fit_max.rate >= 0.75 && f.fit1.rate >= 1.9 && f.fit_max.rate >= 0.75;
  return {pass, describe(a) + "; " + describe(f) + " (limits 1.9, 0.75)"};
}

std::string describe(const SplittingResult& r) {
  Detail s;
  s << "tau_d " << r.tau_min << " s, dt " << r.dt.front() << ".." << r.dt.back() << ", rates";
  for (double x : r.rates) s << ' ' << x;
  return s.str();
}

Outcome splitting_order() {
  const SplittingResult ns = splitting_study(config("splitting_nonstiff"));
  const SplittingResult st = splitting_study(config("splitting_stiff"));
  double ns_min = 1e9, st_max = -1e9;
  for (double r : ns.rates) ns_min = std::min(ns_min, r);
  for (double r : st.rates) st_max = std::max(st_max, r);
  const bool regimes = ns.dt.front() < ns.tau_min && st.dt.back() > st.tau_min;
  return {regimes && !ns.rates.empty() && !st.rates.empty() && ns_min >= 1.8 && st_max <= 1.3,
          "non-stiff " + describe(ns) + " (limit >= 1.8); stiff " + describe(st) + " (limit <= 1.3)"};
}

Outcome scatterer() {
  const ScenarioConfig c = config("scatterer");
  const ScattererResult r = scatterer_study(c, {128, 256, 512}, "acceptance_out/scatterer");
  Detail s;
  s << "diffs";
  for (double d : r.diffs) s << ' ' << d;
  s << ", rate";
  for (double x : r.rates) s << ' ' << x;
  s << " (limit 0.8), fluid-slot contamination " << r.contamination << " (limit 1e-10), t = " << r.end_time << " s";
  const bool pass = !r.rates.empty() && r.rates.back() >= 0.8 && r.contamination <= 1e-10;
  return {pass, s.str()};
}

Outcome femur() {
  const ScenarioConfig c = config("femur");
  const FemurResult r = run_femur(c, "acceptance_out/femur", 400);
  const double p_scale = c.femur.peak_pressure;
  const double q_scale = p_scale / c.material(c.femur.bath).fluid.impedance();
  const bool reached = std::abs(r.time - c.femur.end_time) <= 1e-12 && !r.snapshots.empty() &&
                       r.snapshots.back().find("18.00us") != std::string::npos;
  const bool nonzero = r.max_p_core > 1e-6 * p_scale && r.max_p_shell > 1e-6 * p_scale &&
                       r.max_q_core > 1e-6 * q_scale && r.max_q_shell > 1e-6 * q_scale;
  Detail s;
  s << "t = " << r.time * 1e6 << " us after " << r.steps << " steps, " << r.snapshots.size()
    << " snapshots, contamination " << r.contamination << ", max p core/shell " << r.max_p_core << '/'
    << r.max_p_shell << " Pa, max |q| core/shell " << r.max_q_core << '/' << r.max_q_shell << " m/s";
  return {reached && nonzero && r.contamination <= 1e-10, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"material-oracle", material_oracle},
      {"eigensystem-properties", eigensystem_properties},
      {"interface-conditioning", interface_conditioning},
      {"rt-self-consistency", rt_self_consistency},
      {"desk-convergence", desk_convergence},
      {"omit-line", omit_line},
      {"splitting-order", splitting_order},
      {"scatterer-self-convergence", scatterer},
      {"femur-demo", femur}};
  fs::create_directories("acceptance_out");
  int failed = 0;
  for (const auto& [key, run] : criteria) {
    bool selected = argc < 2;
    for (int k = 1; k < argc; ++k) selected |= key.find(argv[k]) != std::string::npos;
    if (!selected) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", key.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
