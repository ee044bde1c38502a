#include "pw/scenarios.hpp"

#include "pw/io.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>

namespace pw {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Material inviscid_copy(Material m) {
  if (m.kind == MaterialKind::poroelastic) m.poro.eta = 0;
  return m;
}

void require_multiple(int N, int k, const char* what) {
  if (N % k != 0) throw ConfigError(std::string(what) + " grid size must be a multiple of " + std::to_string(k));
}

double max_fluid_pressure(const SimulationState& s) {
  const MappedGrid& g = s.grid();
  double p = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) p = std::max(p, std::abs(s.q(i, j)(0)));
  return p;
}

std::vector<Vec8> interior(const SimulationState& s) {
  const MappedGrid& g = s.grid();
  std::vector<Vec8> out;
  out.reserve(static_cast<size_t>(g.N1) * g.N2);
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) out.push_back(s.q(i, j));
  return out;
}

}  // namespace

std::vector<MaterialModel> build_models(const ScenarioConfig& c, bool inviscid) {
  std::vector<MaterialModel> out;
  for (size_t i = 0; i < c.materials.size(); ++i)
    out.push_back(make_model(inviscid ? inviscid_copy(c.materials[i]) : c.materials[i], static_cast<int>(i)));
  return out;
}

PlaneWaveSpec wave_spec(const ScenarioConfig& c) {
  PlaneWaveSpec s;
  s.omega = c.wave.omega;
  s.px = std::cos(c.wave.direction);
  s.pz = std::sin(c.wave.direction);
  s.family = c.wave.family;
  s.viscous = c.wave.viscous;
  return s;
}

double reference_speed(const Material& m, WaveFamily family) {
  if (m.kind == MaterialKind::fluid) return m.fluid.sound_speed();
  const DerivedScalars d = derive_scalars(m.poro);
  switch (family) {
    case WaveFamily::S: return d.dir1.shear;
    case WaveFamily::slow_P: return d.dir1.slow_p;
    default: return d.dir1.fast_p;
  }
}

ConvergenceCase plane_wave_case(const ScenarioConfig& c) {
  ConvergenceCase cc;
  cc.id = c.name;
  cc.cfg = c.solver;
  cc.periods = c.periods;
  if (c.plane_wave.omit_line) {
    cc.cfg.second_order = SecondOrder::omit_on_line;
  }
  const int mid = c.material_index(c.plane_wave.medium);
  const std::vector<MaterialModel> models = build_models(c, !c.wave.viscous);
  const PlaneWaveSpec spec = wave_spec(c);
  const AnalyticField field = homogeneous_field(models[mid], spec);
  const double L = c.plane_wave.domain_wavelengths * kTwoPi * reference_speed(c.materials[mid], spec.family) / spec.omega;
  cc.build = [=](int N) {
    auto inst = std::make_unique<CaseInstance>();
    inst->grid = build_grid(GridMapping::identity(-L / 2, L / 2, -L / 2, L / 2), N, N, [mid](double, double) { return mid; });
    inst->models = models;
    inst->interfaces.set_default(c.interface);
    inst->field = field;
    return inst;
  };
  return cc;
}

ConvergenceCase reflection_case(const ScenarioConfig& c) {
  ConvergenceCase cc;
  cc.id = c.name;
  cc.cfg = c.solver;
  cc.periods = c.periods;
  const int up = c.material_index(c.reflection.upper), lo = c.material_index(c.reflection.lower);
  const std::vector<MaterialModel> models = build_models(c, !c.wave.viscous);
  const PlaneWaveSpec spec = wave_spec(c);
  const AnalyticField field = reflect_transmit(models[up], models[lo], c.interface.eta_d, c.interface.zeta, spec);
  const Material& ref = c.material(c.reflection.wavelength_medium);
  const double L = c.reflection.domain_wavelengths * kTwoPi *
                   reference_speed(ref, ref.kind == MaterialKind::fluid ? WaveFamily::acoustic : WaveFamily::fast_P) /
                   spec.omega;
  cc.build = [=](int N) {
    require_multiple(N, 2, "reflection");
    auto inst = std::make_unique<CaseInstance>();
    inst->grid = build_grid(GridMapping::identity(-L / 2, L / 2, -L / 2, L / 2), N, N,
                            [up, lo](double, double z) { return z < 0 ? lo : up; });
    inst->models = models;
    inst->interfaces.set_default(c.interface);
    inst->field = field;
    return inst;
  };
  return cc;
}

std::vector<RtRow> rt_coefficients(const ScenarioConfig& c) {
  const int up = c.material_index(c.reflection.upper), lo = c.material_index(c.reflection.lower);
  const std::vector<MaterialModel> models = build_models(c, !c.wave.viscous);
  std::vector<double> angles = c.reflection.angles;
  if (angles.empty()) angles.push_back(-c.wave.direction);
  std::vector<RtRow> rows;
  for (double a : angles) {
    ScenarioConfig cc = c;
    cc.wave.direction = -a;
    const AnalyticField f = reflect_transmit(models[up], models[lo], c.interface.eta_d, c.interface.zeta, wave_spec(cc));
    auto emit = [&](const std::vector<OutgoingMode>& modes, const char* side) {
      for (size_t k = 0; k < modes.size(); ++k)
        rows.push_back({a, side, static_cast<int>(k), modes[k].kn, modes[k].beta, modes[k].propagating});
    };
    emit(f.reflected, "reflected");
    emit(f.transmitted, "transmitted");
  }
  return rows;
}

void write_rt_csv(std::ostream& os, const std::vector<RtRow>& rows) {
  os << "angle_deg,side,mode,kn_re,kn_im,beta_abs,beta_re,beta_im,propagating\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.angle * 180 / std::numbers::pi << ',' << r.side << ',' << r.index << ',' << r.kn.real() << ','
       << r.kn.imag() << ',' << std::abs(r.beta) << ',' << r.beta.real() << ',' << r.beta.imag() << ','
       << (r.propagating ? 1 : 0) << '\n';
}

std::vector<ZetaRow> zeta_sweep(const ScenarioConfig& c) {
  std::vector<ZetaRow> rows;
  for (const auto& [a, b] : c.zeta_sweep.pairs) {
    // Distinct IDs even if a pair names the same medium twice.
    const MaterialModel left = make_model(c.material(a), 0);
    const MaterialModel right = make_model(c.material(b), 1);
    for (double ed : c.zeta_sweep.eta_d)
      for (double ang : c.zeta_sweep.normal_angles)
        for (int k = 0; k < c.zeta_sweep.samples; ++k) {
          const double zeta = static_cast<double>(k) / (c.zeta_sweep.samples - 1);
          const EdgeContext ctx = make_context(left, right, std::cos(ang), std::sin(ang), ed, zeta);
          const SmallMat S = interface_system(ctx, edge_eigensystem(ctx, Side::left), edge_eigensystem(ctx, Side::right));
          rows.push_back({a, b, ed, zeta, ang, cond_2norm(S)});
        }
  }
  return rows;
}

void write_zeta_csv(std::ostream& os, const std::vector<ZetaRow>& rows) {
  os << "left,right,eta_d,zeta,normal_deg,cond\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.left << ',' << r.right << ',' << r.eta_d << ',' << r.zeta << ',' << r.normal_angle * 180 / std::numbers::pi
       << ',' << r.cond << '\n';
}

SplittingResult splitting_study(const ScenarioConfig& c) {
  const SplittingConfig& sc = c.splitting;
  const int mid = c.material_index(sc.medium);
  Material mat = c.materials[mid];
  if (mat.kind != MaterialKind::poroelastic) throw ConfigError("splitting study needs a poroelastic medium");
  mat.poro.eta *= sc.viscosity_scale;
  const MaterialModel model = make_model(mat, 0);
  PlaneWaveSpec spec = wave_spec(c);
  spec.viscous = true;
  const AnalyticField field = homogeneous_field(model, spec);
  const double L = sc.domain_wavelengths * kTwoPi * reference_speed(mat, spec.family) / spec.omega;
  const MappedGrid grid =
      build_grid(GridMapping::identity(-L / 2, L / 2, -L / 2, L / 2), sc.N, sc.N, [](double, double) { return 0; });

  SplittingResult res;
  res.tau_min = std::min(model.scalars.tau_d1, model.scalars.tau_d3);
  if (!sc.dt.empty()) {
    res.dt = sc.dt;
  } else {
    for (int k = 0; k < sc.levels; ++k) res.dt.push_back(sc.dt_base / std::pow(2.0, k));
  }

  const FieldFn fn = [&field](double x, double z, double t) { return field.evaluate(x, z, t); };
  StepConfig cfg = c.solver;
  cfg.boundary = Boundary::analytic_fill;
  std::vector<std::vector<Vec8>> finals;
  for (double dt : res.dt) {
    SimulationState s(grid, {model}, InterfaceTable{});
    s.boundary_field = fn;
    s.initialize(fn, 0.0);
    const double limit = compute_dt(s, 1.0);
    if (dt > limit) throw ConfigError("splitting dt " + std::to_string(dt) + " exceeds the CFL limit " + std::to_string(limit));
    const double n = std::round(sc.end_time / dt);
    if (n < 1 || std::abs(n * dt - sc.end_time) > 1e-9 * sc.end_time)
      throw ConfigError("splitting end_time must be an integer multiple of every dt");
    for (long k = 0; k < static_cast<long>(n); ++k) strang_step(s, dt, cfg);
    finals.push_back(interior(s));
  }
  const double half_core = 0.5 * sc.core_fraction * L;
  const auto core = [&grid, half_core](int i, int j) {
    const Point& p = grid.centroid[grid.cell(i, j)];
    return std::abs(p.x) <= half_core && std::abs(p.z) <= half_core;
  };
  for (size_t k = 0; k + 1 < finals.size(); ++k)
    res.diffs.push_back(area_weighted_difference(grid, {model}, finals[k], finals[k + 1], core));
  for (size_t k = 0; k + 1 < res.diffs.size(); ++k) res.rates.push_back(std::log2(res.diffs[k] / res.diffs[k + 1]));
  return res;
}

Vec8 acoustic_pulse(const MaterialModel& fluid, double x, double center, double sigma, double carrier_k,
                    double amplitude) {
  const double u = x - center;
  const double p = amplitude * std::exp(-0.5 * u * u / (sigma * sigma)) * std::cos(carrier_k * u);
  Vec8 q = Vec8::Zero();
  q(0) = p;
  q(6) = p / fluid.Zf;
  return q;
}

MappedGrid scenario_grid(const ScenarioConfig& c, int N) {
  switch (c.kind) {
    case ScenarioKind::scatterer: {
      require_multiple(N, 8, "scatterer");
      const int host = c.material_index(c.scatterer.host), cyl = c.material_index(c.scatterer.cylinder);
      const double r = c.scatterer.radius;
      return build_grid(GridMapping::square_to_circle(c.scatterer.half_width, r), N, N,
                        [=](double x, double z) { return std::hypot(x, z) < r ? cyl : host; });
    }
    case ScenarioKind::femur: {
      require_multiple(N, 20, "femur");
      const FemurConfig& f = c.femur;
      const int bath = c.material_index(f.bath), shell = c.material_index(f.shell), core = c.material_index(f.core);
      const double rc = f.core_radius, ro = f.outer_radius;
      return build_grid(GridMapping::concentric_annulus(f.half_width, rc, ro), N, N, [=](double x, double z) {
        const double r = std::hypot(x, z);
        return r < rc ? core : (r < ro ? shell : bath);
      });
    }
    case ScenarioKind::plane_wave:
    case ScenarioKind::reflection: {
      const ConvergenceCase cc = c.kind == ScenarioKind::plane_wave ? plane_wave_case(c) : reflection_case(c);
      return cc.build(N)->grid;
    }
    default: throw ConfigError(std::string("scenario '") + to_string(c.kind) + "' has no grid");
  }
}

ScattererResult scatterer_study(const ScenarioConfig& c, const std::vector<int>& grids, const std::string& out_dir) {
  const ScattererConfig& sc = c.scatterer;
  for (size_t k = 0; k + 1 < grids.size(); ++k)
    if (grids[k + 1] != 2 * grids[k]) throw ConfigError("scatterer grids must double successively");
  const std::vector<MaterialModel> models = build_models(c, !c.wave.viscous);
  const int host = c.material_index(sc.host);
  if (models[host].kind != MaterialKind::fluid) throw ConfigError("scatterer host must be a fluid");
  const double k_carrier = kTwoPi * sc.frequency / models[host].sound_speed;

  ScattererResult res;
  res.grids = grids;
  res.end_time = sc.cycles / sc.frequency;
  std::vector<MappedGrid> meshes;
  std::vector<std::vector<Vec8>> finals;
  meshes.reserve(grids.size());
  for (int N : grids) {
    meshes.push_back(scenario_grid(c, N));
    const MappedGrid& g = meshes.back();
    InterfaceTable it;
    it.set_default(c.interface);
    SimulationState s(g, models, it);
    for (int j = -MappedGrid::ng; j < N + MappedGrid::ng; ++j)
      for (int i = -MappedGrid::ng; i < N + MappedGrid::ng; ++i) {
        const int cell = g.cell(i, j);
        s.q(i, j) = g.material[cell] == host ? acoustic_pulse(models[host], g.centroid[cell].x, sc.pulse_center,
                                                              sc.pulse_width, k_carrier, 1.0)
                                             : Vec8::Zero();
      }
    StepConfig cfg = c.solver;
    cfg.boundary = Boundary::extrapolate_zero_order;
    run_until(s, res.end_time, cfg);
    res.contamination = std::max(res.contamination, fluid_slot_contamination(s));
    res.peak_pressure = std::max(res.peak_pressure, max_fluid_pressure(s));
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::string prefix = out_dir + "/scatterer_N" + std::to_string(N);
      dump_field(s, prefix, dump_grid(g, prefix));
    }
    finals.push_back(interior(s));
    if (finals.size() >= 2) {
      const size_t k = finals.size() - 2;
      const std::vector<Vec8> restricted = restrict_to_coarse(s, meshes[k]);
      res.diffs.push_back(area_weighted_difference(meshes[k], models, finals[k], restricted));
      finals[k].clear();
      finals[k].shrink_to_fit();
    }
  }
  for (size_t k = 0; k + 1 < res.diffs.size(); ++k) res.rates.push_back(std::log2(res.diffs[k] / res.diffs[k + 1]));
  return res;
}

void write_scatterer_csv(std::ostream& os, const ScattererResult& r) {
  os << "N,diff_to_next,rate\n";
  os.precision(10);
  for (size_t k = 0; k < r.diffs.size(); ++k) {
    os << r.grids[k] << ',' << r.diffs[k] << ',';
    if (k < r.rates.size()) os << r.rates[k];
    os << '\n';
  }
}

FemurResult run_femur(const ScenarioConfig& c, const std::string& out_dir, int N_override, int threads) {
  const FemurConfig& f = c.femur;
  const int N = N_override > 0 ? N_override : f.N;
  const MappedGrid g = scenario_grid(c, N);
  const std::vector<MaterialModel> models = build_models(c, false);
  const int bath = c.material_index(f.bath), shell = c.material_index(f.shell), core = c.material_index(f.core);
  if (models[bath].kind != MaterialKind::fluid) throw ConfigError("femur bath must be a fluid");
  InterfaceTable it;
  it.set_default(c.interface);
  SimulationState s(g, models, it);

  const double sigma = models[bath].sound_speed / (kTwoPi * f.frequency_width);
  const double center = -(f.outer_radius + f.peak_offset);
  for (int j = -MappedGrid::ng; j < N + MappedGrid::ng; ++j)
    for (int i = -MappedGrid::ng; i < N + MappedGrid::ng; ++i) {
      const int cell = g.cell(i, j);
      s.q(i, j) = g.material[cell] == bath
                      ? acoustic_pulse(models[bath], g.centroid[cell].x, center, sigma, 0.0, f.peak_pressure)
                      : Vec8::Zero();
    }

  StepConfig cfg = c.solver;
  cfg.boundary = Boundary::extrapolate_zero_order;
  if (threads > 0) cfg.threads = threads;

  FemurResult res;
  std::filesystem::create_directories(out_dir);
  const std::string material_map = dump_grid(g, out_dir + "/femur_grid");
  int snap = 0;
  while (s.time < f.end_time * (1 - 1e-12)) {
    const double target = std::min(f.end_time, (snap + 1) * f.output_interval);
    res.steps += run_until(s, target, cfg);
    ++snap;
    char name[64];
    std::snprintf(name, sizeof name, "/femur_t%06.2fus", s.time * 1e6);
    res.snapshots.push_back(dump_field(s, out_dir + name, material_map));
  }
  res.time = s.time;
  res.contamination = fluid_slot_contamination(s);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const int m = g.material[g.cell(i, j)];
      const Vec8& q = s.q(i, j);
      const double p = std::abs(q(0)), qq = std::hypot(q(6), q(7));
      res.peak_pressure = std::max(res.peak_pressure, p);
      if (m == core) {
        res.max_p_core = std::max(res.max_p_core, p);
        res.max_q_core = std::max(res.max_q_core, qq);
      } else if (m == shell) {
        res.max_p_shell = std::max(res.max_p_shell, p);
        res.max_q_shell = std::max(res.max_q_shell, qq);
      }
    }
  return res;
}

}  // namespace pw
