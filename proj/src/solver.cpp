#include "pw/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>

namespace pw {

namespace {

struct EdgeKey {
  int ml, mr;
  std::uint64_t nx, nz;
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    std::size_t h = std::hash<std::uint64_t>()(k.nx);
    h ^= std::hash<std::uint64_t>()(k.nz) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(k.ml * 65599 + k.mr) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Runs f(r) for r in [lo, hi] in three passes by r mod 3, so concurrently
// processed lines are at least three apart and their +-1 writes never collide.
template <class F>
void for_lines(int lo, int hi, int threads, F&& f) {
  for (int phase = 0; phase < 3; ++phase) {
    std::vector<int> lines;
    for (int r = lo + phase; r <= hi; r += 3) lines.push_back(r);
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(lines.size())));
    if (nt == 1) {
      for (int r : lines) f(r);
      continue;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (lines.size() + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      const std::size_t b = t * chunk, e = std::min(lines.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back([&, b, e] {
        for (std::size_t k = b; k < e; ++k) f(lines[k]);
      });
    }
    for (auto& th : pool) th.join();
  }
}

using Beta = Eigen::Matrix<double, kMaxWaves, 1>;

double mc_limiter(double theta) { return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta})); }

}  // namespace

SimulationState::SimulationState(const MappedGrid& grid, std::vector<MaterialModel> models,
                                 const InterfaceTable& interfaces)
    : grid_(&grid), models_(std::move(models)) {
  const MappedGrid& g = grid;
  for (int m : g.material)
    if (m < 0 || m >= static_cast<int>(models_.size()))
      throw SolverError("grid references undefined material id " + std::to_string(m));
  for (std::size_t k = 0; k < models_.size(); ++k)
    if (models_[k].id != static_cast<int>(k)) throw SolverError("material models must be indexed by id");
  q_.assign(g.material.size(), Vec8::Zero());

  // The counters track the single most-recent edge input along the sweep; the
  // index then shares operators between non-adjacent identical edges.
  std::unordered_map<EdgeKey, std::int32_t, EdgeKeyHash> index;
  EigenCache cache;
  std::optional<EdgeKey> last;
  std::int32_t last_id = -1;
  auto get = [&](int ml, int mr, double nx, double nz, int i, int j, const char* fam) -> std::int32_t {
    const EdgeKey key{ml, mr, std::bit_cast<std::uint64_t>(nx), std::bit_cast<std::uint64_t>(nz)};
    if (last && *last == key) {
      ++cache_hits_;
      return last_id;
    }
    ++cache_misses_;
    last = key;
    auto it = index.find(key);
    if (it != index.end()) return last_id = it->second;
    if (it != index.end()) return it->second;
    const InterfaceParams p = interfaces.get(ml, mr);
    try {
      const EdgeContext ctx = make_context(models_[ml], models_[mr], nx, nz, p.eta_d, p.zeta);
      solvers_.push_back(EdgeSolver::build(ctx, &cache));
    } catch (const std::exception& e) {
      throw SolverError(std::string(e.what()) + " at " + fam + "-edge (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
    }
    const auto id = static_cast<std::int32_t>(solvers_.size() - 1);
    index.emplace(key, id);
    return last_id = id;
  };

  xidx_.assign(g.xn_x.size(), -1);
  yidx_.assign(g.yn_x.size(), -1);
  for (int j = -1; j <= g.N2; ++j)
    for (int i = -1; i <= g.N1 + 1; ++i) {
      const int e = g.xedge(i, j);
      xidx_[e] = get(g.material[g.cell(i - 1, j)], g.material[g.cell(i, j)], g.xn_x[e], g.xn_z[e], i, j, "x");
    }
  for (int j = -1; j <= g.N2 + 1; ++j)
    for (int i = -1; i <= g.N1; ++i) {
      const int e = g.yedge(i, j);
      yidx_[e] = get(g.material[g.cell(i, j - 1)], g.material[g.cell(i, j)], g.yn_x[e], g.yn_z[e], i, j, "y");
    }
}

void SimulationState::initialize(const FieldFn& f, double t) {
  const MappedGrid& g = *grid_;
  for (int j = -MappedGrid::ng; j < g.N2 + MappedGrid::ng; ++j)
    for (int i = -MappedGrid::ng; i < g.N1 + MappedGrid::ng; ++i) {
      const Point& c = g.centroid[g.cell(i, j)];
      q_[g.cell(i, j)] = f(c.x, c.z, t);
    }
  time = t;
}

double compute_dt(const SimulationState& s, double cfl_target) {
  if (!(cfl_target > 0.0 && cfl_target <= 1.0)) throw SolverError("cfl_target must lie in (0, 1]");
  const MappedGrid& g = s.grid();
  double rate = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      const double k = g.kappa[g.cell(i, j)];
      const double rx = std::max(s.xsolver(i, j).max_speed() * g.x_ratio[g.xedge(i, j)],
                                 s.xsolver(i + 1, j).max_speed() * g.x_ratio[g.xedge(i + 1, j)]) /
                        (k * g.dxi1);
      const double ry = std::max(s.ysolver(i, j).max_speed() * g.y_ratio[g.yedge(i, j)],
                                 s.ysolver(i, j + 1).max_speed() * g.y_ratio[g.yedge(i, j + 1)]) /
                        (k * g.dxi2);
      rate = std::max({rate, rx, ry});
    }
  if (!(rate > 0.0)) throw SolverError("no nonzero wave speed on the grid");
  return cfl_target / rate;
}

void fill_ghosts(SimulationState& s, const StepConfig& cfg, double t) {
  const MappedGrid& g = s.grid();
  const int ng = MappedGrid::ng;
  if (cfg.boundary == Boundary::analytic_fill && !s.boundary_field)
    throw SolverError("analytic_fill boundary requires an analytic field");
  for (int j = -ng; j < g.N2 + ng; ++j)
    for (int i = -ng; i < g.N1 + ng; ++i) {
      if (g.interior(i, j)) continue;
      if (cfg.boundary == Boundary::analytic_fill) {
        const Point& c = g.centroid[g.cell(i, j)];
        s.q(i, j) = s.boundary_field(c.x, c.z, t);
      } else {
        s.q(i, j) = s.q(std::clamp(i, 0, g.N1 - 1), std::clamp(j, 0, g.N2 - 1));
      }
    }
}

void hyperbolic_step(SimulationState& s, double dt, const StepConfig& cfg) {
  const MappedGrid& g = s.grid();
  const int N1 = g.N1, N2 = g.N2;
  std::vector<Vec8> dq(g.material.size(), Vec8::Zero());
  const bool second = cfg.second_order != SecondOrder::off;
  const int omit_row = cfg.second_order == SecondOrder::omit_on_line ? (cfg.omit_line < 0 ? N2 / 2 : cfg.omit_line)
                                                                      : -1000000;
  auto kap = [&](int i, int j) { return g.kappa[g.cell(i, j)]; };
  auto add = [&](int i, int j, double c, const Vec8& v) {
    if (g.interior(i, j)) dq[g.cell(i, j)] += c * v;
  };

  // Transverse spreading of a fluctuation that entered cell (i, j) through an
  // edge normal to direction dir (0: x, 1: y).
  auto transverse = [&](int i, int j, int dir, const Vec8& phi) {
    if (phi.isZero(0.0)) return;
    const double a = dt / (kap(i, j) * (dir == 0 ? g.dxi1 : g.dxi2));
    if (dir == 0) {
      const int eb = g.yedge(i, j), et = g.yedge(i, j + 1);
      const TransverseResult rb = transverse_solve(s.ysolver(i, j), phi, false, g.y_ratio[eb]);
      const TransverseResult rt = transverse_solve(s.ysolver(i, j + 1), phi, true, g.y_ratio[et]);
      const double c = 0.5 * a * dt / g.dxi2;
      if (g.interior(i, j - 1)) add(i, j - 1, c / kap(i, j - 1), rb.down);
      if (g.interior(i, j)) add(i, j, c / kap(i, j), rb.up + rt.down);
      if (g.interior(i, j + 1)) add(i, j + 1, c / kap(i, j + 1), rt.up);
    } else {
      const int el = g.xedge(i, j), er = g.xedge(i + 1, j);
      const TransverseResult rl = transverse_solve(s.xsolver(i, j), phi, false, g.x_ratio[el]);
      const TransverseResult rr = transverse_solve(s.xsolver(i + 1, j), phi, true, g.x_ratio[er]);
      const double c = 0.5 * a * dt / g.dxi1;
      if (g.interior(i - 1, j)) add(i - 1, j, c / kap(i - 1, j), rl.down);
      if (g.interior(i, j)) add(i, j, c / kap(i, j), rl.up + rr.down);
      if (g.interior(i + 1, j)) add(i + 1, j, c / kap(i + 1, j), rr.up);
    }
  };

  // One grid line of edges normal to direction dir. Edge e lies between cells
  // e-1 and e along the line; line index l is the transverse cell index.
  auto sweep = [&](int dir, int l) {
    const int N = dir == 0 ? N1 : N2;
    const double dxi = dir == 0 ? g.dxi1 : g.dxi2;
    auto cell_of = [&](int e) { return dir == 0 ? std::make_pair(e, l) : std::make_pair(l, e); };
    auto solver = [&](int e) -> const EdgeSolver& { return dir == 0 ? s.xsolver(e, l) : s.ysolver(l, e); };
    auto ratio = [&](int e) { return dir == 0 ? g.x_ratio[g.xedge(e, l)] : g.y_ratio[g.yedge(l, e)]; };

    std::vector<Beta> beta(N + 3);
    for (int e = -1; e <= N + 1; ++e) {
      const EdgeSolver& es = solver(e);
      const auto [il, jl] = cell_of(e - 1);
      const auto [ir, jr] = cell_of(e);
      beta[e + 1] = es.Pr * s.q(ir, jr) - es.Pl * s.q(il, jl);
    }
    const bool line_interior = l >= 0 && l < (dir == 0 ? N2 : N1);
    for (int e = 0; e <= N; ++e) {
      const EdgeSolver& es = solver(e);
      const Beta& b = beta[e + 1];
      const double gam = ratio(e);
      Vec8 amdq = Vec8::Zero(), apdq = Vec8::Zero();
      for (int k = 0; k < es.count; ++k) {
        if (b(k) == 0.0) continue;
        const double sb = gam * es.speeds[k] * b(k);
        if (k < es.n_left)
          amdq += sb * es.R.col(k);
        else
          apdq += sb * es.R.col(k);
      }
      const auto [il, jl] = cell_of(e - 1);
      const auto [ir, jr] = cell_of(e);
      if (line_interior) {
        if (e - 1 >= 0) add(il, jl, -dt / (kap(il, jl) * dxi), amdq);
        if (e < N) add(ir, jr, -dt / (kap(ir, jr) * dxi), apdq);
      }
      if (cfg.transverse) {
        if (e - 1 >= 0) transverse(il, jl, dir, amdq);
        if (e < N) transverse(ir, jr, dir, apdq);
      }
      if (!second || !line_interior || es.kind != InterfaceKind::same) continue;
      if (dir == 1 && e == omit_row) continue;
      const Mat8& E = s.models()[es.mat_left].E;
      const double dtdx = 0.5 * (dt / (kap(il, jl) * dxi) + dt / (kap(ir, jr) * dxi));
      Vec8 F = Vec8::Zero();
      for (int k = 0; k < es.count; ++k) {
        if (b(k) == 0.0) continue;
        const double sp = gam * es.speeds[k];
        double phi = 1.0;
        if (cfg.limiter == Limiter::monotonized_centered) {
          const Vec8 w = b(k) * es.R.col(k);
          const int eu = sp < 0 ? e + 1 : e - 1;
          const EdgeSolver& up = solver(eu);
          const int ku = k < es.n_left ? k : up.n_left + (k - es.n_left);
          const Vec8 wu = beta[eu + 1](ku) * up.R.col(ku);
          const Vec8 Ew = E * w;
          const double ww = w.dot(Ew);
          phi = ww > 0.0 ? mc_limiter(wu.dot(Ew) / ww) : 0.0;
        }
        F += (0.5 * std::abs(sp) * (1.0 - dtdx * std::abs(sp)) * phi * b(k)) * es.R.col(k);
      }
      if (e - 1 >= 0) add(il, jl, -dt / (kap(il, jl) * dxi), F);
      if (e < N) add(ir, jr, dt / (kap(ir, jr) * dxi), F);
    }
  };

  for_lines(-1, N2, cfg.threads, [&](int j) { sweep(0, j); });
  for_lines(-1, N1, cfg.threads, [&](int i) { sweep(1, i); });

  for (int j = 0; j < N2; ++j)
    for (int i = 0; i < N1; ++i) s.q(i, j) += dq[g.cell(i, j)];
}

void viscous_cell(const MaterialModel& m, Vec8& q, double dt) {
  if (m.kind != MaterialKind::poroelastic || m.mat.poro.eta <= 0.0) return;
  const double c = std::cos(m.theta), sn = std::sin(m.theta);
  const double ratio = m.mat.poro.rho_f / m.scalars.rho;
  const double v1 = c * q(4) + sn * q(5), v3 = -sn * q(4) + c * q(5);
  const double q1 = c * q(6) + sn * q(7), q3 = -sn * q(6) + c * q(7);
  const double d1 = -std::expm1(-dt / m.scalars.tau_d1), d3 = -std::expm1(-dt / m.scalars.tau_d3);
  const double v1n = v1 + ratio * q1 * d1, v3n = v3 + ratio * q3 * d3;
  const double q1n = q1 * (1.0 - d1), q3n = q3 * (1.0 - d3);
  q(4) = c * v1n - sn * v3n;
  q(5) = sn * v1n + c * v3n;
  q(6) = c * q1n - sn * q3n;
  q(7) = sn * q1n + c * q3n;
}

void viscous_substep(SimulationState& s, double dt) {
  const MappedGrid& g = s.grid();
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) viscous_cell(s.model_at(i, j), s.q(i, j), dt);
}

void strang_step(SimulationState& s, double dt, const StepConfig& cfg) {
  viscous_substep(s, 0.5 * dt);
  fill_ghosts(s, cfg, s.time);
  if (cfg.boundary == Boundary::analytic_fill) {
    // Exact ghost data must see the same half source step as the interior,
    // otherwise the boundary mismatch is O(dt / tau_d) every step.
    const MappedGrid& g = s.grid();
    const int ng = MappedGrid::ng;
    for (int j = -ng; j < g.N2 + ng; ++j)
      for (int i = -ng; i < g.N1 + ng; ++i)
        if (!g.interior(i, j)) viscous_cell(s.model_at(i, j), s.q(i, j), 0.5 * dt);
  }
  hyperbolic_step(s, dt, cfg);
  viscous_substep(s, 0.5 * dt);
  s.time += dt;
  ++s.steps;
}

int run_until(SimulationState& s, double t_end, const StepConfig& cfg) {
  const double dt_max = compute_dt(s, cfg.cfl_target);
  int n = 0;
  while (t_end - s.time > 1e-12 * dt_max) {
    const double remaining = t_end - s.time;
    // Even step sizes rather than a short final step.
    const double nsteps = std::ceil(remaining / dt_max - 1e-12);
    const double dt = remaining / nsteps;
    strang_step(s, dt, cfg);
    ++n;
    for (int j = 0; j < s.grid().N2; ++j)
      for (int i = 0; i < s.grid().N1; ++i)
        if (!s.q(i, j).allFinite())
          throw SolverError("non-finite state in cell (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") at step " + std::to_string(s.steps) + ", t = " + std::to_string(s.time));
  }
  return n;
}

double fluid_slot_contamination(const SimulationState& s) {
  const MappedGrid& g = s.grid();
  double worst = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      if (s.model_at(i, j).kind != MaterialKind::fluid) continue;
      for (int k = 1; k <= 5; ++k) worst = std::max(worst, std::abs(s.q(i, j)(k)));
    }
  return worst;
}

}  // namespace pw
