#include "pw/verify.hpp"

#include <cmath>
#include <ostream>

namespace pw {

namespace {

double energy_norm(const Vec8& d, const Mat8& E) { return std::sqrt(std::max(0.0, d.dot(E * d))); }

}  // namespace

ErrorReport grid_error(const SimulationState& s, const FieldFn& truth, Weighting w) {
  const MappedGrid& g = s.grid();
  ErrorReport r;
  r.N1 = g.N1;
  r.N2 = g.N2;
  r.time = s.time;
  double sum = 0, wsum = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      const int c = g.cell(i, j);
      const Point& p = g.centroid[c];
      const double e = energy_norm(s.q(i, j) - truth(p.x, p.z, s.time), s.model_at(i, j).E);
      const double wt = w == Weighting::area ? g.kappa[c] : 1.0;
      sum += wt * e;
      wsum += wt;
      r.norm_max = std::max(r.norm_max, e);
    }
  r.norm1 = sum / wsum;
  return r;
}

ErrorReport grid_error(const SimulationState& s, const AnalyticField& field, Weighting w) {
  return grid_error(s, [&](double x, double z, double t) { return field.evaluate(x, z, t); }, w);
}

ConvergenceFit fit_rate(const std::vector<std::pair<int, double>>& errors) {
  if (errors.size() < 3) throw VerifyError("rate fit needs at least three grids");
  const double n = static_cast<double>(errors.size());
  double sx = 0, sy = 0;
  for (const auto& [N, e] : errors) {
    if (!(e > 0) || !std::isfinite(e)) throw VerifyError("rate fit needs positive finite errors");
    if (N <= 0) throw VerifyError("rate fit needs positive grid sizes");
    sx += std::log(N);
    sy += std::log(e);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [N, e] : errors) {
    const double dx = std::log(N) - mx, dy = std::log(e) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw VerifyError("rate fit needs distinct grid sizes");
  ConvergenceFit f;
  const double slope = sxy / sxx;
  f.rate = -slope;
  f.r_squared = syy == 0 ? 1.0 : std::min(1.0, std::max(0.0, sxy * sxy / (sxx * syy)));
  f.points = errors;
  return f;
}

ConvergenceResult run_convergence(const ConvergenceCase& c, const std::vector<int>& grids) {
  ConvergenceResult res;
  res.id = c.id;
  std::vector<std::pair<int, double>> e1, emax;
  for (int N : grids) {
    const std::unique_ptr<CaseInstance> inst = c.build(N);
    SimulationState s(inst->grid, inst->models, inst->interfaces);
    const AnalyticField& f = inst->field;
    FieldFn fn = [&f](double x, double z, double t) { return f.evaluate(x, z, t); };
    s.boundary_field = fn;
    s.initialize(fn, 0.0);
    StepConfig cfg = c.cfg;
    cfg.boundary = Boundary::analytic_fill;
    run_until(s, c.periods * f.period(), cfg);
    ErrorReport r = grid_error(s, fn);
    r.scenario = c.id;
    res.reports.push_back(r);
    e1.emplace_back(N, r.norm1);
    emax.emplace_back(N, r.norm_max);
  }
  if (grids.size() >= 3) {
    res.fit1 = fit_rate(e1);
    res.fit_max = fit_rate(emax);
  }
  return res;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceResult>& results) {
  os << "scenario,N1,N2,norm1,normMax,rate1,r2_1,rateMax,r2_max\n";
  os.precision(10);
  for (const auto& r : results)
    for (const auto& e : r.reports)
      os << r.id << ',' << e.N1 << ',' << e.N2 << ',' << e.norm1 << ',' << e.norm_max << ',' << r.fit1.rate << ','
         << r.fit1.r_squared << ',' << r.fit_max.rate << ',' << r.fit_max.r_squared << '\n';
}

std::vector<Vec8> restrict_to_coarse(const SimulationState& fine, const MappedGrid& coarse) {
  const MappedGrid& gf = fine.grid();
  if (gf.N1 % coarse.N1 != 0 || gf.N2 % coarse.N2 != 0 || gf.N1 / coarse.N1 != gf.N2 / coarse.N2)
    throw VerifyError("fine grid is not an integer refinement of the coarse grid");
  const int r = gf.N1 / coarse.N1;
  std::vector<Vec8> out(static_cast<size_t>(coarse.N1) * coarse.N2, Vec8::Zero());
  for (int J = 0; J < coarse.N2; ++J)
    for (int I = 0; I < coarse.N1; ++I) {
      Vec8 acc = Vec8::Zero();
      double area = 0;
      for (int b = 0; b < r; ++b)
        for (int a = 0; a < r; ++a) {
          const int i = I * r + a, j = J * r + b;
          const double k = gf.kappa[gf.cell(i, j)];
          acc += k * fine.q(i, j);
          area += k;
        }
      out[static_cast<size_t>(J) * coarse.N1 + I] = acc / area;
    }
  return out;
}

double area_weighted_difference(const MappedGrid& g, const std::vector<MaterialModel>& models,
                                const std::vector<Vec8>& a, const std::vector<Vec8>& b,
                                const std::function<bool(int, int)>& include) {
  const size_t n = static_cast<size_t>(g.N1) * g.N2;
  if (a.size() != n || b.size() != n) throw VerifyError("cell arrays do not match the grid");
  double sum = 0, wsum = 0;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      if (include && !include(i, j)) continue;
      const size_t k = static_cast<size_t>(j) * g.N1 + i;
      const int c = g.cell(i, j);
      sum += g.kappa[c] * energy_norm(a[k] - b[k], models[g.material[c]].E);
      wsum += g.kappa[c];
    }
  if (wsum == 0) throw VerifyError("no cells selected");
  return sum / wsum;
}

}  // namespace pw
