/// @file verify.hpp
/// @brief Grid energy-norm errors, log-log rate fits and the convergence driver.
#pragma once

#include "pw/analytic.hpp"
#include "pw/solver.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pw {

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Weighting { uniform, area };

struct ErrorReport {
  std::string scenario;
  int N1 = 0, N2 = 0;
  double time = 0;
  double norm1 = 0;
  double norm_max = 0;
};

/// Per-cell energy norms of (q - truth(centroid, s.time)); 1-norm weighted by 1 or kappa.
ErrorReport grid_error(const SimulationState& s, const FieldFn& truth, Weighting w = Weighting::uniform);
ErrorReport grid_error(const SimulationState& s, const AnalyticField& field, Weighting w = Weighting::uniform);

struct ConvergenceFit {
  double rate = 0;       ///< minus the slope of log(err) against log(N)
  double r_squared = 0;
  std::vector<std::pair<int, double>> points;
};

ConvergenceFit fit_rate(const std::vector<std::pair<int, double>>& errors);

/// One grid instance of a convergence case. The state refers to `grid`, so keep it pinned.
struct CaseInstance {
  MappedGrid grid;
  std::vector<MaterialModel> models;
  InterfaceTable interfaces;
  AnalyticField field;
};

struct ConvergenceCase {
  std::string id;
  std::function<std::unique_ptr<CaseInstance>(int N)> build;
  StepConfig cfg;
  double periods = 1.25;
};

struct ConvergenceResult {
  std::string id;
  std::vector<ErrorReport> reports;
  ConvergenceFit fit1, fit_max;
};

/// Initialize from the field at centroids, run with analytic ghost fill, measure, fit.
ConvergenceResult run_convergence(const ConvergenceCase& c, const std::vector<int>& grids);

/// Header plus one row per grid: scenario,N1,N2,norm1,normMax,rate1,r2_1,rateMax,r2_max.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceResult>& results);

/// Area-weighted average of a fine state onto a grid coarser by an integer factor.
std::vector<Vec8> restrict_to_coarse(const SimulationState& fine, const MappedGrid& coarse);

/// Area-weighted energy 1-norm of the difference of two interior cell arrays on `g`,
/// optionally restricted to cells (i, j) accepted by `include`.
double area_weighted_difference(const MappedGrid& g, const std::vector<MaterialModel>& models,
                                const std::vector<Vec8>& a, const std::vector<Vec8>& b,
                                const std::function<bool(int, int)>& include = {});

}  // namespace pw
