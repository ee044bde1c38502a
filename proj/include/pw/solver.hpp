/// @file solver.hpp
/// @brief Unsplit wave-propagation update on mapped grids with two-sided
///        transverse fluctuations, limited second-order corrections and a
///        Strang-split exact viscous substep.
#pragma once

#include "pw/grid.hpp"
#include "pw/riemann.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pw {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Limiter { none, monotonized_centered };
enum class SecondOrder { everywhere, omit_at_material_interfaces, omit_on_line, off };
enum class Boundary { analytic_fill, extrapolate_zero_order };

struct StepConfig {
  double cfl_target = 0.9;
  Limiter limiter = Limiter::none;
  bool transverse = true;
  SecondOrder second_order = SecondOrder::omit_at_material_interfaces;
  int omit_line = -1;  ///< y-edge row for omit_on_line; -1 means N2/2
  Boundary boundary = Boundary::extrapolate_zero_order;
  int threads = 1;
};

struct InterfaceParams {
  double eta_d = 1.0;
  double zeta = 0.5;
};

/// Per material-pair interface parameters (unordered key), with a default.
class InterfaceTable {
 public:
  void set(int a, int b, InterfaceParams p) { table_[key(a, b)] = p; }
  void set_default(InterfaceParams p) { default_ = p; }
  InterfaceParams get(int a, int b) const {
    auto it = table_.find(key(a, b));
    return it == table_.end() ? default_ : it->second;
  }

 private:
  static std::pair<int, int> key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }
  std::map<std::pair<int, int>, InterfaceParams> table_;
  InterfaceParams default_;
};

/// Real state at a physical point and time.
using FieldFn = std::function<Vec8(double x, double z, double t)>;

/**
 * @brief Cell averages on a mapped grid plus the precomputed edge operators.
 *
 * Materials are indexed by the grid's material IDs.
 */
class SimulationState {
 public:
  SimulationState(const MappedGrid& grid, std::vector<MaterialModel> models, const InterfaceTable& interfaces);

  const MappedGrid& grid() const { return *grid_; }
  const std::vector<MaterialModel>& models() const { return models_; }
  const MaterialModel& model_at(int i, int j) const { return models_[grid_->material[grid_->cell(i, j)]]; }

  Vec8& q(int i, int j) { return q_[grid_->cell(i, j)]; }
  const Vec8& q(int i, int j) const { return q_[grid_->cell(i, j)]; }
  std::vector<Vec8>& data() { return q_; }
  const std::vector<Vec8>& data() const { return q_; }

  double time = 0;
  std::int64_t steps = 0;
  FieldFn boundary_field;  ///< required for analytic_fill

  const EdgeSolver& xsolver(int i, int j) const { return solvers_[xidx_[grid_->xedge(i, j)]]; }
  const EdgeSolver& ysolver(int i, int j) const { return solvers_[yidx_[grid_->yedge(i, j)]]; }
  std::size_t unique_solvers() const { return solvers_.size(); }
  std::uint64_t cache_hits() const { return cache_hits_; }
  std::uint64_t cache_misses() const { return cache_misses_; }

  /// Set every cell (ghosts included) from a field at time t.
  void initialize(const FieldFn& f, double t);

 private:
  const MappedGrid* grid_;
  std::vector<MaterialModel> models_;
  std::vector<Vec8> q_;
  std::vector<EdgeSolver> solvers_;
  std::vector<std::int32_t> xidx_, yidx_;
  std::uint64_t cache_hits_ = 0, cache_misses_ = 0;
};

double compute_dt(const SimulationState& s, double cfl_target);
void fill_ghosts(SimulationState& s, const StepConfig& cfg, double t);
void hyperbolic_step(SimulationState& s, double dt, const StepConfig& cfg);
void viscous_substep(SimulationState& s, double dt);
/// Half viscous, ghost fill, hyperbolic, half viscous; advances time. Analytic
/// ghost values also receive the first half viscous step.
void strang_step(SimulationState& s, double dt, const StepConfig& cfg);

/// Advance to t_end with steps no larger than the CFL limit; returns step count.
int run_until(SimulationState& s, double t_end, const StepConfig& cfg);

/// Exact viscous update of one cell's velocity block.
void viscous_cell(const MaterialModel& m, Vec8& q, double dt);

/// Largest |slot| among fluid-cell slots 1..5 over interior cells.
double fluid_slot_contamination(const SimulationState& s);

}  // namespace pw
