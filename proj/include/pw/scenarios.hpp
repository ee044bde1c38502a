/// @file scenarios.hpp
/// @brief Built-in scenarios driven by a ScenarioConfig.
#pragma once

#include "pw/config.hpp"
#include "pw/verify.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pw {

/// Models for every configured material (ID = definition index). With
/// `inviscid`, poroelastic viscosity is dropped.
std::vector<MaterialModel> build_models(const ScenarioConfig& c, bool inviscid);

PlaneWaveSpec wave_spec(const ScenarioConfig& c);

/// Speed setting the domain size: the family speed along principal direction 1
/// (fluids: sound speed).
double reference_speed(const Material& m, WaveFamily family);

/// Homogeneous plane wave, optionally with the correction omitted on the central y-edge row.
ConvergenceCase plane_wave_case(const ScenarioConfig& c);
/// Horizontal interface through the domain center, incident wave from above.
ConvergenceCase reflection_case(const ScenarioConfig& c);

struct RtRow {
  double angle = 0;  ///< incidence below horizontal, rad
  std::string side;  ///< "reflected" or "transmitted"
  int index = 0;
  cplx kn, beta;
  bool propagating = false;
};
std::vector<RtRow> rt_coefficients(const ScenarioConfig& c);
void write_rt_csv(std::ostream& os, const std::vector<RtRow>& rows);

struct ZetaRow {
  std::string left, right;
  double eta_d = 0, zeta = 0, normal_angle = 0;
  double cond = 0;
};
std::vector<ZetaRow> zeta_sweep(const ScenarioConfig& c);
void write_zeta_csv(std::ostream& os, const std::vector<ZetaRow>& rows);

struct SplittingResult {
  double tau_min = 0;            ///< smallest dissipation time among cells
  std::vector<double> dt;
  std::vector<double> diffs;     ///< area-weighted energy 1-norm of successive differences
  std::vector<double> rates;     ///< log2 of successive difference ratios
};
SplittingResult splitting_study(const ScenarioConfig& c);

struct ScattererResult {
  std::vector<int> grids;
  std::vector<double> diffs;      ///< |Q_N - R Q_2N| on grid N, area-weighted
  std::vector<double> rates;      ///< log2 of successive ratios
  double contamination = 0;       ///< worst fluid-slot magnitude over all runs
  double peak_pressure = 0;       ///< worst |p| over all runs, for scale
  double end_time = 0;
};
/// Pulse scattering off the cylinder; grids must double successively.
ScattererResult scatterer_study(const ScenarioConfig& c, const std::vector<int>& grids, const std::string& out_dir = "");
void write_scatterer_csv(std::ostream& os, const ScattererResult& r);

struct FemurResult {
  std::vector<std::string> snapshots;
  double time = 0;
  long steps = 0;
  double contamination = 0;
  double peak_pressure = 0;  ///< over all cells, for scale
  double max_p_core = 0, max_p_shell = 0;
  double max_q_core = 0, max_q_shell = 0;
};
/// `N_override` > 0 replaces the configured grid size.
FemurResult run_femur(const ScenarioConfig& c, const std::string& out_dir, int N_override = 0, int threads = 0);

/// Acoustic pulse profile used by the scatterer and femur scenarios.
Vec8 acoustic_pulse(const MaterialModel& fluid, double x, double center, double sigma, double carrier_k,
                    double amplitude);

/// Geometry for the configured scenario at grid size N (plane/reflection: identity).
MappedGrid scenario_grid(const ScenarioConfig& c, int N);

}  // namespace pw
