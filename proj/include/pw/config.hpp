/// @file config.hpp
/// @brief Scenario configuration: YAML with unit-suffixed quantities.
#pragma once

#include "pw/analytic.hpp"
#include "pw/materials.hpp"
#include "pw/solver.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pw {

/// Message carries "line N" of the offending node when known.
struct ConfigError : std::runtime_error {
  int line = -1;
  ConfigError(const std::string& msg, int l = -1);
};

enum class Dimension { none, pressure, density, area, viscosity, frequency, angular_frequency, time, length, angle };

/// Parses "71.8 GPa", "600e-15 m^2", "10 kHz", "30 deg" or a bare number into SI.
double parse_quantity(const std::string& text, Dimension dim);

enum class ScenarioKind { plane_wave, reflection, splitting, scatterer, femur, zeta_sweep };
const char* to_string(ScenarioKind k);

struct WaveConfig {
  double omega = 1.0;      ///< rad/s ("frequency" in Hz is converted)
  double direction = 0.0;  ///< propagation angle from +x, rad
  WaveFamily family = WaveFamily::acoustic;
  bool viscous = false;
};

struct PlaneWaveConfig {
  std::string medium;
  double domain_wavelengths = 2.0;
  bool omit_line = false;
};

struct ReflectionConfig {
  std::string upper, lower;
  double domain_wavelengths = 2.0;
  /// Medium whose fastest wave along x sets the domain wavelength; default upper.
  std::string wavelength_medium;
  std::vector<double> angles;  ///< incidence below horizontal for rt-coefficients, rad
};

struct SplittingConfig {
  std::string medium;
  double viscosity_scale = 1.0;  ///< multiplies eta to force the stiff regime
  int N = 64;
  double domain_wavelengths = 2.0;
  std::vector<double> dt;        ///< explicit steps; otherwise dt_base halved `levels` times
  double dt_base = 0;
  int levels = 3;
  double end_time = 0;
  /// Differences are measured over the central square of this relative width.
  double core_fraction = 1.0;
};

struct ScattererConfig {
  std::string host, cylinder;
  double half_width = 0.1;
  double radius = 0.025;
  double frequency = 17.3e3;      ///< Hz, pulse carrier and cycle length
  double pulse_width = 0.01;      ///< Gaussian standard deviation of the envelope, m
  double pulse_center = -0.06;    ///< x of the envelope peak, m
  double cycles = 1.0;
};

struct FemurConfig {
  std::string bath, shell, core;
  double half_width = 0.04;
  double core_radius = 0.007;
  double outer_radius = 0.012;
  int N = 800;
  double frequency_width = 100e3;  ///< Hz; sigma_x = c / (2 pi width)
  double peak_pressure = 1.0;      ///< Pa
  double peak_offset = 0.015;      ///< distance of the peak from the outer surface, m
  double end_time = 18e-6;
  double output_interval = 6e-6;
};

struct ZetaSweepConfig {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<double> eta_d{0.0, 0.5, 1.0};
  int samples = 21;
  std::vector<double> normal_angles{0.0};
};

struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::plane_wave;
  std::vector<Material> materials;  ///< definition order; material IDs are indices
  WaveConfig wave;
  InterfaceParams interface;
  StepConfig solver;
  std::vector<int> grids;
  double periods = 1.25;
  std::string output_dir = "out";

  PlaneWaveConfig plane_wave;
  ReflectionConfig reflection;
  SplittingConfig splitting;
  ScattererConfig scatterer;
  FemurConfig femur;
  ZetaSweepConfig zeta_sweep;

  /// Index of a named material; throws ConfigError if undefined.
  int material_index(const std::string& name) const;
  const Material& material(const std::string& name) const { return materials[material_index(name)]; }
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& yaml_text);

/// Material presets addressable from configs by name.
std::optional<Material> preset_material(const std::string& preset);

}  // namespace pw
