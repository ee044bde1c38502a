/// @file analytic.hpp
/// @brief Time-harmonic plane waves in one medium and their reflection and
///        transmission at a flat interface.
#pragma once

#include "pw/riemann.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace pw {

struct AnalyticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using CVec8 = Eigen::Matrix<cplx, 8, 1>;

enum class WaveFamily { fast_P, S, slow_P, acoustic };
const char* to_string(WaveFamily f);

struct PlaneWaveSpec {
  double omega = 1.0;  ///< rad/s
  double px = 1.0, pz = 0.0;
  WaveFamily family = WaveFamily::acoustic;
  bool viscous = false;
};

struct PlaneWave {
  cplx k;    ///< wavenumber along p, Im(k) >= 0
  CVec8 V;   ///< V^H E V = 1
  double period = 0;
};

/// Solves -i w V + i k (p_x A + p_z B) V = D V for the requested family.
PlaneWave plane_wave(const MaterialModel& m, const PlaneWaveSpec& spec);

struct OutgoingMode {
  cplx kt, kn;   ///< tangential and normal wavenumbers
  CVec8 V;       ///< amplitude including its strength
  cplx beta;     ///< strength relative to the unit-energy mode shape
  bool propagating = false;
};

/**
 * @brief Incident plus reflected plus transmitted plane waves.
 *
 * The interface passes through (x0, z0) with unit tangent t; its normal is
 * n = (-t_z, t_x). The incident medium sits on the +n side.
 */
struct AnalyticField {
  double omega = 1.0;
  double x0 = 0, z0 = 0;
  double tx = 1, tz = 0;
  bool has_interface = false;
  double px = 1, pz = 0;
  cplx k_in;
  CVec8 V_in = CVec8::Zero();
  std::vector<OutgoingMode> reflected, transmitted;

  // Material data kept for diagnostics.
  Mat8 E_in = Mat8::Zero(), E_out = Mat8::Zero();
  Mat8 At_in = Mat8::Zero(), Bn_in = Mat8::Zero(), D_in = Mat8::Zero();
  Mat8 At_out = Mat8::Zero(), Bn_out = Mat8::Zero(), D_out = Mat8::Zero();
  InterfaceMatrices C;  ///< Cl on the transmitted side, Cr on the incident side
  bool out_is_poro = false, in_is_poro = false;

  double period() const;
  double nx() const { return -tz; }
  double nz() const { return tx; }

  /// Complex field; side chosen by the sign of (x - x0).n (>= 0: incident side).
  CVec8 evaluate_complex(double x, double z, double t) const;
  /// Complex traces on each side at a point of the interface.
  CVec8 trace(double xi, double t, bool incident_side) const;
  Vec8 evaluate(double x, double z, double t) const;

  /// max over modes of |(-i w + i(kt A_t + kn B_n) - D) V| / (w |V|_E).
  double dispersion_residual() const;
  /// max |kt_mode - kt_incident| / |kt_incident|.
  double tangential_mismatch() const;
  /// max over samples of |C_in Q_in - C_out Q_out| / |C_in V_in|.
  double interface_residual(int samples = 100) const;
  bool all_propagating() const;
  /// |F_out - F_in_total - P| / |F_incident|, period-averaged normal fluxes with
  /// P the power lost to imperfect hydraulic contact.
  double energy_flux_balance(int quad_points = 64) const;
};

/// Single plane wave through (x0, z0), no interface.
AnalyticField homogeneous_field(const MaterialModel& m, const PlaneWaveSpec& spec, double x0 = 0, double z0 = 0);

/// Incident wave in `upper` striking the horizontal interface z = z0 with `lower` below.
AnalyticField reflect_transmit(const MaterialModel& upper, const MaterialModel& lower, double eta_d, double zeta,
                               const PlaneWaveSpec& incident, double x0 = 0, double z0 = 0);

}  // namespace pw
