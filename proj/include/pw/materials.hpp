/// @file materials.hpp
/// @brief Poroelastic and fluid material records, derived Biot scalars and
///        the coefficient/energy blocks of the first-order system.
///
/// State ordering throughout: (p, tau_xx, tau_zz, tau_xz, v_x, v_z, q_x, q_z).
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pw {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

struct MaterialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** @brief Orthotropic (transversely isotropic in the 1-2 plane) Biot medium, SI units. */
struct PoroMaterial {
  double K_s = 0;      ///< grain bulk modulus [Pa]
  double rho_s = 0;    ///< grain density [kg/m^3]
  double c11 = 0, c12 = 0, c13 = 0, c33 = 0, c55 = 0;  ///< drained stiffness [Pa]
  double phi = 0;      ///< porosity
  double kappa1 = 0, kappa3 = 0;  ///< permeability [m^2]
  double T1 = 1, T3 = 1;          ///< tortuosity
  double K_f = 0;      ///< pore fluid bulk modulus [Pa]
  double rho_f = 0;    ///< pore fluid density [kg/m^3]
  double eta = 0;      ///< pore fluid viscosity [kg/(m s)]
  double theta = 0;    ///< principal axis 1 angle from global x [rad]
};

/** @brief Inviscid acoustic fluid. */
struct FluidMaterial {
  double K_f = 0;    ///< [Pa]
  double rho_f = 0;  ///< [kg/m^3]
  double sound_speed() const;
  double impedance() const;
};

struct Speeds {
  double fast_p = 0, shear = 0, slow_p = 0;
};

struct DerivedScalars {
  double rho = 0;
  double m1 = 0, m3 = 0;
  double Delta1 = 0, Delta3 = 0;
  double alpha1 = 0, alpha3 = 0;
  double M = 0;
  double K_bar = 0;
  double c11u = 0, c13u = 0, c33u = 0, c55u = 0;
  double tau_d1 = 0, tau_d3 = 0;  ///< +inf when eta == 0
  Speeds dir1, dir3;              ///< principal direction wave speeds [m/s]
};

enum class MaterialKind { poroelastic, fluid };
enum class Axes { principal, global };

/** @brief 4x4 blocks of A, B, D and E. */
struct CoefficientSet {
  Mat4 A_sv = Mat4::Zero(), A_vs = Mat4::Zero();
  Mat4 B_sv = Mat4::Zero(), B_vs = Mat4::Zero();
  Mat4 D_v = Mat4::Zero();
  Mat4 E_s = Mat4::Zero(), E_v = Mat4::Zero();
  Axes axes = Axes::principal;
  MaterialKind kind = MaterialKind::poroelastic;

  Mat8 A() const;
  Mat8 B() const;
  Mat8 D() const;
  Mat8 E() const;
  /// n_x A + n_z B
  Mat8 projected(double nx, double nz) const;
};

void validate(const PoroMaterial& m);
void validate(const FluidMaterial& m);

DerivedScalars derive_scalars(const PoroMaterial& m);
CoefficientSet poro_coefficients(const PoroMaterial& m);
CoefficientSet fluid_coefficients(const FluidMaterial& m);

/// Maps global-axis state components to principal-axis components for a
/// frame rotated by theta (block diagonal: stress block, velocity block).
Mat8 state_rotation(double theta);

/// Express principal-axis coefficients in global axes.
CoefficientSet rotate_to_global(const CoefficientSet& c, double theta);

/// Preset media from the reference property table.
namespace presets {
PoroMaterial sandstone();
PoroMaterial shale();
PoroMaterial cortical_bone();
PoroMaterial cancellous_bone();
FluidMaterial brine();
FluidMaterial water();
FluidMaterial pore_fluid(const PoroMaterial& m);
}  // namespace presets

/** @brief Either medium kind, tagged. */
struct Material {
  std::string name;
  MaterialKind kind = MaterialKind::fluid;
  PoroMaterial poro;
  FluidMaterial fluid;
  /// Upper frequency of validity for low-frequency Biot theory, Hz; user metadata, 0 if unknown.
  double biot_max_frequency = 0;

  static Material make_poro(std::string name, const PoroMaterial& p);
  static Material make_fluid(std::string name, const FluidMaterial& f);
};

}  // namespace pw
