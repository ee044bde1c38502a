/// @file riemann.hpp
/// @brief Edge eigensystems, same-material and interface Riemann solves,
///        transverse decomposition of fluctuations.
#pragma once

#include "pw/linalg.hpp"
#include "pw/materials.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pw {

struct RiemannError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything about one material that the Riemann solver needs, precomputed once.
struct MaterialModel {
  int id = -1;
  Material mat;
  MaterialKind kind = MaterialKind::fluid;
  double theta = 0;
  CoefficientSet principal;
  CoefficientSet global;
  Mat8 E = Mat8::Zero();        ///< global axes
  Mat8 to_principal = Mat8::Identity();
  Mat8 to_global = Mat8::Identity();
  DerivedScalars scalars;       ///< poroelastic only
  Mat4 Linv = Mat4::Identity(); ///< inverse of the upper-triangular factor of E_v
  Mat4 M411 = Mat4::Zero(), M413 = Mat4::Zero(), M433 = Mat4::Zero();
  double Zf = 0;                ///< fluid impedance (pore fluid for poroelastic)
  double sound_speed = 0;       ///< fluid kind only
};

MaterialModel make_model(const Material& m, int id);

enum class InterfaceKind { same, fluid_fluid, poro_poro, poro_fluid, fluid_poro };
const char* to_string(InterfaceKind k);

struct EdgeContext {
  double nx = 1, nz = 0;
  const MaterialModel* left = nullptr;
  const MaterialModel* right = nullptr;
  InterfaceKind kind = InterfaceKind::same;
  double eta_d = 1.0;
  double zeta = 0.5;
};

/// Classifies the pair and validates the normal and parameters.
EdgeContext make_context(const MaterialModel& left, const MaterialModel& right, double nx, double nz,
                         double eta_d = 1.0, double zeta = 0.5);

constexpr int kMaxWaves = 6;
using WaveMat = Eigen::Matrix<double, 8, kMaxWaves>;
using ProjMat = Eigen::Matrix<double, kMaxWaves, 8>;

/** @brief Propagating waves of n_x A + n_z B for one material, ascending speed. */
struct WaveSet {
  int count = 0;
  std::array<double, kMaxWaves> speeds{};
  WaveMat vectors = WaveMat::Zero();
  int material = -1;
  double nx = 0, nz = 0;
};

WaveSet edge_eigensystem(const MaterialModel& m, double nx, double nz);

enum class Side { left, right };
WaveSet edge_eigensystem(const EdgeContext& ctx, Side side);

/// Single-entry most-recent eigensystem cache with hit/miss counters.
class EigenCache {
 public:
  const WaveSet& lookup(const MaterialModel& m, double nx, double nz);
  /// The cached entry if it matches bit-exactly, else nullptr.
  const WaveSet* peek(int material, double nx, double nz) const;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  void reset_counters() { hits_ = misses_ = 0; }

 private:
  bool valid_ = false;
  int material_ = -1;
  std::uint64_t nx_bits_ = 0, nz_bits_ = 0;
  WaveSet entry_;
  std::uint64_t hits_ = 0, misses_ = 0;
};

struct RiemannSolution {
  Vec8 left_fluctuation = Vec8::Zero();
  Vec8 right_fluctuation = Vec8::Zero();
  int count = 0;
  std::array<double, kMaxWaves> speeds{};
  std::array<double, kMaxWaves> strengths{};
  WaveMat vectors = WaveMat::Zero();
  Vec8 left_limit = Vec8::Zero();
  Vec8 right_limit = Vec8::Zero();
};

RiemannSolution solve_same_material(const WaveSet& ws, const Mat8& E, const Vec8& Ql, const Vec8& Qr);

using CondMat = Eigen::Matrix<double, Eigen::Dynamic, 8, 0, kMaxWaves, 8>;

struct InterfaceMatrices {
  CondMat Cl, Cr;
};

InterfaceMatrices interface_matrices(const EdgeContext& ctx);

/// Square matrix [C_l R_l | C_r R_r] of the interface strength system.
SmallMat interface_system(const EdgeContext& ctx, const WaveSet& ws_left, const WaveSet& ws_right);

RiemannSolution solve_interface(const EdgeContext& ctx, const WaveSet& ws_left, const WaveSet& ws_right,
                                const Vec8& Ql, const Vec8& Qr);

/**
 * @brief Precomputed linear Riemann operator for one edge.
 *
 * Strengths are beta = Pr*Qr - Pl*Ql; waves [0, n_left) have negative speed
 * and belong to the left material, the rest belong to the right material.
 */
struct EdgeSolver {
  int count = 0;
  int n_left = 0;
  InterfaceKind kind = InterfaceKind::same;
  int mat_left = -1, mat_right = -1;
  std::array<double, kMaxWaves> speeds{};
  WaveMat R = WaveMat::Zero();
  ProjMat Pl = ProjMat::Zero(), Pr = ProjMat::Zero();

  static EdgeSolver build(const EdgeContext& ctx, EigenCache* cache = nullptr);

  RiemannSolution solve(const Vec8& Ql, const Vec8& Qr) const;
  double max_speed() const;
};

struct TransverseResult {
  Vec8 up = Vec8::Zero();    ///< into the upper (right) cell
  Vec8 down = Vec8::Zero();  ///< into the lower (left) cell
};

/// Decompose a fluctuation that perturbs the lower (from_lower = true) or
/// upper cell of a transverse edge; outputs scaled by the edge length ratio.
TransverseResult transverse_solve(const EdgeSolver& es, const Vec8& fluctuation, bool from_lower, double ratio);

}  // namespace pw
