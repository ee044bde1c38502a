/// @file grid.hpp
/// @brief Logically rectangular mapped grids: mappings, capacities, edge
///        normals and length ratios, per-cell material IDs, ghost layers.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pw {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0, z = 0;
};

enum class MappingKind { identity, square_to_circle, concentric_annulus };
const char* to_string(MappingKind k);

/**
 * @brief Computational-to-physical mapping.
 *
 * The circle kinds are centered at the origin. With s = max(|xi1|, |xi2|):
 * s <= core_half maps onto a disk of radius r_inner through circular-arc grid
 * lines (arc radius r_inner*(0.9 + d^19 - 0.9 d^20), corner offset
 * r_inner*d/sqrt(2), d = s/core_half); core_half..shell_half maps onto
 * concentric circles from r_inner to r_outer; shell_half..blend_half blends
 * linearly from the circle of radius r_outer to the square of half-size
 * blend_half; outside that the mapping is the identity.
 */
struct GridMapping {
  MappingKind kind = MappingKind::identity;
  double x0 = 0, x1 = 1, z0 = 0, z1 = 1;  ///< computational domain
  double r_inner = 0, r_outer = 0;
  double core_half = 0, shell_half = 0, blend_half = 0;

  Point map(double xi1, double xi2) const;

  static GridMapping identity(double x0, double x1, double z0, double z1);
  /// Single circle of radius r1 in the square [-half_width, half_width]^2.
  static GridMapping square_to_circle(double half_width, double r1);
  /// Core disk of radius r_core, concentric shell out to r_outer.
  static GridMapping concentric_annulus(double half_width, double r_core, double r_outer);
};

/// Arc radius and corner offset of core grid line d, as multiples of the circle radius.
double core_arc_radius(double d);
double core_corner_offset(double d);

/// Material ID for a physical point.
using RegionFn = std::function<int(double x, double z)>;

/**
 * @brief Mapped grid with two ghost layers.
 *
 * Cell (i, j) for i in [-2, N1+2), j in [-2, N2+2). The x-edge (i, j) lies
 * between cells (i-1, j) and (i, j); the y-edge (i, j) between (i, j-1) and
 * (i, j). Normals point toward increasing index.
 */
struct MappedGrid {
  static constexpr int ng = 2;
  int N1 = 0, N2 = 0;
  double dxi1 = 0, dxi2 = 0;
  GridMapping mapping;

  std::vector<Point> vertices;  ///< (N1+2ng+1) x (N2+2ng+1)
  std::vector<double> kappa;    ///< per cell including ghosts
  std::vector<Point> centroid;  ///< vertex average
  std::vector<int> material;
  std::vector<double> xn_x, xn_z, x_ratio;  ///< x-edges, (N1+2ng+1) x (N2+2ng)
  std::vector<double> yn_x, yn_z, y_ratio;  ///< y-edges, (N1+2ng) x (N2+2ng+1)

  int cells_x() const { return N1 + 2 * ng; }
  int cells_z() const { return N2 + 2 * ng; }
  int cell(int i, int j) const { return (j + ng) * cells_x() + (i + ng); }
  int vertex(int i, int j) const { return (j + ng) * (cells_x() + 1) + (i + ng); }
  int xedge(int i, int j) const { return (j + ng) * (cells_x() + 1) + (i + ng); }
  int yedge(int i, int j) const { return (j + ng) * cells_x() + (i + ng); }
  bool interior(int i, int j) const { return i >= 0 && i < N1 && j >= 0 && j < N2; }

  /// Sum of interior physical cell areas.
  double total_area() const;
};

MappedGrid build_grid(const GridMapping& mapping, int N1, int N2, const RegionFn& region);

/// Shoelace area of a quadrilateral given counter-clockwise vertices.
double quad_area(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace pw
