#include "pw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pw {

const char* to_string(MappingKind k) {
  switch (k) {
    case MappingKind::identity: return "identity";
    case MappingKind::square_to_circle: return "square_to_circle";
    case MappingKind::concentric_annulus: return "concentric_annulus";
  }
  return "?";
}

double core_arc_radius(double d) { return 0.9 + std::pow(d, 19) - 0.9 * std::pow(d, 20); }
double core_corner_offset(double d) { return d / std::sqrt(2.0); }

GridMapping GridMapping::identity(double x0, double x1, double z0, double z1) {
  if (!(x1 > x0) || !(z1 > z0)) throw GridError("identity mapping: empty domain");
  GridMapping m;
  m.x0 = x0;
  m.x1 = x1;
  m.z0 = z0;
  m.z1 = z1;
  return m;
}

GridMapping GridMapping::square_to_circle(double half_width, double r1) {
  if (!(r1 > 0) || !(half_width > 2 * r1)) throw GridError("square_to_circle: need 0 < 2*r1 < half_width");
  GridMapping m;
  m.kind = MappingKind::square_to_circle;
  m.x0 = m.z0 = -half_width;
  m.x1 = m.z1 = half_width;
  m.r_inner = m.r_outer = r1;
  m.core_half = m.shell_half = half_width / 4;
  m.blend_half = half_width / 2;
  if (m.blend_half <= r1) throw GridError("square_to_circle: circle does not fit inside the blend square");
  return m;
}

GridMapping GridMapping::concentric_annulus(double half_width, double r_core, double r_outer) {
  if (!(r_core > 0) || !(r_outer > r_core)) throw GridError("concentric_annulus: need 0 < r_core < r_outer");
  GridMapping m;
  m.kind = MappingKind::concentric_annulus;
  m.x0 = m.z0 = -half_width;
  m.x1 = m.z1 = half_width;
  m.r_inner = r_core;
  m.r_outer = r_outer;
  m.core_half = half_width / 5;
  m.shell_half = 3 * half_width / 10;
  m.blend_half = half_width / 2;
  if (m.blend_half <= r_outer) throw GridError("concentric_annulus: shell does not fit inside the blend square");
  return m;
}

Point GridMapping::map(double xi1, double xi2) const {
  if (kind == MappingKind::identity) return {xi1, xi2};
  const double s = std::max(std::abs(xi1), std::abs(xi2));
  if (s >= blend_half) return {xi1, xi2};
  if (s == 0.0) return {0.0, 0.0};
  const bool xdom = std::abs(xi1) >= std::abs(xi2);
  const double u = (xdom ? xi2 : xi1) / s;  // in [-1, 1]
  // Canonical wedge: X along the dominant axis (positive), Y transverse.
  double X, Y;
  if (s <= core_half) {
    const double d = s / core_half;
    const double D = r_inner * core_corner_offset(d);
    const double R = r_inner * core_arc_radius(d);
    const double center = D - std::sqrt(R * R - D * D);
    Y = D * u;
    X = center + std::sqrt(R * R - Y * Y);
  } else {
    const double phi = std::asin(u / std::sqrt(2.0));
    if (s <= shell_half) {
      const double t = (s - core_half) / (shell_half - core_half);
      const double r = r_inner + t * (r_outer - r_inner);
      X = r * std::cos(phi);
      Y = r * std::sin(phi);
    } else {
      const double t = (s - shell_half) / (blend_half - shell_half);
      X = (1 - t) * r_outer * std::cos(phi) + t * blend_half;
      Y = (1 - t) * r_outer * std::sin(phi) + t * blend_half * u;
    }
  }
  if (xdom) return {std::copysign(X, xi1), Y};
  return {Y, std::copysign(X, xi2)};
}

double quad_area(const Point& a, const Point& b, const Point& c, const Point& d) {
  return 0.5 * ((a.x * b.z - b.x * a.z) + (b.x * c.z - c.x * b.z) + (c.x * d.z - d.x * c.z) +
                (d.x * a.z - a.x * d.z));
}

double MappedGrid::total_area() const {
  double sum = 0;
  for (int j = 0; j < N2; ++j)
    for (int i = 0; i < N1; ++i) sum += kappa[cell(i, j)] * dxi1 * dxi2;
  return sum;
}

MappedGrid build_grid(const GridMapping& mapping, int N1, int N2, const RegionFn& region) {
  if (N1 < 4 || N2 < 4) throw GridError("grid needs at least 4 cells per direction");
  MappedGrid g;
  g.N1 = N1;
  g.N2 = N2;
  g.mapping = mapping;
  g.dxi1 = (mapping.x1 - mapping.x0) / N1;
  g.dxi2 = (mapping.z1 - mapping.z0) / N2;
  const int ng = MappedGrid::ng;
  const int cx = g.cells_x(), cz = g.cells_z();

  g.vertices.resize(static_cast<size_t>(cx + 1) * (cz + 1));
  for (int j = -ng; j <= N2 + ng; ++j)
    for (int i = -ng; i <= N1 + ng; ++i)
      g.vertices[g.vertex(i, j)] = mapping.map(mapping.x0 + i * g.dxi1, mapping.z0 + j * g.dxi2);

  const size_t ncell = static_cast<size_t>(cx) * cz;
  g.kappa.resize(ncell);
  g.centroid.resize(ncell);
  g.material.assign(ncell, 0);
  for (int j = -ng; j < N2 + ng; ++j) {
    for (int i = -ng; i < N1 + ng; ++i) {
      const Point& a = g.vertices[g.vertex(i, j)];
      const Point& b = g.vertices[g.vertex(i + 1, j)];
      const Point& c = g.vertices[g.vertex(i + 1, j + 1)];
      const Point& d = g.vertices[g.vertex(i, j + 1)];
      const double area = quad_area(a, b, c, d);
      if (!(area > 0.0))
        throw GridError("degenerate cell (" + std::to_string(i) + ", " + std::to_string(j) +
                        "): area " + std::to_string(area));
      const int k = g.cell(i, j);
      g.kappa[k] = area / (g.dxi1 * g.dxi2);
      g.centroid[k] = {0.25 * (a.x + b.x + c.x + d.x), 0.25 * (a.z + b.z + c.z + d.z)};
    }
  }

  // Jacobian sign at interior cell centers.
  const double h1 = 1e-3 * g.dxi1, h2 = 1e-3 * g.dxi2;
  for (int j = 0; j < N2; ++j) {
    for (int i = 0; i < N1; ++i) {
      const double xi1 = mapping.x0 + (i + 0.5) * g.dxi1, xi2 = mapping.z0 + (j + 0.5) * g.dxi2;
      const Point pe = mapping.map(xi1 + h1, xi2), pw = mapping.map(xi1 - h1, xi2);
      const Point pn = mapping.map(xi1, xi2 + h2), ps = mapping.map(xi1, xi2 - h2);
      const double det = (pe.x - pw.x) * (pn.z - ps.z) - (pn.x - ps.x) * (pe.z - pw.z);
      if (!(det > 0.0))
        throw GridError("non-positive mapping Jacobian at cell (" + std::to_string(i) + ", " + std::to_string(j) +
                        ")");
    }
  }

  for (int j = 0; j < N2; ++j)
    for (int i = 0; i < N1; ++i) {
      const Point& p = g.centroid[g.cell(i, j)];
      g.material[g.cell(i, j)] = region(p.x, p.z);
    }
  for (int j = -ng; j < N2 + ng; ++j)
    for (int i = -ng; i < N1 + ng; ++i)
      if (!g.interior(i, j))
        g.material[g.cell(i, j)] = g.material[g.cell(std::clamp(i, 0, N1 - 1), std::clamp(j, 0, N2 - 1))];

  const size_t nxe = static_cast<size_t>(cx + 1) * cz;
  g.xn_x.resize(nxe);
  g.xn_z.resize(nxe);
  g.x_ratio.resize(nxe);
  for (int j = -ng; j < N2 + ng; ++j)
    for (int i = -ng; i <= N1 + ng; ++i) {
      const Point& a = g.vertices[g.vertex(i, j)];
      const Point& b = g.vertices[g.vertex(i, j + 1)];
      const double tx = b.x - a.x, tz = b.z - a.z, len = std::hypot(tx, tz);
      const int e = g.xedge(i, j);
      g.xn_x[e] = tz / len;
      g.xn_z[e] = -tx / len;
      g.x_ratio[e] = len / g.dxi2;
    }
  const size_t nye = static_cast<size_t>(cx) * (cz + 1);
  g.yn_x.resize(nye);
  g.yn_z.resize(nye);
  g.y_ratio.resize(nye);
  for (int j = -ng; j <= N2 + ng; ++j)
    for (int i = -ng; i < N1 + ng; ++i) {
      const Point& a = g.vertices[g.vertex(i, j)];
      const Point& b = g.vertices[g.vertex(i + 1, j)];
      const double tx = b.x - a.x, tz = b.z - a.z, len = std::hypot(tx, tz);
      const int e = g.yedge(i, j);
      g.yn_x[e] = -tz / len;
      g.yn_z[e] = tx / len;
      g.y_ratio[e] = len / g.dxi1;
    }
  return g;
}

}  // namespace pw
