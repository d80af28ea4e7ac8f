#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace fieldroad {

enum class GridMode { OneRoad, TwoRoad };
enum class RoadSide { Bottom, Top };

/// Node-centered uniform grid on (-ell, ell) x (0, L).
///
/// Node (i,j) sits at (x1, x2) = (-ell + i*h1, j*h2), i = 0..nx, j = 0..ny.
/// The bottom row j=0 (interior nodes) is the road; in two-road mode the top
/// row j=ny is a second road. Everything else on the boundary is Dirichlet,
/// corners included.
struct FieldGrid {
  double ell = 0.0;
  double L = 0.0;
  int nx = 0;
  int ny = 0;
  GridMode mode = GridMode::OneRoad;
  double h1 = 0.0;
  double h2 = 0.0;

  double x1(int i) const { return -ell + i * h1; }
  double x2(int j) const { return j * h2; }

  bool on_boundary(int i, int j) const {
    return i == 0 || i == nx || j == 0 || j == ny;
  }
  bool is_road(int i, int j, RoadSide side) const {
    const int row = (side == RoadSide::Bottom) ? 0 : ny;
    if (side == RoadSide::Top && mode != GridMode::TwoRoad) return false;
    return j == row && i > 0 && i < nx;
  }
  bool is_dirichlet(int i, int j) const {
    if (!on_boundary(i, j)) return false;
    return !is_road(i, j, RoadSide::Bottom) && !is_road(i, j, RoadSide::Top);
  }
  /// Unknowns are the non-Dirichlet nodes: i = 1..nx-1 and j = 0..ny-1
  /// (one road) or j = 0..ny (two roads).
  bool is_unknown(int i, int j) const {
    if (i <= 0 || i >= nx || j < 0) return false;
    const int jmax = (mode == GridMode::TwoRoad) ? ny : ny - 1;
    return j <= jmax;
  }
  int unknown_rows() const { return (mode == GridMode::TwoRoad) ? ny + 1 : ny; }
  int n_unknowns() const { return (nx - 1) * unknown_rows(); }
  int unknown_index(int i, int j) const { return j * (nx - 1) + (i - 1); }

  bool operator==(const FieldGrid&) const = default;
};

FieldGrid build_field_grid(double ell, double L, int nx, int ny,
                           GridMode mode = GridMode::OneRoad);

/// Nodal field function. Stores all (nx+1)*(ny+1) node values so that
/// restrictions of solutions to subdomains can carry their true boundary
/// values; functions built through the factories vanish on the Dirichlet
/// part.
struct FieldFunction {
  FieldGrid grid;
  std::vector<double> values;  // row-major: index = j*(nx+1) + i

  static FieldFunction zeros(const FieldGrid& g);
  static FieldFunction constant_on_unknowns(const FieldGrid& g, double c);

  double& at(int i, int j) { return values[j * (grid.nx + 1) + i]; }
  double at(int i, int j) const { return values[j * (grid.nx + 1) + i]; }

  std::vector<double> unknowns() const;
  void set_unknowns(std::span<const double> x);

  double sup() const;                       // max |value| over all nodes
  double min_value() const;                 // min over unknown nodes
  double max_value() const;                 // max over unknown nodes
};

/// Nodal road function on the bottom (or top) road; endpoints are pinned to
/// zero by the factories.
struct RoadFunction {
  FieldGrid grid;
  std::vector<double> values;  // size nx+1

  static RoadFunction zeros(const FieldGrid& g);
  static RoadFunction constant(const FieldGrid& g, double c);

  double sup() const;
  double min_value() const;  // over interior nodes
  double max_value() const;
};

RoadFunction trace_to_road(const FieldFunction& v, RoadSide side);

/// Restriction of v to the subdomain with half-width ell0, same spacings.
/// Requires exact node alignment: 2*ell0/h1 and (ell - ell0)/h1 integral.
/// The restricted function keeps the source values on its lateral boundary.
FieldFunction restrict_to(const FieldFunction& v, double ell0);

struct FieldNorms {
  double sup = 0.0;
  double L2 = 0.0;
  double H1_semi = 0.0;
};
struct RoadNorms {
  double sup = 0.0;
  double L2 = 0.0;
  double H1 = 0.0;
};

/// L2 by trapezoidal quadrature (half weights on boundary rows/columns),
/// H1 seminorm by forward-difference gradients times cell areas.
FieldNorms norms(const FieldFunction& v);
RoadNorms road_norms(const RoadFunction& u);

/// CSV: `x1,x2,value` (field) or `x1,value` (road), row-major,
/// 17 significant digits.
void write_field_csv(const FieldFunction& v, const std::filesystem::path& path);
void write_road_csv(const RoadFunction& u, const std::filesystem::path& path);
RoadFunction read_road_csv(const FieldGrid& g, const std::filesystem::path& path);

}  // namespace fieldroad
