#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmatch/examples.hpp"
#include "cmatch/parameter_space.hpp"
#include "cmatch/persistence.hpp"

namespace cmatch {

enum class ContourKind { Arc, Vertical, Horizontal };

/// A proper contour (circular arc) or an improper one (axis-parallel
/// half-line). Arcs are parameterized by angle t in [t0, t1]; half-lines by
/// the distance t >= 0 from their anchor.
struct Contour {
  ContourKind kind = ContourKind::Arc;
  double cx = 0.0, cy = 0.0;  // circle center, or half-line anchor
  double radius = 0.0;
  double t0 = 0.0, t1 = 0.0;  // angle interval of an arc
  std::string provenance;

  std::pair<double, double> point_at(double t) const;
  bool proper() const { return kind == ContourKind::Arc; }
};

struct ArcPiece {
  int contour = 0;
  double t0 = 0.0, t1 = 0.0;  // t1 may be +inf on half-lines
};

/// Connected component of the grid minus its double points, with the
/// homology degree and the sign (+1 birth, -1 death) of its event.
struct ContourArc {
  std::string name;
  int degree = 0;
  int sign = 1;
  std::vector<ArcPiece> pieces;
};

struct GridPoint {
  double x = 0.0, y = 0.0;
  std::string name;
  /// Common degree of the arcs ending here, or -1 if they differ.
  int degree = -1;
};

struct ExtendedParetoGrid {
  std::string name;
  std::vector<Contour> contours;
  std::vector<ContourArc> arcs;
  std::vector<GridPoint> double_points;
  /// Pairs of arcs carrying the birth and death of one diagram point and
  /// sharing an endpoint.
  std::vector<std::pair<int, int>> paired_arcs;

  /// Arc containing parameter t of contour c, or -1.
  int arc_of(int contour, double t) const;
  int arc_index(const std::string& name) const;
};

/// Analytic grid of the torus or of the two spheres.
ExtendedParetoGrid builtin_grid(ExampleId id, const ExampleSpec& spec = {});

/// Every contour translated by (dx, dy); for negative controls.
ExtendedParetoGrid translated_grid(const ExtendedParetoGrid& grid, double dx, double dy);

struct Intersection {
  double x = 0.0, y = 0.0;
  double t = 0.0;      // line parameter
  double value = 0.0;  // normalized slice value min{a,1-a} * t
  std::vector<int> contours;
  std::vector<int> arcs;
  bool tangent = false;
};

/// Intersections of r_(a,b) with every contour, sorted by t. Hits closer
/// than 1e-9 are merged into one entry listing all contours.
std::vector<Intersection> line_grid_intersections(const ExtendedParetoGrid& grid, const AdmissibleLine& line);

struct PositionReport {
  bool passes = true;
  std::size_t checked = 0;
  std::vector<double> unmatched;
  /// Largest distance from a matched coordinate to its nearest intersection value.
  double max_error = 0.0;
};

/// Checks that every finite coordinate of the degree-k diagram at p equals
/// the normalized value of some intersection within tol.
PositionReport position_check(const ExtendedParetoGrid& grid, const PersistenceDiagram& dgm, ParamPoint p, double tol);
PositionReport position_check(const ExtendedParetoGrid& grid, const SimplicialBifiltration& bif, int degree,
                              ParamPoint p, double tol);

struct ArcPairing {
  DiagramPoint point;
  int birth_arc = -1;
  int death_arc = -1;  // -1 for improper points
  bool ambiguous = false;
  bool unmatched = false;
};

/// Assigns the birth and death coordinates of every diagram point to the
/// arc met at the nearest intersection value, preferring arcs whose label
/// (degree, sign) fits the event.
std::vector<ArcPairing> pair_arcs(const ExtendedParetoGrid& grid, const SimplicialBifiltration& bif, int degree,
                                  ParamPoint p, double tol);

/// Common endpoints of paired arcs.
std::vector<GridPoint> annihilation_catalog(const ExtendedParetoGrid& grid);

/// Parameters of the admissible lines through two double points.
std::vector<ParamPoint> double_point_lines(const ExtendedParetoGrid& grid);

}  // namespace cmatch
