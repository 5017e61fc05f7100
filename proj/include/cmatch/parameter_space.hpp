#pragma once

#include <utility>
#include <vector>

#include "cmatch/bifiltration.hpp"
#include "cmatch/persistence.hpp"

namespace cmatch {

/// The line r_(a,b): t -> t (a, 1-a) + (b, -b).
struct AdmissibleLine {
  ParamPoint param;

  explicit AdmissibleLine(ParamPoint p);
  std::pair<double, double> direction() const { return {param.a, 1.0 - param.a}; }
  std::pair<double, double> basepoint() const { return {param.b, -param.b}; }
  std::pair<double, double> point_at(double t) const;
  /// Normalized slice value min{a,1-a} * t of the plane point at parameter t.
  double normalized_value(double t) const;
};

/// Polyline in the strip, parameterized by arc-length fraction s in [0,1].
struct ParamPath {
  std::vector<ParamPoint> waypoints;

  ParamPath() = default;
  explicit ParamPath(std::vector<ParamPoint> pts);

  double length() const;
  ParamPoint at(double s) const;
  ParamPoint front() const { return waypoints.front(); }
  ParamPoint back() const { return waypoints.back(); }
  bool closed() const { return waypoints.front() == waypoints.back(); }
  ParamPath reversed() const;
  /// This path followed by `next`; next must start where this one ends.
  ParamPath then(const ParamPath& next) const;
  /// Fractions s of the interior waypoints.
  std::vector<double> waypoint_fractions() const;
};

struct Rect {
  double a0 = 0.1, a1 = 0.9, b0 = -1.0, b1 = 1.0;

  bool contains(ParamPoint p) const { return p.a >= a0 && p.a <= a1 && p.b >= b0 && p.b <= b1; }
  bool valid() const { return 0.0 < a0 && a0 < a1 && a1 < 1.0 && b0 < b1; }
};

struct Disk {
  ParamPoint center;
  double radius = 0.0;
};

/// A rectangle minus closed disks, with separation constant c.
struct ParameterRegion {
  Rect rect;
  std::vector<Disk> excluded;
  double separation = 0.0;

  /// Throws InputError unless the rectangle is inside the strip, c > 0 and
  /// the disks are disjoint from each other and from the rectangle boundary.
  void validate() const;
  bool contains(ParamPoint p) const;
  /// True if the closed segment pq lies in the region.
  bool contains_segment(ParamPoint p, ParamPoint q) const;
};

bool contains(const ParameterRegion& region, ParamPoint p);

/// Distance from the closed segment pq to the point c.
double segment_point_distance(ParamPoint p, ParamPoint q, ParamPoint c);

/// Minimum of d over pairs of distinct points and over point-to-diagonal
/// distances; +inf if the diagram has at most one point.
double min_diagram_gap(const PersistenceDiagram& d);
double min_diagram_gap(const SimplicialBifiltration& bif, ParamPoint p, int degree);

/// Minimum of d over pairs of distinct points only. Points drifting to the
/// diagonal do not lower it, so it singles out collisions.
double collision_gap(const PersistenceDiagram& d);

struct SingularPairReport {
  ParamPoint location;
  int degree = 0;
  double min_gap_at_location = 0.0;
  double refinement_radius = 0.0;
};

struct ScanOptions {
  /// Local minima below this fraction of the median gap are flagged.
  double threshold_fraction = 0.1;
  int threads = 0;
};

/// Samples collision_gap on a grid_n x grid_n lattice over `scan`, flags
/// low local minima, merges flagged cells that touch, and refines each
/// cluster by nested 5 x 5 grids with halving radius until the radius drops
/// below refine_tol.
std::vector<SingularPairReport> detect_singular_pairs(const SimplicialBifiltration& bif, int degree, const Rect& scan,
                                                      int grid_n, double refine_tol, const ScanOptions& opt = {});

/// Winding number of a closed polyline around c (c must not lie on it).
int winding_number(const ParamPath& loop, ParamPoint c);

/// One loop per excluded disk, based at `basepoint`: a lattice path to a
/// square around the disk, once around the square counterclockwise, and back.
/// Each loop winds once around its own disk and zero times around the others.
std::vector<ParamPath> generator_loops(const ParameterRegion& region, ParamPoint basepoint);

/// A quarter of the smallest min_diagram_gap over the given sample points,
/// for each bifiltration in `bifs`.
double choose_separation(const std::vector<const SimplicialBifiltration*>& bifs, int degree,
                         const std::vector<ParamPoint>& sample, int threads = 0);

/// grid_n x grid_n lattice points of `rect` that lie in the region.
std::vector<ParamPoint> region_lattice(const ParameterRegion& region, int grid_n);

}  // namespace cmatch
