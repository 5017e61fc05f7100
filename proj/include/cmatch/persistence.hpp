#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "cmatch/bifiltration.hpp"

namespace cmatch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PointKind { Proper, Improper, Diagonal };

/// A point of a persistence diagram: (u,v) with u < v, (u,inf), or the
/// single diagonal element.
struct DiagramPoint {
  PointKind kind = PointKind::Diagonal;
  double u = 0.0;
  double v = 0.0;

  static DiagramPoint proper(double u, double v);
  static DiagramPoint improper(double u);
  static DiagramPoint diagonal();

  bool is_proper() const { return kind == PointKind::Proper; }
  bool is_improper() const { return kind == PointKind::Improper; }
  bool is_diagonal() const { return kind == PointKind::Diagonal; }

  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Points are kept sorted: improper before proper, then by (u, v).
struct PersistenceDiagram {
  int degree = 0;
  std::vector<DiagramPoint> points;

  std::size_t size() const { return points.size(); }
  int improper_count() const;
  void canonicalize();
};

/// Degree-k diagram of a slice filtration (Z/2 coefficients). Degree 0 uses
/// union-find; higher degrees use column reduction with clearing. Both give
/// the pairing of the standard reduction on the same total order.
PersistenceDiagram compute_diagram(const SliceFiltration& slice, int degree);

/// Degree-k diagram of the slice of `bif` at p.
PersistenceDiagram diagram_at(const SimplicialBifiltration& bif, ParamPoint p, int degree);

/// Diagrams in degrees 0..max_degree from one reduction pass.
std::vector<PersistenceDiagram> compute_diagrams(const SliceFiltration& slice, int max_degree);

/// Rank of H_k(K_u) -> H_k(K_v), K_t the subcomplex of simplices with value
/// <= t. Dense Gaussian elimination; independent of compute_diagram.
int persistent_betti(const SliceFiltration& slice, int degree, double u, double v);

/// Multiplicity of a point from the alternating sums of persistent Betti
/// numbers, with epsilon half the smallest gap among the filtration values
/// and the point's coordinates.
int multiplicity(const SliceFiltration& slice, int degree, const DiagramPoint& point);

/// Betti numbers of the full complex over Z/2.
std::vector<int> betti_numbers(const SimplicialBifiltration& bif);

/// CSV rows `degree,u,v` with `inf` for improper points, no header.
void write_diagram_rows(std::ostream& os, const PersistenceDiagram& d);

}  // namespace cmatch
