#pragma once

#include <utility>
#include <vector>

#include "cmatch/diagram_metric.hpp"
#include "cmatch/parameter_space.hpp"
#include "cmatch/persistence.hpp"

namespace cmatch {

struct TransportConfig {
  /// Largest step, as a fraction of the path length.
  double initial_step = 0.05;
  /// Smallest step fraction before giving up on an ambiguous continuation.
  double min_step = 1e-7;
  /// A step is accepted when every point moves less than safety_factor * c.
  double safety_factor = 0.45;
  /// Separation constant c of the region.
  double separation = 0.0;
  /// Seed the first step from the a priori diagram-motion bound.
  bool seed_from_bound = true;
  /// Tolerance in d for locating a start point in the start diagram.
  double membership_tol = 1e-9;

  void validate() const;
};

/// Factor K with d_B(Dgm(f*_(a,b)), Dgm(f*_(a',b'))) <= eps * K whenever
/// |a - a'|, |b - b'| <= eps < min(a, 1 - a); `sup_f` is the sup-norm of f.
double step_bound_constant(double sup_f, ParamPoint p, double eps);

struct PointTrack {
  ParamPath path;
  std::vector<std::pair<double, DiagramPoint>> samples;  // (s, point)
};

/// Result of carrying a whole diagram along a path in one sweep.
struct DiagramTransport {
  ParamPath path;
  PersistenceDiagram start;
  PersistenceDiagram end;
  std::vector<int> table;  // start index -> end index
  std::vector<double> s_samples;
  std::vector<std::vector<int>> states;  // states[k][i]: index of track i in the diagram at s_samples[k]
  std::vector<PersistenceDiagram> diagrams;  // diagram at each s_samples[k]
  int rejected_steps = 0;
  /// Largest d between a tracked point before and after an accepted step.
  double max_step_motion = 0.0;

  PointTrack track(int start_index) const;
};

DiagramTransport transport_diagram(const SimplicialBifiltration& bif, int degree, const ParamPath& path,
                                   const TransportConfig& cfg);

struct PointTransport {
  DiagramPoint end;
  PointTrack track;
};

/// Transports one point of the start diagram. The diagonal goes to itself.
PointTransport transport_point(const SimplicialBifiltration& bif, int degree, const ParamPath& path,
                               const DiagramPoint& x, const TransportConfig& cfg);

/// T^g o sigma o (T^f)^-1 from two diagram transports along the same path.
Matching transport_matching(const DiagramTransport& tf, const DiagramTransport& tg, const Matching& sigma);

Matching transport_matching(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                            const ParamPath& path, const Matching& sigma, const TransportConfig& cfg);

/// Permutation of the basepoint diagram induced by a closed path.
std::vector<int> loop_permutation(const SimplicialBifiltration& bif, int degree, const ParamPath& loop,
                                  const TransportConfig& cfg);

}  // namespace cmatch
