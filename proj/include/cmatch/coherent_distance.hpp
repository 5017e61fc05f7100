#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cmatch/diagram_metric.hpp"
#include "cmatch/parameter_space.hpp"
#include "cmatch/transport.hpp"

namespace cmatch {

using Permutation = std::vector<int>;

/// Pairs (perm_f, perm_g) of loop permutations of the basepoint diagrams of
/// f and g, closed under composition. elements[0] is the identity.
struct PairPermutationGroup {
  ParamPoint basepoint;
  std::vector<std::pair<Permutation, Permutation>> generators;
  std::vector<std::pair<Permutation, Permutation>> elements;

  std::size_t order() const { return elements.size(); }
};

/// Closes `generators` under composition by breadth-first products. Throws
/// SizeError past `cap` elements.
PairPermutationGroup close_group(ParamPoint basepoint, std::vector<std::pair<Permutation, Permutation>> generators,
                                 std::size_t left_size, std::size_t right_size, std::size_t cap = 100000);

/// perm_g o sigma o perm_f^-1.
Matching act(const std::pair<Permutation, Permutation>& h, const Matching& sigma);

/// Generator pairs from the loops around each excluded disk, then closure.
PairPermutationGroup monodromy_group(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                                     const ParameterRegion& region, ParamPoint basepoint, const TransportConfig& cfg);

/// Endpoints over which transported costs are sampled.
struct SampleSpec {
  /// Lattice points per side of the rectangle; the column a = 1/2 is added
  /// when it crosses the rectangle.
  int lattice_n = 17;
  /// Points on a circle of radius ring_factor * r around each excluded disk.
  int ring_points = 32;
  double ring_factor = 1.01;
  int threads = 0;
};

/// Sample endpoints joined into a tree rooted at the basepoint. Each tree
/// edge is a segment inside the region; the tree path to a node is the
/// fixed polyline used to reach it.
struct SampleNetwork {
  std::vector<ParamPoint> nodes;  // nodes[0] is the basepoint
  std::vector<int> parent;        // -1 for the root
  std::vector<std::vector<int>> layers;
  std::vector<char> on_boundary;  // rectangle boundary or disk ring
  double spacing = 0.0;           // lattice step (max of the two axes)
  double a_step = 0.0;
  double b_step = 0.0;
};

SampleNetwork build_network(const ParameterRegion& region, ParamPoint basepoint, const SampleSpec& spec);

/// Per-node diagrams of one bifiltration and the transport tables from the
/// basepoint diagram along the tree paths.
struct NetworkTransport {
  std::vector<PersistenceDiagram> diagrams;
  std::vector<std::vector<int>> tables;
  std::vector<double> edge_motion;  // max d moved by a point along the edge into each node
};

NetworkTransport transport_network(const SimplicialBifiltration& bif, int degree, const SampleNetwork& net,
                                   const TransportConfig& cfg, int threads = 0);

struct CoherentCostReport {
  Matching sigma;
  double value = 0.0;
  double basepoint_cost = 0.0;
  int group_index = 0;
  ParamPoint witness;
};

/// Evaluates transported matching costs over a sample network.
class CoherentEvaluator {
 public:
  CoherentEvaluator(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                    const ParameterRegion& region, ParamPoint basepoint, const PairPermutationGroup& group,
                    const SampleSpec& spec, const TransportConfig& cfg);

  const SampleNetwork& network() const { return net_; }
  const NetworkTransport& f_transport() const { return tf_; }
  const NetworkTransport& g_transport() const { return tg_; }
  const PersistenceDiagram& f_basepoint() const { return tf_.diagrams[0]; }
  const PersistenceDiagram& g_basepoint() const { return tg_.diagrams[0]; }
  const PairPermutationGroup& group() const { return group_; }

  /// cost(T_{pi_node}(h . sigma)) for group element h and node.
  double transported_cost(const Matching& sigma, std::size_t h, std::size_t node) const;
  CoherentCostReport coherent_cost(const Matching& sigma) const;
  /// d_B between the diagrams at each node.
  std::vector<double> bottleneck_field() const;

  /// Largest motion of f plus g points along any tree edge.
  double tolerance() const;
  /// Step-bound constant of f and g at the worst sampled a, times the spacing.
  double bound_tolerance() const;

 private:
  const SimplicialBifiltration* f_;
  const SimplicialBifiltration* g_;
  int degree_;
  PairPermutationGroup group_;
  SampleNetwork net_;
  NetworkTransport tf_, tg_;
};

CoherentCostReport coherent_cost(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                                 const ParameterRegion& region, ParamPoint basepoint, const Matching& sigma,
                                 const PairPermutationGroup& group, const SampleSpec& spec, const TransportConfig& cfg);

struct CoherentDistanceReport {
  double value = 0.0;
  CoherentCostReport best;
  double tolerance = 0.0;
  double bound_tolerance = 0.0;
  std::size_t group_order = 1;
  std::size_t matchings = 0;
  std::size_t nodes = 0;
  /// sup of d_B over the sampled nodes of the same region.
  double dmatch_region = 0.0;
};

CoherentDistanceReport coherent_matching_distance(const CoherentEvaluator& ev, std::size_t cap = 12);

/// Builds the group from generator loops and evaluates CD_U.
CoherentDistanceReport coherent_matching_distance(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                                  int degree, const ParameterRegion& region, ParamPoint basepoint,
                                                  const SampleSpec& spec, const TransportConfig& cfg);

struct HeatmapRow {
  double a = 0.0, b = 0.0, value = 0.0;
};

struct DmatchResult {
  double value = 0.0;
  ParamPoint argmax;
  std::vector<HeatmapRow> table;  // row-major, b outer, a inner
};

/// Max over a grid_n x grid_n lattice of the bottleneck distance between
/// the slice diagrams of f and g.
DmatchResult dmatch(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree, const Rect& rect,
                    int grid_n, int threads = 0);

struct MaxPrincipleReport {
  double max_value = 0.0;
  ParamPoint argmax;
  int group_index = 0;
  /// Some maximizer lies within one lattice step of a = 1/2 or of the
  /// region boundary.
  bool passes = false;
  std::size_t maximizers = 0;
  double distance_to_half = 0.0;
  double distance_to_boundary = 0.0;
};

MaxPrincipleReport max_principle_check(const CoherentEvaluator& ev, const ParameterRegion& region,
                                       const Matching& sigma);

struct BasepointReport {
  double value_first = 0.0;
  double value_second = 0.0;
  double tolerance = 0.0;
  bool passes = false;
};

BasepointReport basepoint_independence_check(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                             int degree, const ParameterRegion& region, ParamPoint first,
                                             ParamPoint second, const SampleSpec& spec, const TransportConfig& cfg);

struct PseudoMetricReport {
  double fg = 0.0, gf = 0.0, gh = 0.0, fh = 0.0;
  double tolerance = 0.0;
  bool symmetric = false;
  bool triangle = false;
};

PseudoMetricReport pseudo_metric_check(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                       const SimplicialBifiltration& h, int degree, const ParameterRegion& region,
                                       ParamPoint basepoint, const SampleSpec& spec, const TransportConfig& cfg);

struct FamilyReport {
  double cd_family = 0.0;
  double dmatch_family = 0.0;
  double tolerance = 0.0;
  bool ordered = false;  // dmatch_family <= cd_family + tolerance
  std::vector<CoherentDistanceReport> per_region;
};

/// Regions must have pairwise disjoint rectangles; one basepoint per region.
FamilyReport family_distances(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                              const std::vector<ParameterRegion>& regions, const std::vector<ParamPoint>& basepoints,
                              const SampleSpec& spec, const TransportConfig& cfg);

}  // namespace cmatch
