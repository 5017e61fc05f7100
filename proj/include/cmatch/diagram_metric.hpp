#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cmatch/persistence.hpp"

namespace cmatch {

/// Extended distance on proper points, points at infinity and the diagonal.
double point_distance(const DiagramPoint& x, const DiagramPoint& y);

/// Bijection between two diagrams extended by the diagonal. Indices refer to
/// the `points` vectors of the left and right diagrams.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> left_to_delta;
  std::vector<int> right_to_delta;

  /// left index -> right index, or -1 for the diagonal.
  std::vector<int> left_map(std::size_t left_size) const;
  static Matching from_left_map(const std::vector<int>& left_map, std::size_t right_size);
  Matching inverse() const;
  void canonicalize();
  bool valid_for(std::size_t left_size, std::size_t right_size) const;

  friend bool operator==(const Matching&, const Matching&) = default;
};

struct MatchingCost {
  double value = 0.0;
  /// Pair realizing the max; -1 stands for the diagonal. Empty if nothing is matched.
  std::optional<std::pair<int, int>> argmax_pair;
};

MatchingCost matching_cost(const PersistenceDiagram& left, const PersistenceDiagram& right, const Matching& m);

struct BottleneckResult {
  double value = 0.0;
  Matching matching;
};

/// Exact bottleneck distance: the optimum is searched over the sorted set of
/// finite pairwise distances, testing each threshold by bipartite matching.
BottleneckResult bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2);

/// All matchings between two small diagrams. Improper points are bijected
/// among themselves; proper points range over partial injections, the rest
/// going to the diagonal. If improper counts differ, improper points go to
/// the diagonal and every returned matching has infinite cost.
std::vector<Matching> enumerate_matchings(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                                          std::size_t cap = 12);

}  // namespace cmatch
