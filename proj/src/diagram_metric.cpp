#include "cmatch/diagram_metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "cmatch/errors.hpp"

namespace cmatch {

double point_distance(const DiagramPoint& x, const DiagramPoint& y) {
  if (x.is_diagonal() && y.is_diagonal()) return 0.0;
  if (x.is_diagonal() || y.is_diagonal()) {
    const DiagramPoint& p = x.is_diagonal() ? y : x;
    return p.is_proper() ? (p.v - p.u) / 2.0 : kInf;
  }
  if (x.is_improper() && y.is_improper()) return std::abs(x.u - y.u);
  if (x.is_improper() || y.is_improper()) return kInf;
  const double sup = std::max(std::abs(x.u - y.u), std::abs(x.v - y.v));
  const double via_diag = std::max((x.v - x.u) / 2.0, (y.v - y.u) / 2.0);
  return std::min(sup, via_diag);
}

std::vector<int> Matching::left_map(std::size_t left_size) const {
  std::vector<int> m(left_size, -1);
  for (auto [l, r] : pairs) m[l] = r;
  return m;
}

Matching Matching::from_left_map(const std::vector<int>& map, std::size_t right_size) {
  Matching m;
  std::vector<char> used(right_size, 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] < 0) {
      m.left_to_delta.push_back(static_cast<int>(i));
    } else {
      m.pairs.emplace_back(static_cast<int>(i), map[i]);
      used[map[i]] = 1;
    }
  }
  for (std::size_t j = 0; j < right_size; ++j) {
    if (!used[j]) m.right_to_delta.push_back(static_cast<int>(j));
  }
  return m;
}

Matching Matching::inverse() const {
  Matching m;
  for (auto [l, r] : pairs) m.pairs.emplace_back(r, l);
  m.left_to_delta = right_to_delta;
  m.right_to_delta = left_to_delta;
  m.canonicalize();
  return m;
}

void Matching::canonicalize() {
  std::sort(pairs.begin(), pairs.end());
  std::sort(left_to_delta.begin(), left_to_delta.end());
  std::sort(right_to_delta.begin(), right_to_delta.end());
}

bool Matching::valid_for(std::size_t left_size, std::size_t right_size) const {
  std::vector<int> lc(left_size, 0), rc(right_size, 0);
  auto in = [](int i, std::size_t n) { return i >= 0 && static_cast<std::size_t>(i) < n; };
  for (auto [l, r] : pairs) {
    if (!in(l, left_size) || !in(r, right_size)) return false;
    ++lc[l];
    ++rc[r];
  }
  for (int l : left_to_delta) {
    if (!in(l, left_size)) return false;
    ++lc[l];
  }
  for (int r : right_to_delta) {
    if (!in(r, right_size)) return false;
    ++rc[r];
  }
  return std::all_of(lc.begin(), lc.end(), [](int c) { return c == 1; }) &&
         std::all_of(rc.begin(), rc.end(), [](int c) { return c == 1; });
}

MatchingCost matching_cost(const PersistenceDiagram& left, const PersistenceDiagram& right, const Matching& m) {
  MatchingCost c;
  auto consider = [&](double d, int l, int r) {
    if (!c.argmax_pair || d > c.value) {
      c.value = d;
      c.argmax_pair = std::make_pair(l, r);
    }
  };
  const DiagramPoint delta = DiagramPoint::diagonal();
  for (auto [l, r] : m.pairs) consider(point_distance(left.points[l], right.points[r]), l, r);
  for (int l : m.left_to_delta) consider(point_distance(left.points[l], delta), l, -1);
  for (int r : m.right_to_delta) consider(point_distance(delta, right.points[r]), -1, r);
  if (!c.argmax_pair) c.value = 0.0;
  return c;
}

namespace {

// Kuhn's augmenting-path matching on a square bipartite graph.
class Bipartite {
 public:
  explicit Bipartite(std::size_t n) : adj_(n), match_right_(n, -1), match_left_(n, -1) {}
  void add_edge(int l, int r) { adj_[l].push_back(r); }

  bool perfect() {
    const int n = static_cast<int>(adj_.size());
    for (int l = 0; l < n; ++l) {
      std::vector<char> seen(n, 0);
      if (!augment(l, seen)) return false;
    }
    return true;
  }
  int partner_of_left(int l) const { return match_left_[l]; }

 private:
  bool augment(int l, std::vector<char>& seen) {
    for (int r : adj_[l]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (match_right_[r] < 0 || augment(match_right_[r], seen)) {
        match_right_[r] = l;
        match_left_[l] = r;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> match_right_;
  std::vector<int> match_left_;
};

struct Layout {
  std::vector<int> lp, rp;  // proper indices
  std::size_t nl = 0, nr = 0;
};

// Left nodes: left points, then one diagonal copy per right proper point.
// Right nodes: right points, then one diagonal copy per left proper point.
std::optional<Matching> feasible(const PersistenceDiagram& d1, const PersistenceDiagram& d2, const Layout& lay,
                                 double lambda) {
  const std::size_t n = lay.nl + lay.rp.size();
  Bipartite g(n);
  const DiagramPoint delta = DiagramPoint::diagonal();
  std::vector<int> lp_slot(lay.nl, -1);
  for (std::size_t k = 0; k < lay.lp.size(); ++k) lp_slot[lay.lp[k]] = static_cast<int>(k);
  for (std::size_t i = 0; i < lay.nl; ++i) {
    for (std::size_t j = 0; j < lay.nr; ++j) {
      if (point_distance(d1.points[i], d2.points[j]) <= lambda) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
    if (lp_slot[i] >= 0 && point_distance(d1.points[i], delta) <= lambda) {
      g.add_edge(static_cast<int>(i), static_cast<int>(lay.nr + lp_slot[i]));
    }
  }
  for (std::size_t k = 0; k < lay.rp.size(); ++k) {
    const int node = static_cast<int>(lay.nl + k);
    const int j = lay.rp[k];
    if (point_distance(delta, d2.points[j]) <= lambda) g.add_edge(node, j);
    for (std::size_t q = 0; q < lay.lp.size(); ++q) g.add_edge(node, static_cast<int>(lay.nr + q));
  }
  if (!g.perfect()) return std::nullopt;
  Matching m;
  std::vector<char> right_used(lay.nr, 0);
  for (std::size_t i = 0; i < lay.nl; ++i) {
    const int r = g.partner_of_left(static_cast<int>(i));
    if (r < static_cast<int>(lay.nr)) {
      m.pairs.emplace_back(static_cast<int>(i), r);
      right_used[r] = 1;
    } else {
      m.left_to_delta.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t j = 0; j < lay.nr; ++j) {
    if (!right_used[j]) m.right_to_delta.push_back(static_cast<int>(j));
  }
  m.canonicalize();
  return m;
}

}  // namespace

BottleneckResult bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  if (d1.degree != d2.degree) throw InputError("bottleneck distance between diagrams of different degree");
  Layout lay;
  lay.nl = d1.points.size();
  lay.nr = d2.points.size();
  for (std::size_t i = 0; i < lay.nl; ++i) {
    if (d1.points[i].is_proper()) lay.lp.push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < lay.nr; ++j) {
    if (d2.points[j].is_proper()) lay.rp.push_back(static_cast<int>(j));
  }
  BottleneckResult res;
  if (d1.improper_count() != d2.improper_count()) {
    std::vector<int> all_delta(lay.nl, -1);
    res.matching = Matching::from_left_map(all_delta, lay.nr);
    res.value = kInf;
    return res;
  }
  if (lay.nl == 0 && lay.nr == 0) return res;

  const DiagramPoint delta = DiagramPoint::diagonal();
  std::vector<double> cand{0.0};
  for (std::size_t i = 0; i < lay.nl; ++i) {
    for (std::size_t j = 0; j < lay.nr; ++j) {
      const double d = point_distance(d1.points[i], d2.points[j]);
      if (std::isfinite(d)) cand.push_back(d);
    }
  }
  for (int i : lay.lp) cand.push_back(point_distance(d1.points[i], delta));
  for (int j : lay.rp) cand.push_back(point_distance(delta, d2.points[j]));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::size_t lo = 0, hi = cand.size() - 1;
  std::optional<Matching> best = feasible(d1, d2, lay, cand[hi]);
  if (!best) throw ConsistencyError("bottleneck search: largest threshold infeasible");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto m = feasible(d1, d2, lay, cand[mid]);
    if (m) {
      hi = mid;
      best = std::move(m);
    } else {
      lo = mid + 1;
    }
  }
  res.value = cand[hi];
  res.matching = *best;
  return res;
}

std::vector<Matching> enumerate_matchings(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                                          std::size_t cap) {
  if (d1.points.size() + d2.points.size() > cap) {
    throw SizeError("matching enumeration cap exceeded: " +
                    std::to_string(d1.points.size() + d2.points.size()) + " points > " + std::to_string(cap));
  }
  std::vector<int> li, lp, ri, rp;
  for (std::size_t i = 0; i < d1.points.size(); ++i) (d1.points[i].is_improper() ? li : lp).push_back(static_cast<int>(i));
  for (std::size_t j = 0; j < d2.points.size(); ++j) (d2.points[j].is_improper() ? ri : rp).push_back(static_cast<int>(j));

  std::vector<std::vector<int>> improper_maps;
  std::vector<int> base(d1.points.size(), -1);
  if (li.size() == ri.size()) {
    std::vector<int> perm(ri.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> m = base;
      for (std::size_t k = 0; k < li.size(); ++k) m[li[k]] = ri[perm[k]];
      improper_maps.push_back(std::move(m));
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    improper_maps.push_back(base);
  }

  std::vector<Matching> out;
  std::vector<char> used(d2.points.size(), 0);
  for (const auto& im : improper_maps) {
    std::vector<int> m = im;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == lp.size()) {
        out.push_back(Matching::from_left_map(m, d2.points.size()));
        return;
      }
      m[lp[k]] = -1;
      rec(k + 1);
      for (int j : rp) {
        if (used[j]) continue;
        used[j] = 1;
        m[lp[k]] = j;
        rec(k + 1);
        used[j] = 0;
      }
      m[lp[k]] = -1;
    };
    rec(0);
  }
  return out;
}

}  // namespace cmatch
