#include "cmatch/parameter_space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>

#include "cmatch/diagram_metric.hpp"
#include "cmatch/errors.hpp"
#include "cmatch/parallel.hpp"

namespace cmatch {

AdmissibleLine::AdmissibleLine(ParamPoint p) : param(p) {
  if (!p.valid()) throw InputError("parameter a must lie in (0,1)");
}

std::pair<double, double> AdmissibleLine::point_at(double t) const {
  return {t * param.a + param.b, t * (1.0 - param.a) - param.b};
}

double AdmissibleLine::normalized_value(double t) const { return std::min(param.a, 1.0 - param.a) * t; }

ParamPath::ParamPath(std::vector<ParamPoint> pts) : waypoints(std::move(pts)) {
  if (waypoints.empty()) throw InputError("a path needs at least one waypoint");
  for (const auto& p : waypoints) {
    if (!p.valid()) throw InputError("path waypoint outside the strip 0 < a < 1");
  }
}

namespace {

double dist(ParamPoint p, ParamPoint q) { return std::hypot(p.a - q.a, p.b - q.b); }

}  // namespace

double ParamPath::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) l += dist(waypoints[i - 1], waypoints[i]);
  return l;
}

ParamPoint ParamPath::at(double s) const {
  if (s <= 0.0 || waypoints.size() == 1) return waypoints.front();
  if (s >= 1.0) return waypoints.back();
  const double total = length();
  if (total == 0.0) return waypoints.front();
  double target = s * total;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double seg = dist(waypoints[i - 1], waypoints[i]);
    if (target <= seg && seg > 0.0) {
      const double t = target / seg;
      const ParamPoint& p = waypoints[i - 1];
      const ParamPoint& q = waypoints[i];
      return {p.a + t * (q.a - p.a), p.b + t * (q.b - p.b)};
    }
    target -= seg;
  }
  return waypoints.back();
}

ParamPath ParamPath::reversed() const {
  ParamPath r = *this;
  std::reverse(r.waypoints.begin(), r.waypoints.end());
  return r;
}

ParamPath ParamPath::then(const ParamPath& next) const {
  if (!(waypoints.back() == next.waypoints.front())) throw InputError("paths do not meet");
  ParamPath r = *this;
  r.waypoints.insert(r.waypoints.end(), next.waypoints.begin() + 1, next.waypoints.end());
  return r;
}

std::vector<double> ParamPath::waypoint_fractions() const {
  std::vector<double> out;
  const double total = length();
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < waypoints.size(); ++i) {
    acc += dist(waypoints[i - 1], waypoints[i]);
    out.push_back(total > 0.0 ? acc / total : 0.0);
  }
  return out;
}

double segment_point_distance(ParamPoint p, ParamPoint q, ParamPoint c) {
  const double da = q.a - p.a;
  const double db = q.b - p.b;
  const double len2 = da * da + db * db;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((c.a - p.a) * da + (c.b - p.b) * db) / len2, 0.0, 1.0);
  return std::hypot(p.a + t * da - c.a, p.b + t * db - c.b);
}

void ParameterRegion::validate() const {
  if (!rect.valid()) throw InputError("region rectangle must satisfy 0 < a0 < a1 < 1 and b0 < b1");
  if (!(separation > 0.0)) throw InputError("region separation c must be positive");
  for (std::size_t i = 0; i < excluded.size(); ++i) {
    const Disk& d = excluded[i];
    if (!(d.radius > 0.0)) throw InputError("excluded disk radius must be positive");
    const ParamPoint c = d.center;
    const double margin = std::min({c.a - rect.a0, rect.a1 - c.a, c.b - rect.b0, rect.b1 - c.b});
    if (!(margin > d.radius)) throw InputError("excluded disk must lie inside the rectangle, away from its boundary");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(dist(c, excluded[j].center) > d.radius + excluded[j].radius)) {
        throw InputError("excluded disks must be disjoint");
      }
    }
  }
}

bool ParameterRegion::contains(ParamPoint p) const {
  if (!rect.contains(p)) return false;
  for (const auto& d : excluded) {
    if (dist(p, d.center) <= d.radius) return false;
  }
  return true;
}

bool ParameterRegion::contains_segment(ParamPoint p, ParamPoint q) const {
  if (!rect.contains(p) || !rect.contains(q)) return false;
  for (const auto& d : excluded) {
    if (segment_point_distance(p, q, d.center) <= d.radius) return false;
  }
  return true;
}

bool contains(const ParameterRegion& region, ParamPoint p) { return region.contains(p); }

double collision_gap(const PersistenceDiagram& d) {
  double g = kInf;
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    for (std::size_t j = i + 1; j < d.points.size(); ++j) {
      g = std::min(g, point_distance(d.points[i], d.points[j]));
    }
  }
  return g;
}

double min_diagram_gap(const PersistenceDiagram& d) {
  if (d.points.size() <= 1) return kInf;
  double g = collision_gap(d);
  const DiagramPoint delta = DiagramPoint::diagonal();
  for (const auto& p : d.points) g = std::min(g, point_distance(p, delta));
  return g;
}

double min_diagram_gap(const SimplicialBifiltration& bif, ParamPoint p, int degree) {
  return min_diagram_gap(diagram_at(bif, p, degree));
}

namespace {

double collision_gap_at(const SimplicialBifiltration& bif, ParamPoint p, int degree) {
  return collision_gap(diagram_at(bif, p, degree));
}

// Gap of the unnormalized slice diagram. Normalized diagrams shrink with
// min{a,1-a}, which would make every gap near the strip edges look small.
double scan_gap_at(const SimplicialBifiltration& bif, ParamPoint p, int degree) {
  return collision_gap_at(bif, p, degree) / std::min(p.a, 1.0 - p.a);
}

// Centroid of the lattice cells attaining the minimum of `vals`.
ParamPoint argmin_centroid(const std::vector<ParamPoint>& pts, const std::vector<double>& vals) {
  const double m = *std::min_element(vals.begin(), vals.end());
  double sa = 0.0, sb = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (vals[i] == m) {
      sa += pts[i].a;
      sb += pts[i].b;
      ++n;
    }
  }
  return {sa / n, sb / n};
}

}  // namespace

std::vector<SingularPairReport> detect_singular_pairs(const SimplicialBifiltration& bif, int degree, const Rect& scan,
                                                      int grid_n, double refine_tol, const ScanOptions& opt) {
  if (grid_n < 8) throw InputError("singular-pair scan needs grid_n >= 8");
  if (!scan.valid()) throw InputError("scan rectangle must satisfy 0 < a0 < a1 < 1 and b0 < b1");
  if (!(refine_tol > 0.0)) throw InputError("refine_tol must be positive");
  const int n = grid_n;
  const double da = (scan.a1 - scan.a0) / (n - 1);
  const double db = (scan.b1 - scan.b0) / (n - 1);
  auto node = [&](int i, int j) { return ParamPoint{scan.a0 + da * i, scan.b0 + db * j}; };
  std::vector<double> gap(static_cast<std::size_t>(n) * n);
  parallel_for(gap.size(), opt.threads, [&](std::size_t k) {
    gap[k] = scan_gap_at(bif, node(static_cast<int>(k % n), static_cast<int>(k / n)), degree);
  });

  std::vector<double> finite;
  for (double g : gap) {
    if (std::isfinite(g)) finite.push_back(g);
  }
  if (finite.empty()) return {};
  std::nth_element(finite.begin(), finite.begin() + finite.size() / 2, finite.end());
  const double threshold = opt.threshold_fraction * finite[finite.size() / 2];

  auto at = [&](int i, int j) { return gap[static_cast<std::size_t>(j) * n + i]; };
  auto local_min = [&](int i, int j) {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int x = i + di, y = j + dj;
        if (x < 0 || y < 0 || x >= n || y >= n || (di == 0 && dj == 0)) continue;
        if (at(x, y) < at(i, j)) return false;
      }
    }
    return true;
  };

  // Clusters: 8-connected components of below-threshold cells.
  std::vector<int> label(gap.size(), -1);
  std::vector<std::vector<std::pair<int, int>>> clusters;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!(at(i, j) < threshold) || label[static_cast<std::size_t>(j) * n + i] >= 0) continue;
      std::vector<std::pair<int, int>> comp;
      std::deque<std::pair<int, int>> queue{{i, j}};
      label[static_cast<std::size_t>(j) * n + i] = static_cast<int>(clusters.size());
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        comp.emplace_back(x, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int u = x + dx, v = y + dy;
            if (u < 0 || v < 0 || u >= n || v >= n) continue;
            auto& l = label[static_cast<std::size_t>(v) * n + u];
            if (l >= 0 || !(at(u, v) < threshold)) continue;
            l = static_cast<int>(clusters.size());
            queue.emplace_back(u, v);
          }
        }
      }
      clusters.push_back(std::move(comp));
    }
  }

  std::vector<SingularPairReport> out;
  for (const auto& comp : clusters) {
    bool has_min = false;
    std::vector<ParamPoint> pts;
    std::vector<double> vals;
    for (auto [i, j] : comp) {
      has_min = has_min || local_min(i, j);
      pts.push_back(node(i, j));
      vals.push_back(at(i, j));
    }
    if (!has_min) continue;
    ParamPoint c = argmin_centroid(pts, vals);
    double r = std::max(da, db);
    while (r >= refine_tol) {
      std::vector<ParamPoint> sub;
      for (int j = -2; j <= 2; ++j) {
        for (int i = -2; i <= 2; ++i) {
          ParamPoint p{c.a + r * i / 2.0, c.b + r * j / 2.0};
          if (p.valid()) sub.push_back(p);
        }
      }
      std::vector<double> sv(sub.size());
      parallel_for(sub.size(), opt.threads, [&](std::size_t k) { sv[k] = scan_gap_at(bif, sub[k], degree); });
      c = argmin_centroid(sub, sv);
      r /= 2.0;
    }
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const SingularPairReport& rep) {
      return dist(rep.location, c) < std::max(da, db);
    });
    if (duplicate) continue;
    out.push_back({c, degree, collision_gap_at(bif, c, degree), r});
  }
  std::sort(out.begin(), out.end(), [](const SingularPairReport& x, const SingularPairReport& y) {
    return x.location.a != y.location.a ? x.location.a < y.location.a : x.location.b < y.location.b;
  });
  return out;
}

int winding_number(const ParamPath& loop, ParamPoint c) {
  double total = 0.0;
  const auto& w = loop.waypoints;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double a0 = std::atan2(w[i - 1].b - c.b, w[i - 1].a - c.a);
    const double a1 = std::atan2(w[i].b - c.b, w[i].a - c.a);
    double d = a1 - a0;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

namespace {

struct Square {
  int i0, i1, j0, j1;  // lattice index bounds
};

// Drops waypoints that lie on the segment between their neighbours.
std::vector<ParamPoint> drop_collinear(const std::vector<ParamPoint>& pts) {
  std::vector<ParamPoint> out;
  for (const auto& p : pts) {
    if (!out.empty() && out.back() == p) continue;
    while (out.size() >= 2) {
      const ParamPoint& x = out[out.size() - 2];
      const ParamPoint& y = out.back();
      const bool same_a = x.a == y.a && y.a == p.a;
      const bool same_b = x.b == y.b && y.b == p.b;
      const bool monotone_a = (y.a - x.a) * (p.a - y.a) >= 0;
      const bool monotone_b = (y.b - x.b) * (p.b - y.b) >= 0;
      if ((same_a && monotone_b) || (same_b && monotone_a)) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(p);
  }
  return out;
}

std::optional<std::vector<ParamPath>> try_loops(const ParameterRegion& region, ParamPoint base, double shrink,
                                                int refine) {
  const Rect& R = region.rect;
  const auto& disks = region.excluded;
  double delta_min = kInf;
  std::vector<double> half(disks.size());
  for (std::size_t k = 0; k < disks.size(); ++k) {
    const double delta = shrink * 0.5 * disks[k].radius;
    half[k] = disks[k].radius + delta;
    delta_min = std::min(delta_min, delta);
  }
  const double h = delta_min / (2.0 * refine);
  const int imin = static_cast<int>(std::ceil((R.a0 - base.a) / h));
  const int imax = static_cast<int>(std::floor((R.a1 - base.a) / h));
  const int jmin = static_cast<int>(std::ceil((R.b0 - base.b) / h));
  const int jmax = static_cast<int>(std::floor((R.b1 - base.b) / h));
  auto pt = [&](int i, int j) { return ParamPoint{base.a + i * h, base.b + j * h}; };

  std::vector<Square> sq;
  for (std::size_t k = 0; k < disks.size(); ++k) {
    const ParamPoint c = disks[k].center;
    Square s{static_cast<int>(std::floor((c.a - half[k] - base.a) / h)),
             static_cast<int>(std::ceil((c.a + half[k] - base.a) / h)),
             static_cast<int>(std::floor((c.b - half[k] - base.b) / h)),
             static_cast<int>(std::ceil((c.b + half[k] - base.b) / h))};
    if (s.i0 <= imin || s.i1 >= imax || s.j0 <= jmin || s.j1 >= jmax) return std::nullopt;
    sq.push_back(s);
  }
  for (std::size_t k = 0; k < sq.size(); ++k) {
    for (std::size_t m = 0; m < sq.size(); ++m) {
      if (m == k) continue;
      // Squares must be disjoint and each square must keep clear of other disks.
      const bool overlap = sq[k].i0 <= sq[m].i1 && sq[m].i0 <= sq[k].i1 && sq[k].j0 <= sq[m].j1 && sq[m].j0 <= sq[k].j1;
      if (overlap) return std::nullopt;
    }
  }
  auto blocked = [&](int i, int j) {
    for (const auto& s : sq) {
      if (i > s.i0 && i < s.i1 && j > s.j0 && j < s.j1) return true;
    }
    return false;
  };
  if (blocked(0, 0)) return std::nullopt;
  for (const auto& s : sq) {
    if (0 >= s.i0 && 0 <= s.i1 && 0 >= s.j0 && 0 <= s.j1) return std::nullopt;
  }

  // BFS over the lattice from the basepoint.
  const int W = imax - imin + 1;
  const int H = jmax - jmin + 1;
  auto id = [&](int i, int j) { return static_cast<std::size_t>(j - jmin) * W + (i - imin); };
  std::vector<int> parent(static_cast<std::size_t>(W) * H, -2);
  std::deque<std::pair<int, int>> queue{{0, 0}};
  parent[id(0, 0)] = -1;
  static constexpr int kDi[4] = {1, 0, -1, 0};
  static constexpr int kDj[4] = {0, 1, 0, -1};
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      const int x = i + kDi[d], y = j + kDj[d];
      if (x < imin || x > imax || y < jmin || y > jmax || blocked(x, y)) continue;
      if (parent[id(x, y)] != -2) continue;
      parent[id(x, y)] = static_cast<int>(id(i, j));
      queue.emplace_back(x, y);
    }
  }

  std::vector<ParamPath> loops;
  for (std::size_t k = 0; k < sq.size(); ++k) {
    const Square& s = sq[k];
    if (parent[id(s.i0, s.j0)] == -2) return std::nullopt;
    std::vector<ParamPoint> to;
    for (int cur = static_cast<int>(id(s.i0, s.j0)); cur >= 0; cur = parent[cur]) {
      to.push_back(pt(imin + cur % W, jmin + cur / W));
    }
    std::reverse(to.begin(), to.end());
    std::vector<ParamPoint> pts = to;
    pts.push_back(pt(s.i1, s.j0));
    pts.push_back(pt(s.i1, s.j1));
    pts.push_back(pt(s.i0, s.j1));
    pts.push_back(pt(s.i0, s.j0));
    for (auto it = to.rbegin() + 1; it != to.rend(); ++it) pts.push_back(*it);
    ParamPath loop(drop_collinear(pts));
    loop.waypoints.front() = base;
    loop.waypoints.back() = base;
    for (std::size_t m = 0; m < disks.size(); ++m) {
      if (winding_number(loop, disks[m].center) != (m == k ? 1 : 0)) return std::nullopt;
    }
    for (std::size_t i = 1; i < loop.waypoints.size(); ++i) {
      if (!region.contains_segment(loop.waypoints[i - 1], loop.waypoints[i])) return std::nullopt;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace

std::vector<ParamPath> generator_loops(const ParameterRegion& region, ParamPoint basepoint) {
  region.validate();
  if (!region.contains(basepoint)) throw InputError("basepoint is not in the region");
  if (region.excluded.empty()) return {};
  for (double shrink : {1.0, 0.5, 0.25, 0.1}) {
    for (int refine : {1, 2, 4}) {
      if (auto loops = try_loops(region, basepoint, shrink, refine)) return *loops;
    }
  }
  throw InputError("cannot route generator loops: excluded disks are too crowded or too close to the basepoint");
}

double choose_separation(const std::vector<const SimplicialBifiltration*>& bifs, int degree,
                         const std::vector<ParamPoint>& sample, int threads) {
  std::vector<double> g(sample.size() * bifs.size(), kInf);
  parallel_for(g.size(), threads, [&](std::size_t k) {
    g[k] = min_diagram_gap(*bifs[k / sample.size()], sample[k % sample.size()], degree);
  });
  const double m = g.empty() ? kInf : *std::min_element(g.begin(), g.end());
  return m / 4.0;
}

std::vector<ParamPoint> region_lattice(const ParameterRegion& region, int grid_n) {
  if (grid_n < 2) throw InputError("lattice needs grid_n >= 2");
  const Rect& R = region.rect;
  std::vector<ParamPoint> out;
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      ParamPoint p{R.a0 + (R.a1 - R.a0) * i / (grid_n - 1), R.b0 + (R.b1 - R.b0) * j / (grid_n - 1)};
      if (region.contains(p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace cmatch
