#include "cmatch/pareto_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmatch/errors.hpp"

namespace cmatch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMerge = 1e-9;

bool in_piece(const ArcPiece& pc, double t) { return t >= pc.t0 - kMerge && t <= pc.t1 + kMerge; }

std::vector<std::pair<double, double>> endpoints(const ExtendedParetoGrid& g, const ContourArc& a) {
  std::vector<std::pair<double, double>> out;
  for (const auto& pc : a.pieces) {
    const Contour& c = g.contours[pc.contour];
    out.push_back(c.point_at(pc.t0));
    if (std::isfinite(pc.t1)) out.push_back(c.point_at(pc.t1));
  }
  return out;
}


// Degree of the arcs ending at each double point, or -1 if they differ.
void label_double_points(ExtendedParetoGrid& g) {
  for (auto& p : g.double_points) {
    int deg = -2;
    for (const auto& a : g.arcs) {
      for (const auto& e : endpoints(g, a)) {
        if (std::hypot(e.first - p.x, e.second - p.y) > 1e-7) continue;
        deg = deg == -2 || deg == a.degree ? a.degree : -1;
      }
    }
    p.degree = deg == -2 ? -1 : deg;
  }
}

Contour circle(double cx, double cy, double r, double t0, double t1, std::string prov) {
  return Contour{ContourKind::Arc, cx, cy, r, t0, t1, std::move(prov)};
}

Contour vertical(double x, double y0, std::string prov) {
  return Contour{ContourKind::Vertical, x, y0, 0.0, 0.0, kInf, std::move(prov)};
}

Contour horizontal(double x0, double y, std::string prov) {
  return Contour{ContourKind::Horizontal, x0, y, 0.0, 0.0, kInf, std::move(prov)};
}

ContourArc arc(std::string name, int degree, int sign, std::vector<ArcPiece> pieces) {
  return ContourArc{std::move(name), degree, sign, std::move(pieces)};
}

ExtendedParetoGrid torus_grid(const ExampleSpec& spec) {
  const double r1 = spec.major - spec.minor;
  const double r2 = spec.major + spec.minor;
  ExtendedParetoGrid g;
  g.name = "torus";
  g.contours = {
      circle(0, 0, r1, 0, kPi / 2, "inner circle, first quadrant"),        // 0
      circle(0, 0, r2, 0, kPi / 2, "outer circle, first quadrant"),        // 1
      circle(0, 0, r1, kPi, 1.5 * kPi, "inner circle, third quadrant"),    // 2
      circle(0, 0, r2, kPi, 1.5 * kPi, "outer circle, third quadrant"),    // 3
      vertical(-r2, 0, "x = -outer"),                                      // 4
      vertical(-r1, 0, "x = -inner"),                                      // 5
      vertical(r1, 0, "x = inner"),                                        // 6
      vertical(r2, 0, "x = outer"),                                        // 7
      horizontal(0, -r2, "z = -outer"),                                    // 8
      horizontal(0, -r1, "z = -inner"),                                    // 9
      horizontal(0, r1, "z = inner"),                                      // 10
      horizontal(0, r2, "z = outer"),                                      // 11
  };
  // Crossings of the outer circle with x = r1 and z = r1.
  const double s = std::sqrt(r2 * r2 - r1 * r1);
  const double th = std::asin(r1 / r2);
  g.arcs = {
      arc("M1", 0, 1, {{0, 0, kPi / 2}}),
      arc("M2", 0, 1, {{3, kPi, 1.5 * kPi}, {4, 0, kInf}, {8, 0, kInf}}),
      arc("R1", 0, -1, {{6, 0, r1}}),
      arc("R2", 0, -1, {{10, 0, r1}}),
      arc("O1", 1, 1, {{1, 0, th}}),
      arc("O2", 1, 1, {{1, th, kPi / 2 - th}}),
      arc("O3", 1, 1, {{1, kPi / 2 - th, kPi / 2}}),
      arc("K0", 1, 1, {{2, kPi, 1.5 * kPi}, {5, 0, kInf}, {9, 0, kInf}}),
      arc("V1", 1, 1, {{6, r1, s}}),
      arc("V2", 1, 1, {{6, s, r2}}),
      arc("V3", 1, 1, {{6, r2, kInf}}),
      arc("H1", 1, 1, {{10, r1, s}}),
      arc("H2", 1, 1, {{10, s, r2}}),
      arc("H3", 1, 1, {{10, r2, kInf}}),
      arc("G1", 1, -1, {{7, 0, r1}}),
      arc("G2", 1, -1, {{7, r1, r2}}),
      arc("G3", 1, -1, {{11, 0, r1}}),
      arc("G4", 1, -1, {{11, r1, r2}}),
      arc("B1", 2, 1, {{7, r2, kInf}}),
      arc("B2", 2, 1, {{11, r2, kInf}}),
  };
  g.double_points = {
      {r1, 0, "(r1,0)"},  {r2, 0, "(r2,0)"},  {0, r1, "(0,r1)"},  {0, r2, "(0,r2)"},  {r1, r1, "(r1,r1)"},
      {r1, r2, "(r1,r2)"}, {r2, r1, "(r2,r1)"}, {r2, r2, "(r2,r2)"}, {r1, s, "(r1,s)"},  {s, r1, "(s,r1)"},
  };
  auto id = [&](const char* n) { return g.arc_index(n); };
  g.paired_arcs = {
      {id("M1"), id("R1")}, {id("M1"), id("R2")}, {id("O1"), id("G1")}, {id("O3"), id("G3")}};
  label_double_points(g);
  return g;
}

ExtendedParetoGrid two_spheres_grid(const ExampleSpec& spec) {
  const Sphere& s1 = spec.spheres[0];
  const Sphere& s2 = spec.spheres[1];
  const double x1 = s1.cx, z1 = s1.cz, r1 = s1.r;
  const double x2 = s2.cx, z2 = s2.cz, r2 = s2.r;
  ExtendedParetoGrid g;
  g.name = "two_spheres";
  g.contours = {
      circle(x1, z1, r1, 0, kPi / 2, "first sphere, upper right rim"),       // 0
      circle(x1, z1, r1, kPi, 1.5 * kPi, "first sphere, lower left rim"),    // 1
      circle(x2, z2, r2, 0, kPi / 2, "second sphere, upper right rim"),      // 2
      circle(x2, z2, r2, kPi, 1.5 * kPi, "second sphere, lower left rim"),   // 3
      vertical(x1 - r1, z1, "first sphere, x = min"),                        // 4
      horizontal(x1, z1 - r1, "first sphere, z = min"),                      // 5
      vertical(x1 + r1, z1, "first sphere, x = max"),                        // 6
      horizontal(x1, z1 + r1, "first sphere, z = max"),                      // 7
      vertical(x2 - r2, z2, "second sphere, x = min"),                       // 8
      horizontal(x2, z2 - r2, "second sphere, z = min"),                     // 9
      vertical(x2 + r2, z2, "second sphere, x = max"),                       // 10
      horizontal(x2, z2 + r2, "second sphere, z = max"),                     // 11
  };
  auto angle = [](double cx, double cz, double x, double z, double lo) {
    double t = std::atan2(z - cz, x - cx);
    while (t < lo) t += 2 * kPi;
    return t;
  };
  // Intersections of the two circles: A on the upper right rims, C on the lower left ones.
  const double dx = x2 - x1, dz = z2 - z1;
  const double d = std::hypot(dx, dz);
  const double l = (d * d + r1 * r1 - r2 * r2) / (2 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - l * l));
  const double mx = x1 + l * dx / d, mz = z1 + l * dz / d;
  double ax = mx + h * dz / d, az = mz - h * dx / d;
  double cx = mx - h * dz / d, cz = mz + h * dx / d;
  if (ax + az < cx + cz) {
    std::swap(ax, cx);
    std::swap(az, cz);
  }
  // E1: z = max of the first sphere on the second rim; E2: x = max of the second on the first rim.
  const double e1x = x2 + std::sqrt(r2 * r2 - (z1 + r1 - z2) * (z1 + r1 - z2)), e1z = z1 + r1;
  const double e2x = x2 + r2, e2z = z1 + std::sqrt(r1 * r1 - (x2 + r2 - x1) * (x2 + r2 - x1));

  const double tA1 = angle(x1, z1, ax, az, 0), tE2 = angle(x1, z1, e2x, e2z, 0);
  const double tA2 = angle(x2, z2, ax, az, 0), tE1 = angle(x2, z2, e1x, e1z, 0);
  const double tC1 = angle(x1, z1, cx, cz, kPi), tC2 = angle(x2, z2, cx, cz, kPi);

  g.arcs = {
      arc("Z1a", 0, 1, {{4, 0, kInf}, {1, kPi, tC1}}),
      arc("Z1b", 0, 1, {{1, tC1, 1.5 * kPi}, {5, 0, kInf}}),
      arc("Z2a", 0, 1, {{8, 0, kInf}, {3, kPi, tC2}}),
      arc("Z2b", 0, 1, {{3, tC2, 1.5 * kPi}, {9, 0, kInf}}),
      arc("P1a", 1, 1, {{0, 0, tE2}}),
      arc("P1b", 1, 1, {{0, tE2, tA1}}),
      arc("P1c", 1, 1, {{0, tA1, kPi / 2}}),
      arc("P2a", 1, 1, {{2, 0, tA2}}),
      arc("P2b", 1, 1, {{2, tA2, tE1}}),
      arc("P2c", 1, 1, {{2, tE1, kPi / 2}}),
  };
  // Half-line parameters of the corners and crossings.
  const double k1 = r1;                       // (x1+r1, z1+r1) on both max lines of sphere 1
  const double d_on_l1 = z2 + r2 - z1;        // D = (x1+r1, z2+r2)
  const double e1_on_h1 = e1x - x1;
  const double b_on_h1 = x2 + r2 - x1;        // B = (x2+r2, z1+r1)
  const double e2_on_l2 = e2z - z2;
  const double b_on_l2 = z1 + r1 - z2;
  const double k2 = r2;                       // (x2+r2, z2+r2)
  const double d_on_h2 = x1 + r1 - x2;
  g.arcs.push_back(arc("L1a", 1, -1, {{6, 0, k1}}));
  g.arcs.push_back(arc("L1b", 2, 1, {{6, k1, d_on_l1}}));
  g.arcs.push_back(arc("L1c", 2, 1, {{6, d_on_l1, kInf}}));
  g.arcs.push_back(arc("H1a", 1, -1, {{7, 0, e1_on_h1}}));
  g.arcs.push_back(arc("H1b", 1, -1, {{7, e1_on_h1, b_on_h1}}));
  g.arcs.push_back(arc("H1c", 1, -1, {{7, b_on_h1, k1}}));
  g.arcs.push_back(arc("H1d", 2, 1, {{7, k1, kInf}}));
  g.arcs.push_back(arc("L2a", 1, -1, {{10, 0, e2_on_l2}}));
  g.arcs.push_back(arc("L2b", 1, -1, {{10, e2_on_l2, b_on_l2}}));
  g.arcs.push_back(arc("L2c", 1, -1, {{10, b_on_l2, k2}}));
  g.arcs.push_back(arc("L2d", 2, 1, {{10, k2, kInf}}));
  g.arcs.push_back(arc("H2a", 1, -1, {{11, 0, k2}}));
  g.arcs.push_back(arc("H2b", 2, 1, {{11, k2, d_on_h2}}));
  g.arcs.push_back(arc("H2c", 2, 1, {{11, d_on_h2, kInf}}));

  g.double_points = {
      {ax, az, "A"},
      {x2 + r2, z1 + r1, "B"},
      {cx, cz, "C"},
      {x1 + r1, z2 + r2, "D"},
      {e1x, e1z, "E1"},
      {e2x, e2z, "E2"},
      {x1 + r1, z1 + r1, "K1"},
      {x2 + r2, z2 + r2, "K2"},
      {x1 + r1, z1, "(x1+r1,z1)"},
      {x1, z1 + r1, "(x1,z1+r1)"},
      {x2 + r2, z2, "(x2+r2,z2)"},
      {x2, z2 + r2, "(x2,z2+r2)"},
  };
  auto id = [&](const char* n) { return g.arc_index(n); };
  g.paired_arcs = {{id("P1a"), id("L1a")}, {id("P1c"), id("H1a")}, {id("P2a"), id("L2a")}, {id("P2c"), id("H2a")}};
  label_double_points(g);
  return g;
}

}  // namespace

std::pair<double, double> Contour::point_at(double t) const {
  switch (kind) {
    case ContourKind::Arc:
      return {cx + radius * std::cos(t), cy + radius * std::sin(t)};
    case ContourKind::Vertical:
      return {cx, cy + t};
    case ContourKind::Horizontal:
      return {cx + t, cy};
  }
  return {cx, cy};
}

int ExtendedParetoGrid::arc_of(int contour, double t) const {
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (const auto& pc : arcs[i].pieces) {
      if (pc.contour == contour && in_piece(pc, t)) return static_cast<int>(i);
    }
  }
  return -1;
}

int ExtendedParetoGrid::arc_index(const std::string& n) const {
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].name == n) return static_cast<int>(i);
  }
  return -1;
}

ExtendedParetoGrid builtin_grid(ExampleId id, const ExampleSpec& spec) {
  switch (id) {
    case ExampleId::Torus:
      return torus_grid(spec);
    case ExampleId::TwoSpheres:
      return two_spheres_grid(spec);
    case ExampleId::MonodromyBasic:
      break;
  }
  throw InputError("no analytic grid for example " + example_name(id));
}

ExtendedParetoGrid translated_grid(const ExtendedParetoGrid& grid, double dx, double dy) {
  ExtendedParetoGrid g = grid;
  g.name += " (translated)";
  for (auto& c : g.contours) {
    c.cx += dx;
    c.cy += dy;
  }
  for (auto& p : g.double_points) {
    p.x += dx;
    p.y += dy;
  }
  return g;
}

std::vector<Intersection> line_grid_intersections(const ExtendedParetoGrid& grid, const AdmissibleLine& line) {
  const auto [da, db] = line.direction();
  const auto [px, py] = line.basepoint();
  struct Hit {
    double t;
    int contour;
    double ct;
    bool tangent;
  };
  std::vector<Hit> hits;
  for (std::size_t ci = 0; ci < grid.contours.size(); ++ci) {
    const Contour& c = grid.contours[ci];
    const int idx = static_cast<int>(ci);
    if (c.kind == ContourKind::Vertical) {
      const double t = (c.cx - px) / da;
      const double y = py + t * db;
      if (y >= c.cy - kMerge) hits.push_back({t, idx, std::max(0.0, y - c.cy), false});
    } else if (c.kind == ContourKind::Horizontal) {
      const double t = (c.cy - py) / db;
      const double x = px + t * da;
      if (x >= c.cx - kMerge) hits.push_back({t, idx, std::max(0.0, x - c.cx), false});
    } else {
      const double ox = px - c.cx, oy = py - c.cy;
      const double qa = da * da + db * db;
      const double qb = 2 * (ox * da + oy * db);
      const double qc = ox * ox + oy * oy - c.radius * c.radius;
      const double disc = qb * qb - 4 * qa * qc;
      const double scale = std::max(1.0, qb * qb);
      if (disc < -1e-12 * scale) continue;
      const bool tangent = std::abs(disc) <= 1e-12 * scale;
      const double sq = std::sqrt(std::max(0.0, disc));
      std::vector<double> roots = tangent ? std::vector<double>{-qb / (2 * qa)}
                                          : std::vector<double>{(-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)};
      for (double t : roots) {
        double ang = std::atan2(oy + t * db, ox + t * da);
        while (ang < c.t0 - kMerge) ang += 2 * kPi;
        if (ang <= c.t1 + kMerge) hits.push_back({t, idx, std::clamp(ang, c.t0, c.t1), tangent});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
  std::vector<Intersection> out;
  for (const Hit& h : hits) {
    const auto [x, y] = line.point_at(h.t);
    if (out.empty() || std::abs(out.back().t - h.t) > kMerge) {
      Intersection in;
      in.t = h.t;
      in.x = x;
      in.y = y;
      in.value = line.normalized_value(h.t);
      out.push_back(in);
    }
    Intersection& in = out.back();
    in.contours.push_back(h.contour);
    in.tangent = in.tangent || h.tangent;
    const int a = grid.arc_of(h.contour, h.ct);
    if (a >= 0 && std::find(in.arcs.begin(), in.arcs.end(), a) == in.arcs.end()) in.arcs.push_back(a);
  }
  return out;
}

PositionReport position_check(const ExtendedParetoGrid& grid, const PersistenceDiagram& dgm, ParamPoint p,
                              double tol) {
  const auto hits = line_grid_intersections(grid, AdmissibleLine(p));
  PositionReport rep;
  auto check = [&](double v) {
    ++rep.checked;
    double best = kInf;
    for (const auto& h : hits) best = std::min(best, std::abs(h.value - v));
    if (best <= tol) {
      rep.max_error = std::max(rep.max_error, best);
    } else {
      rep.unmatched.push_back(v);
    }
  };
  for (const auto& x : dgm.points) {
    if (x.is_diagonal()) continue;
    check(x.u);
    if (x.is_proper()) check(x.v);
  }
  rep.passes = rep.unmatched.empty();
  return rep;
}

PositionReport position_check(const ExtendedParetoGrid& grid, const SimplicialBifiltration& bif, int degree,
                              ParamPoint p, double tol) {
  return position_check(grid, diagram_at(bif, p, degree), p, tol);
}

std::vector<ArcPairing> pair_arcs(const ExtendedParetoGrid& grid, const SimplicialBifiltration& bif, int degree,
                                  ParamPoint p, double tol) {
  const auto hits = line_grid_intersections(grid, AdmissibleLine(p));
  const PersistenceDiagram dgm = diagram_at(bif, p, degree);
  // Returns the labelled arc at the nearest fitting intersection; ambiguous
  // when another fitting arc lies within tol as well.
  auto locate = [&](double v, int sign, bool& ambiguous, bool& unmatched) {
    int best_arc = -1;
    double best = kInf;
    std::vector<int> within;
    for (const auto& h : hits) {
      const double e = std::abs(h.value - v);
      for (int a : h.arcs) {
        if (grid.arcs[a].degree != degree || grid.arcs[a].sign != sign) continue;
        if (e <= tol && std::find(within.begin(), within.end(), a) == within.end()) within.push_back(a);
        if (e < best) {
          best = e;
          best_arc = a;
        }
      }
    }
    unmatched = unmatched || best > tol;
    ambiguous = ambiguous || within.size() > 1;
    return best_arc;
  };
  std::vector<ArcPairing> out;
  for (const auto& x : dgm.points) {
    ArcPairing ap;
    ap.point = x;
    ap.birth_arc = locate(x.u, 1, ap.ambiguous, ap.unmatched);
    if (x.is_proper()) ap.death_arc = locate(x.v, -1, ap.ambiguous, ap.unmatched);
    out.push_back(ap);
  }
  return out;
}

std::vector<GridPoint> annihilation_catalog(const ExtendedParetoGrid& grid) {
  std::vector<GridPoint> out;
  for (auto [i, j] : grid.paired_arcs) {
    const auto ei = endpoints(grid, grid.arcs[i]);
    const auto ej = endpoints(grid, grid.arcs[j]);
    for (const auto& p : ei) {
      for (const auto& q : ej) {
        if (std::hypot(p.first - q.first, p.second - q.second) < 1e-7) {
          out.push_back({p.first, p.second, grid.arcs[i].name + "/" + grid.arcs[j].name});
        }
      }
    }
  }
  return out;
}

std::vector<ParamPoint> double_point_lines(const ExtendedParetoGrid& grid) {
  std::vector<ParamPoint> out;
  const auto& d = grid.double_points;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      double dx = d[j].x - d[i].x, dy = d[j].y - d[i].y;
      if (dx < 0) {
        dx = -dx;
        dy = -dy;
      }
      if (!(dx > 0 && dy > 0)) continue;
      const double a = dx / (dx + dy);
      out.push_back({a, d[i].x - a * (d[i].x + d[i].y)});
    }
  }
  return out;
}

}  // namespace cmatch
