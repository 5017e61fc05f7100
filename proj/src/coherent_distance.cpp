#include "cmatch/coherent_distance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include "cmatch/errors.hpp"
#include "cmatch/parallel.hpp"

namespace cmatch {

namespace {

Permutation identity_perm(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  return p;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
  return r;
}

TransportConfig with_region(TransportConfig cfg, const ParameterRegion& region) {
  if (!(cfg.separation > 0.0)) cfg.separation = region.separation;
  return cfg;
}

double dist(ParamPoint p, ParamPoint q) { return std::hypot(p.a - q.a, p.b - q.b); }

}  // namespace

PairPermutationGroup close_group(ParamPoint basepoint, std::vector<std::pair<Permutation, Permutation>> generators,
                                 std::size_t left_size, std::size_t right_size, std::size_t cap) {
  PairPermutationGroup g;
  g.basepoint = basepoint;
  g.generators = std::move(generators);
  using Elem = std::pair<Permutation, Permutation>;
  std::set<Elem> seen;
  Elem id{identity_perm(left_size), identity_perm(right_size)};
  g.elements.push_back(id);
  seen.insert(id);
  for (std::size_t k = 0; k < g.elements.size(); ++k) {
    for (const auto& gen : g.generators) {
      const Elem& e = g.elements[k];
      Elem prod{compose(gen.first, e.first), compose(gen.second, e.second)};
      if (seen.insert(prod).second) {
        g.elements.push_back(std::move(prod));
        if (g.elements.size() > cap) throw SizeError("monodromy group exceeds the configured cap");
      }
    }
  }
  return g;
}

Matching act(const std::pair<Permutation, Permutation>& h, const Matching& sigma) {
  Matching m;
  for (auto [l, r] : sigma.pairs) m.pairs.emplace_back(h.first[l], h.second[r]);
  for (int l : sigma.left_to_delta) m.left_to_delta.push_back(h.first[l]);
  for (int r : sigma.right_to_delta) m.right_to_delta.push_back(h.second[r]);
  m.canonicalize();
  return m;
}

PairPermutationGroup monodromy_group(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                                     const ParameterRegion& region, ParamPoint basepoint, const TransportConfig& cfg) {
  const TransportConfig c = with_region(cfg, region);
  const std::size_t nf = diagram_at(f, basepoint, degree).points.size();
  const std::size_t ng = diagram_at(g, basepoint, degree).points.size();
  std::vector<std::pair<Permutation, Permutation>> gens;
  for (const auto& loop : generator_loops(region, basepoint)) {
    gens.emplace_back(loop_permutation(f, degree, loop, c), loop_permutation(g, degree, loop, c));
  }
  return close_group(basepoint, std::move(gens), nf, ng);
}

SampleNetwork build_network(const ParameterRegion& region, ParamPoint basepoint, const SampleSpec& spec) {
  region.validate();
  if (!region.contains(basepoint)) throw InputError("basepoint is not in the region");
  if (spec.lattice_n < 2) throw InputError("sample lattice needs at least 2 points per side");
  const Rect& R = region.rect;
  std::vector<double> as, bs;
  for (int i = 0; i < spec.lattice_n; ++i) {
    as.push_back(R.a0 + (R.a1 - R.a0) * i / (spec.lattice_n - 1));
    bs.push_back(R.b0 + (R.b1 - R.b0) * i / (spec.lattice_n - 1));
  }
  if (R.a0 < 0.5 && 0.5 < R.a1 && std::find(as.begin(), as.end(), 0.5) == as.end()) {
    as.insert(std::upper_bound(as.begin(), as.end(), 0.5), 0.5);
  }
  SampleNetwork net;
  net.a_step = (R.a1 - R.a0) / (spec.lattice_n - 1);
  net.b_step = (R.b1 - R.b0) / (spec.lattice_n - 1);
  net.spacing = std::max(net.a_step, net.b_step);

  std::vector<ParamPoint> nodes{basepoint};
  std::vector<char> boundary{0};
  const int na = static_cast<int>(as.size());
  const int nb = static_cast<int>(bs.size());
  std::vector<int> grid(static_cast<std::size_t>(na) * nb, -1);
  for (int j = 0; j < nb; ++j) {
    for (int i = 0; i < na; ++i) {
      const ParamPoint p{as[i], bs[j]};
      if (!region.contains(p)) continue;
      int id;
      if (p == basepoint) {
        id = 0;
      } else {
        id = static_cast<int>(nodes.size());
        nodes.push_back(p);
        boundary.push_back(0);
      }
      grid[static_cast<std::size_t>(j) * na + i] = id;
      if (i == 0 || j == 0 || i == na - 1 || j == nb - 1) boundary[id] = 1;
    }
  }
  std::vector<std::set<int>> adj(nodes.size());
  auto link = [&](int x, int y) {
    if (x == y || x < 0 || y < 0) return;
    if (!region.contains_segment(nodes[x], nodes[y])) return;
    if (adj.size() < nodes.size()) adj.resize(nodes.size());
    adj[x].insert(y);
    adj[y].insert(x);
  };
  for (int j = 0; j < nb; ++j) {
    for (int i = 0; i < na; ++i) {
      const int id = grid[static_cast<std::size_t>(j) * na + i];
      if (i + 1 < na) link(id, grid[static_cast<std::size_t>(j) * na + i + 1]);
      if (j + 1 < nb) link(id, grid[static_cast<std::size_t>(j + 1) * na + i]);
    }
  }
  const std::size_t lattice_count = nodes.size();
  // Basepoint joins the corners of its lattice cell.
  {
    const int i = static_cast<int>(std::upper_bound(as.begin(), as.end(), basepoint.a) - as.begin()) - 1;
    const int j = static_cast<int>(std::upper_bound(bs.begin(), bs.end(), basepoint.b) - bs.begin()) - 1;
    for (int dj = 0; dj <= 1; ++dj) {
      for (int di = 0; di <= 1; ++di) {
        const int x = std::clamp(i + di, 0, na - 1), y = std::clamp(j + dj, 0, nb - 1);
        link(0, grid[static_cast<std::size_t>(y) * na + x]);
      }
    }
  }
  // Rings just outside every excluded disk.
  for (const auto& d : region.excluded) {
    std::vector<int> ring;
    for (int k = 0; k < spec.ring_points; ++k) {
      const double th = 2.0 * std::numbers::pi * k / spec.ring_points;
      const ParamPoint p{d.center.a + spec.ring_factor * d.radius * std::cos(th),
                         d.center.b + spec.ring_factor * d.radius * std::sin(th)};
      if (!region.contains(p)) {
        ring.push_back(-1);
        continue;
      }
      ring.push_back(static_cast<int>(nodes.size()));
      nodes.push_back(p);
      boundary.push_back(1);
      adj.resize(nodes.size());
    }
    for (std::size_t k = 0; k < ring.size(); ++k) link(ring[k], ring[(k + 1) % ring.size()]);
    for (int id : ring) {
      if (id < 0) continue;
      std::vector<std::pair<double, int>> near;
      for (std::size_t q = 0; q < lattice_count; ++q) near.emplace_back(dist(nodes[id], nodes[q]), static_cast<int>(q));
      std::sort(near.begin(), near.end());
      for (std::size_t q = 0; q < std::min<std::size_t>(8, near.size()); ++q) {
        if (region.contains_segment(nodes[id], nodes[near[q].second])) {
          link(id, near[q].second);
          break;
        }
      }
    }
  }
  adj.resize(nodes.size());

  // BFS tree from the basepoint; unreachable samples are dropped.
  std::vector<int> parent(nodes.size(), -2), depth(nodes.size(), -1);
  std::deque<int> queue{0};
  parent[0] = -1;
  depth[0] = 0;
  std::vector<int> visit;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    visit.push_back(u);
    for (int v : adj[u]) {
      if (parent[v] != -2) continue;
      parent[v] = u;
      depth[v] = depth[u] + 1;
      queue.push_back(v);
    }
  }
  std::vector<int> remap(nodes.size(), -1);
  for (std::size_t k = 0; k < visit.size(); ++k) remap[visit[k]] = static_cast<int>(k);
  for (int u : visit) {
    net.nodes.push_back(nodes[u]);
    net.parent.push_back(parent[u] < 0 ? -1 : remap[parent[u]]);
    net.on_boundary.push_back(boundary[u]);
    const std::size_t dpt = static_cast<std::size_t>(depth[u]);
    if (net.layers.size() <= dpt) net.layers.resize(dpt + 1);
    net.layers[dpt].push_back(remap[u]);
  }
  return net;
}

NetworkTransport transport_network(const SimplicialBifiltration& bif, int degree, const SampleNetwork& net,
                                   const TransportConfig& cfg, int threads) {
  NetworkTransport out;
  const std::size_t n = net.nodes.size();
  out.diagrams.resize(n);
  out.tables.resize(n);
  out.edge_motion.assign(n, 0.0);
  out.diagrams[0] = diagram_at(bif, net.nodes[0], degree);
  out.tables[0] = identity_perm(out.diagrams[0].points.size());
  for (std::size_t layer = 1; layer < net.layers.size(); ++layer) {
    const auto& ids = net.layers[layer];
    parallel_for(ids.size(), threads, [&](std::size_t k) {
      const int v = ids[k];
      const int u = net.parent[v];
      const ParamPath edge({net.nodes[u], net.nodes[v]});
      DiagramTransport t = transport_diagram(bif, degree, edge, cfg);
      if (!(t.start.points == out.diagrams[u].points)) throw ConsistencyError("network transport start mismatch");
      std::vector<int> table(out.tables[u].size());
      double motion = 0.0;
      for (std::size_t i = 0; i < table.size(); ++i) {
        table[i] = t.table[out.tables[u][i]];
      }
      for (std::size_t i = 0; i < t.table.size(); ++i) {
        motion = std::max(motion, point_distance(t.start.points[i], t.end.points[t.table[i]]));
      }
      out.diagrams[v] = std::move(t.end);
      out.tables[v] = std::move(table);
      out.edge_motion[v] = motion;
    });
  }
  return out;
}

CoherentEvaluator::CoherentEvaluator(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                                     const ParameterRegion& region, ParamPoint basepoint,
                                     const PairPermutationGroup& group, const SampleSpec& spec,
                                     const TransportConfig& cfg)
    : f_(&f), g_(&g), degree_(degree), group_(group) {
  const TransportConfig c = with_region(cfg, region);
  net_ = build_network(region, basepoint, spec);
  tf_ = transport_network(f, degree, net_, c, spec.threads);
  tg_ = transport_network(g, degree, net_, c, spec.threads);
  if (group_.elements.empty()) {
    group_ = close_group(basepoint, {}, tf_.diagrams[0].points.size(), tg_.diagrams[0].points.size());
  }
  for (const auto& e : group_.elements) {
    if (e.first.size() != tf_.diagrams[0].points.size() || e.second.size() != tg_.diagrams[0].points.size()) {
      throw InputError("group elements do not act on the basepoint diagrams");
    }
  }
}

double CoherentEvaluator::transported_cost(const Matching& sigma, std::size_t h, std::size_t node) const {
  const auto& [pf, pg] = group_.elements[h];
  const auto& Tf = tf_.tables[node];
  const auto& Tg = tg_.tables[node];
  const auto& Df = tf_.diagrams[node].points;
  const auto& Dg = tg_.diagrams[node].points;
  const DiagramPoint delta = DiagramPoint::diagonal();
  double c = 0.0;
  for (auto [l, r] : sigma.pairs) c = std::max(c, point_distance(Df[Tf[pf[l]]], Dg[Tg[pg[r]]]));
  for (int l : sigma.left_to_delta) c = std::max(c, point_distance(Df[Tf[pf[l]]], delta));
  for (int r : sigma.right_to_delta) c = std::max(c, point_distance(delta, Dg[Tg[pg[r]]]));
  return c;
}

CoherentCostReport CoherentEvaluator::coherent_cost(const Matching& sigma) const {
  if (!sigma.valid_for(f_basepoint().points.size(), g_basepoint().points.size())) {
    throw InputError("matching does not fit the basepoint diagrams");
  }
  CoherentCostReport rep;
  rep.sigma = sigma;
  rep.basepoint_cost = transported_cost(sigma, 0, 0);
  rep.value = rep.basepoint_cost;
  rep.witness = net_.nodes[0];
  for (std::size_t h = 0; h < group_.elements.size(); ++h) {
    for (std::size_t v = 0; v < net_.nodes.size(); ++v) {
      const double c = transported_cost(sigma, h, v);
      if (c > rep.value) {
        rep.value = c;
        rep.group_index = static_cast<int>(h);
        rep.witness = net_.nodes[v];
      }
    }
  }
  return rep;
}

std::vector<double> CoherentEvaluator::bottleneck_field() const {
  std::vector<double> out(net_.nodes.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = bottleneck_distance(tf_.diagrams[v], tg_.diagrams[v]).value;
  return out;
}

double CoherentEvaluator::tolerance() const {
  double t = 0.0;
  for (std::size_t v = 0; v < net_.nodes.size(); ++v) t = std::max(t, tf_.edge_motion[v] + tg_.edge_motion[v]);
  return t;
}

double CoherentEvaluator::bound_tolerance() const {
  double k = 0.0;
  for (const auto& p : net_.nodes) {
    k = std::max(k, step_bound_constant(f_->sup_norm(), p, net_.spacing) +
                        step_bound_constant(g_->sup_norm(), p, net_.spacing));
  }
  return k * net_.spacing;
}

CoherentCostReport coherent_cost(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                                 const ParameterRegion& region, ParamPoint basepoint, const Matching& sigma,
                                 const PairPermutationGroup& group, const SampleSpec& spec, const TransportConfig& cfg) {
  return CoherentEvaluator(f, g, degree, region, basepoint, group, spec, cfg).coherent_cost(sigma);
}

CoherentDistanceReport coherent_matching_distance(const CoherentEvaluator& ev, std::size_t cap) {
  CoherentDistanceReport rep;
  rep.group_order = ev.group().order();
  rep.nodes = ev.network().nodes.size();
  rep.tolerance = ev.tolerance();
  rep.bound_tolerance = ev.bound_tolerance();
  const auto field = ev.bottleneck_field();
  rep.dmatch_region = *std::max_element(field.begin(), field.end());
  const auto& d1 = ev.f_basepoint();
  const auto& d2 = ev.g_basepoint();
  if (d1.improper_count() != d2.improper_count()) {
    rep.value = kInf;
    rep.best.value = kInf;
    rep.best.basepoint_cost = kInf;
    rep.best.witness = ev.network().nodes[0];
    return rep;
  }
  const auto sigmas = enumerate_matchings(d1, d2, cap);
  rep.matchings = sigmas.size();
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    CoherentCostReport c = ev.coherent_cost(sigmas[k]);
    if (k == 0 || c.value < rep.value) {
      rep.value = c.value;
      rep.best = std::move(c);
    }
  }
  return rep;
}

CoherentDistanceReport coherent_matching_distance(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                                  int degree, const ParameterRegion& region, ParamPoint basepoint,
                                                  const SampleSpec& spec, const TransportConfig& cfg) {
  const PairPermutationGroup group = monodromy_group(f, g, degree, region, basepoint, cfg);
  CoherentEvaluator ev(f, g, degree, region, basepoint, group, spec, cfg);
  return coherent_matching_distance(ev);
}

DmatchResult dmatch(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree, const Rect& rect,
                    int grid_n, int threads) {
  if (grid_n < 2) throw InputError("heatmap grid needs at least 2 points per side");
  if (!rect.valid()) throw InputError("rectangle must satisfy 0 < a0 < a1 < 1 and b0 < b1");
  DmatchResult res;
  res.table.resize(static_cast<std::size_t>(grid_n) * grid_n);
  parallel_for(res.table.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k % grid_n);
    const int j = static_cast<int>(k / grid_n);
    const ParamPoint p{rect.a0 + (rect.a1 - rect.a0) * i / (grid_n - 1),
                       rect.b0 + (rect.b1 - rect.b0) * j / (grid_n - 1)};
    res.table[k] = {p.a, p.b, bottleneck_distance(diagram_at(f, p, degree), diagram_at(g, p, degree)).value};
  });
  res.value = -1.0;
  for (const auto& row : res.table) {
    if (row.value > res.value) {
      res.value = row.value;
      res.argmax = {row.a, row.b};
    }
  }
  return res;
}

MaxPrincipleReport max_principle_check(const CoherentEvaluator& ev, const ParameterRegion& region,
                                       const Matching& sigma) {
  const auto& net = ev.network();
  MaxPrincipleReport rep;
  rep.max_value = -1.0;
  std::vector<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t h = 0; h < ev.group().order(); ++h) {
    for (std::size_t v = 0; v < net.nodes.size(); ++v) {
      const double c = ev.transported_cost(sigma, h, v);
      if (c > rep.max_value) {
        rep.max_value = c;
        best.clear();
      }
      if (c == rep.max_value) best.emplace_back(h, v);
    }
  }
  rep.maximizers = best.size();
  auto to_half = [](ParamPoint p) { return std::abs(p.a - 0.5); };
  auto to_boundary = [&](ParamPoint p) {
    const Rect& R = region.rect;
    double d = std::min({p.a - R.a0, R.a1 - p.a, p.b - R.b0, R.b1 - p.b});
    for (const auto& disk : region.excluded) d = std::min(d, dist(p, disk.center) - disk.radius);
    return d;
  };
  const double slack = 1e-12;
  bool first = true;
  for (auto [h, v] : best) {
    const ParamPoint p = net.nodes[v];
    const bool ok = to_half(p) <= net.a_step + slack || to_boundary(p) <= net.spacing + slack;
    if (first || (ok && !rep.passes)) {
      rep.argmax = p;
      rep.group_index = static_cast<int>(h);
      rep.distance_to_half = to_half(p);
      rep.distance_to_boundary = to_boundary(p);
      first = false;
    }
    rep.passes = rep.passes || ok;
  }
  return rep;
}

BasepointReport basepoint_independence_check(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                             int degree, const ParameterRegion& region, ParamPoint first,
                                             ParamPoint second, const SampleSpec& spec, const TransportConfig& cfg) {
  const auto r1 = coherent_matching_distance(f, g, degree, region, first, spec, cfg);
  const auto r2 = coherent_matching_distance(f, g, degree, region, second, spec, cfg);
  BasepointReport rep;
  rep.value_first = r1.value;
  rep.value_second = r2.value;
  rep.tolerance = r1.tolerance + r2.tolerance;
  rep.passes = (r1.value == r2.value) || std::abs(r1.value - r2.value) <= rep.tolerance;
  return rep;
}

PseudoMetricReport pseudo_metric_check(const SimplicialBifiltration& f, const SimplicialBifiltration& g,
                                       const SimplicialBifiltration& h, int degree, const ParameterRegion& region,
                                       ParamPoint basepoint, const SampleSpec& spec, const TransportConfig& cfg) {
  const auto fg = coherent_matching_distance(f, g, degree, region, basepoint, spec, cfg);
  const auto gf = coherent_matching_distance(g, f, degree, region, basepoint, spec, cfg);
  const auto gh = coherent_matching_distance(g, h, degree, region, basepoint, spec, cfg);
  const auto fh = coherent_matching_distance(f, h, degree, region, basepoint, spec, cfg);
  PseudoMetricReport rep;
  rep.fg = fg.value;
  rep.gf = gf.value;
  rep.gh = gh.value;
  rep.fh = fh.value;
  rep.tolerance = std::max({fg.tolerance, gh.tolerance, fh.tolerance});
  rep.symmetric = fg.value == gf.value;
  rep.triangle = fh.value <= fg.value + gh.value + 2.0 * rep.tolerance;
  return rep;
}

FamilyReport family_distances(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                              const std::vector<ParameterRegion>& regions, const std::vector<ParamPoint>& basepoints,
                              const SampleSpec& spec, const TransportConfig& cfg) {
  if (regions.size() != basepoints.size()) throw InputError("one basepoint per region is required");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Rect& x = regions[i].rect;
      const Rect& y = regions[j].rect;
      if (x.a0 <= y.a1 && y.a0 <= x.a1 && x.b0 <= y.b1 && y.b0 <= x.b1) {
        throw InputError("family regions must be disjoint");
      }
    }
  }
  FamilyReport rep;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    rep.per_region.push_back(coherent_matching_distance(f, g, degree, regions[i], basepoints[i], spec, cfg));
    const auto& r = rep.per_region.back();
    rep.cd_family = std::max(rep.cd_family, r.value);
    rep.dmatch_family = std::max(rep.dmatch_family, r.dmatch_region);
    rep.tolerance = std::max(rep.tolerance, r.tolerance);
  }
  rep.ordered = rep.dmatch_family <= rep.cd_family + rep.tolerance;
  return rep;
}

}  // namespace cmatch
