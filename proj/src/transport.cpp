#include "cmatch/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmatch/errors.hpp"

namespace cmatch {

void TransportConfig::validate() const {
  if (!(0.0 < min_step && min_step < initial_step && initial_step <= 1.0)) {
    throw InputError("transport steps must satisfy 0 < min_step < initial_step <= 1");
  }
  if (!(safety_factor > 0.0 && safety_factor < 1.0)) throw InputError("safety_factor must lie in (0,1)");
  if (!(separation > 0.0)) throw InputError("transport needs a positive separation constant");
}

double step_bound_constant(double sup_f, ParamPoint p, double eps) {
  const double a = p.a;
  const double num = sup_f + std::max(a, 1.0 - a) + std::abs(p.b);
  const double den = std::min(a * (a - eps), (1.0 - a) * (1.0 - a - eps));
  return den > 0.0 ? num / den : kInf;
}

PointTrack DiagramTransport::track(int start_index) const {
  PointTrack t;
  t.path = path;
  for (std::size_t k = 0; k < s_samples.size(); ++k) {
    t.samples.emplace_back(s_samples[k], diagrams[k].points[states[k][start_index]]);
  }
  return t;
}

namespace {

std::string where(const ParamPoint& p) {
  return "(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")";
}

void check_diagonal_distance(const PersistenceDiagram& d, double c, ParamPoint p) {
  const DiagramPoint delta = DiagramPoint::diagonal();
  for (const auto& x : d.points) {
    if (point_distance(x, delta) < c) {
      throw RegionViolation("a diagram point is within c of the diagonal at " + where(p));
    }
  }
}

// Matches every point of `cur` to its nearest point of `next`. Returns false
// if some match is not unambiguous at the scale of c.
bool continue_points(const PersistenceDiagram& cur, const PersistenceDiagram& next, double accept, double reject,
                     std::vector<int>& map, double& motion) {
  map.assign(cur.points.size(), -1);
  motion = 0.0;
  std::vector<char> used(next.points.size(), 0);
  for (std::size_t i = 0; i < cur.points.size(); ++i) {
    double best = kInf, second = kInf;
    int arg = -1;
    for (std::size_t j = 0; j < next.points.size(); ++j) {
      const double d = point_distance(cur.points[i], next.points[j]);
      if (d < best) {
        second = best;
        best = d;
        arg = static_cast<int>(j);
      } else if (d < second) {
        second = d;
      }
    }
    if (arg < 0 || !(best < accept) || !(second > reject) || used[arg]) return false;
    used[arg] = 1;
    map[i] = arg;
    motion = std::max(motion, best);
  }
  return true;
}

}  // namespace

DiagramTransport transport_diagram(const SimplicialBifiltration& bif, int degree, const ParamPath& path,
                                   const TransportConfig& cfg) {
  cfg.validate();
  DiagramTransport out;
  out.path = path;
  out.start = diagram_at(bif, path.at(0.0), degree);
  const std::size_t n = out.start.points.size();
  const double c = cfg.separation;
  check_diagonal_distance(out.start, c, path.at(0.0));

  std::vector<int> state(n);
  for (std::size_t i = 0; i < n; ++i) state[i] = static_cast<int>(i);
  out.s_samples.push_back(0.0);
  out.states.push_back(state);
  out.diagrams.push_back(out.start);

  const double len = path.length();
  double step = cfg.initial_step;
  if (cfg.seed_from_bound && len > 0.0) {
    const ParamPoint p0 = path.at(0.0);
    const double k0 = step_bound_constant(bif.sup_norm(), p0, 0.0);
    double eps = cfg.safety_factor * c / k0;
    eps = std::min(eps, 0.5 * std::min(p0.a, 1.0 - p0.a));
    step = std::clamp(eps / len, cfg.min_step, cfg.initial_step);
  }

  double s = 0.0;
  PersistenceDiagram cur = out.start;
  std::vector<int> map;
  while (s < 1.0 && len > 0.0) {
    const double s_next = std::min(1.0, s + step);
    const ParamPoint p = path.at(s_next);
    PersistenceDiagram next = diagram_at(bif, p, degree);
    if (next.points.size() != n) {
      throw RegionViolation("diagram cardinality changes along the path near " + where(p));
    }
    double motion = 0.0;
    if (continue_points(cur, next, cfg.safety_factor * c, c, map, motion)) {
      check_diagonal_distance(next, c, p);
      for (std::size_t i = 0; i < n; ++i) state[i] = map[state[i]];
      out.max_step_motion = std::max(out.max_step_motion, motion);
      out.s_samples.push_back(s_next);
      out.states.push_back(state);
      out.diagrams.push_back(next);
      cur = std::move(next);
      s = s_next;
      // Diagram motion is roughly linear in the step: aim for 70% of the
      // acceptance threshold, growing by at most a factor of 2.
      const double target = 0.7 * cfg.safety_factor * c;
      const double grow = motion > 0.0 ? std::clamp(target / motion, 0.5, 2.0) : 2.0;
      step = std::clamp(step * grow, cfg.min_step, cfg.initial_step);
    } else {
      ++out.rejected_steps;
      step /= 2.0;
      if (step < cfg.min_step) {
        throw SingularityEncountered("ambiguous continuation of diagram points near " + where(p));
      }
    }
  }
  out.end = cur;
  out.table = state;
  std::vector<char> hit(n, 0);
  for (int t : out.table) {
    if (t < 0 || static_cast<std::size_t>(t) >= n || hit[t]) throw ConsistencyError("transport table is not a bijection");
    hit[t] = 1;
  }
  return out;
}

PointTransport transport_point(const SimplicialBifiltration& bif, int degree, const ParamPath& path,
                               const DiagramPoint& x, const TransportConfig& cfg) {
  PointTransport res;
  if (x.is_diagonal()) {
    res.end = x;
    res.track.path = path;
    res.track.samples = {{0.0, x}, {1.0, x}};
    return res;
  }
  DiagramTransport t = transport_diagram(bif, degree, path, cfg);
  int idx = -1;
  for (std::size_t i = 0; i < t.start.points.size(); ++i) {
    if (point_distance(x, t.start.points[i]) <= cfg.membership_tol) {
      idx = static_cast<int>(i);
      break;
    }
  }
  if (idx < 0) throw InputError("point is not in the diagram at the start of the path");
  res.end = t.end.points[t.table[idx]];
  res.track = t.track(idx);
  return res;
}

Matching transport_matching(const DiagramTransport& tf, const DiagramTransport& tg, const Matching& sigma) {
  if (!sigma.valid_for(tf.start.points.size(), tg.start.points.size())) {
    throw InputError("matching does not fit the start diagrams");
  }
  Matching m;
  for (auto [l, r] : sigma.pairs) m.pairs.emplace_back(tf.table[l], tg.table[r]);
  for (int l : sigma.left_to_delta) m.left_to_delta.push_back(tf.table[l]);
  for (int r : sigma.right_to_delta) m.right_to_delta.push_back(tg.table[r]);
  m.canonicalize();
  return m;
}

Matching transport_matching(const SimplicialBifiltration& f, const SimplicialBifiltration& g, int degree,
                            const ParamPath& path, const Matching& sigma, const TransportConfig& cfg) {
  return transport_matching(transport_diagram(f, degree, path, cfg), transport_diagram(g, degree, path, cfg), sigma);
}

std::vector<int> loop_permutation(const SimplicialBifiltration& bif, int degree, const ParamPath& loop,
                                  const TransportConfig& cfg) {
  if (!loop.closed()) throw InputError("loop must start and end at the same point");
  DiagramTransport t = transport_diagram(bif, degree, loop, cfg);
  if (!(t.start.points == t.end.points)) throw ConsistencyError("diagram at the end of a loop differs from the start");
  return t.table;
}

}  // namespace cmatch
