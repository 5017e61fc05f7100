#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cmatch/errors.hpp"
#include "cmatch/examples.hpp"
#include "cmatch/transport.hpp"
#include "test_support.hpp"

using namespace cmatch;
using cmatch::testing::Rng;

namespace {

const SimplicialBifiltration& monodromy32() {
  static const SimplicialBifiltration bif = [] {
    ExampleSpec spec;
    spec.resolution = 32;
    spec.x0 = -1.5;
    spec.x1 = 1.5;
    return generate(spec);
  }();
  return bif;
}

// A rectangle of the monodromy example where the three degree-0 points stay apart.
const Rect kQuiet{0.4, 0.7, 0.4, 1.0};

TransportConfig quiet_config() {
  static const double c = [] {
    ParameterRegion u;
    u.rect = kQuiet;
    u.separation = 1.0;
    return choose_separation({&monodromy32()}, 0, region_lattice(u, 9));
  }();
  TransportConfig cfg;
  cfg.separation = c;
  return cfg;
}

ParamPoint random_point(Rng& rng, const Rect& r) { return {rng.uniform(r.a0, r.a1), rng.uniform(r.b0, r.b1)}; }

ParamPath random_path(Rng& rng, ParamPoint from, ParamPoint to, const Rect& r) {
  std::vector<ParamPoint> pts{from};
  const int mid = rng.integer(0, 2);
  for (int k = 0; k < mid; ++k) pts.push_back(random_point(rng, r));
  pts.push_back(to);
  return ParamPath(pts);
}

std::vector<int> identity(std::size_t n) {
  std::vector<int> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
  return id;
}

double sup_coordinate_distance(const DiagramPoint& x, const DiagramPoint& y) {
  if (x.is_improper() && y.is_improper()) return std::abs(x.u - y.u);
  return std::max(std::abs(x.u - y.u), std::abs(x.v - y.v));
}

}  // namespace

TEST_CASE("step bound constant", "[transport]") {
  CHECK(step_bound_constant(1.0, {0.5, 0.0}, 0.0) == Catch::Approx(1.5 / 0.25));
  CHECK(step_bound_constant(2.0, {0.25, -1.0}, 0.05) == Catch::Approx(3.75 / (0.25 * 0.2)));
  CHECK(step_bound_constant(1.0, {0.1, 0.0}, 0.1) == kInf);
}

TEST_CASE("transport configuration validation", "[transport]") {
  TransportConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.separation = 0.1;
  CHECK_NOTHROW(cfg.validate());
  cfg.safety_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("constant path transports every point to itself", "[transport]") {
  const auto& f = monodromy32();
  const ParamPath still({{0.5, 0.6}});
  const auto t = transport_diagram(f, 0, still, quiet_config());
  CHECK(t.table == identity(t.start.size()));
  for (const auto& x : t.start.points) CHECK(transport_point(f, 0, still, x, quiet_config()).end == x);
}

TEST_CASE("the diagonal goes to the diagonal", "[transport]") {
  const auto r = transport_point(monodromy32(), 0, ParamPath({{0.4, 0.4}, {0.7, 1.0}}), DiagramPoint::diagonal(),
                                 quiet_config());
  CHECK(r.end.is_diagonal());
}

TEST_CASE("transport of a point outside the start diagram is rejected", "[transport]") {
  CHECK_THROWS_AS(transport_point(monodromy32(), 0, ParamPath({{0.4, 0.4}, {0.7, 1.0}}),
                                  DiagramPoint::proper(-7, 7), quiet_config()),
                  InputError);
}

TEST_CASE("tracks move less than the acceptance threshold per step", "[transport]") {
  const auto cfg = quiet_config();
  const auto t = transport_diagram(monodromy32(), 0, ParamPath({{0.4, 0.4}, {0.7, 1.0}, {0.4, 1.0}}), cfg);
  REQUIRE(t.start.size() == 3);
  CHECK(t.end.points == diagram_at(monodromy32(), {0.4, 1.0}, 0).points);
  CHECK(t.max_step_motion < cfg.safety_factor * cfg.separation);
  for (std::size_t i = 0; i < t.start.size(); ++i) {
    const PointTrack tr = t.track(static_cast<int>(i));
    CHECK(tr.samples.front().second == t.start.points[i]);
    CHECK(tr.samples.back().second == t.end.points[t.table[i]]);
    for (std::size_t k = 0; k + 1 < tr.samples.size(); ++k) {
      CHECK(tr.samples[k].first < tr.samples[k + 1].first);
      CHECK(point_distance(tr.samples[k].second, tr.samples[k + 1].second) < cfg.safety_factor * cfg.separation);
    }
  }
}

namespace {

struct RandomPaths {
  ParamPoint p, q, r;
  ParamPath first, second;
};

RandomPaths draw_paths(Rng& rng) {
  RandomPaths x;
  x.p = random_point(rng, kQuiet);
  x.q = random_point(rng, kQuiet);
  x.r = random_point(rng, kQuiet);
  x.first = random_path(rng, x.p, x.q, kQuiet);
  x.second = random_path(rng, x.q, x.r, kQuiet);
  return x;
}

}  // namespace

TEST_CASE("transport along a concatenation is the composition", "[transport][property]") {
  const auto& f = monodromy32();
  const auto cfg = quiet_config();
  Rng rng(51);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = draw_paths(rng);
    const auto t1 = transport_diagram(f, 0, x.first, cfg);
    const auto t2 = transport_diagram(f, 0, x.second, cfg);
    const auto t12 = transport_diagram(f, 0, x.first.then(x.second), cfg);
    for (std::size_t i = 0; i < t1.table.size(); ++i) CHECK(t12.table[i] == t2.table[t1.table[i]]);
  }
}

TEST_CASE("a path followed by its reverse transports to the identity", "[transport][property]") {
  const auto& f = monodromy32();
  const auto cfg = quiet_config();
  Rng rng(55);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = draw_paths(rng);
    CHECK(transport_diagram(f, 0, x.first.then(x.first.reversed()), cfg).table == identity(3));
  }
}

TEST_CASE("paths with common endpoints in a simply connected quiet region agree", "[transport][property]") {
  const auto& f = monodromy32();
  const auto cfg = quiet_config();
  Rng rng(56);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = draw_paths(rng);
    const auto t12 = transport_diagram(f, 0, x.first.then(x.second), cfg);
    CHECK(transport_diagram(f, 0, random_path(rng, x.p, x.r, kQuiet), cfg).table == t12.table);
  }
}

TEST_CASE("transport is continuous in the path", "[transport][property]") {
  const auto& f = monodromy32();
  const auto cfg = quiet_config();
  Rng rng(52);
  int compared = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const ParamPath base = random_path(rng, random_point(rng, kQuiet), random_point(rng, kQuiet), kQuiet);
    const double eta = 0.05;
    double c_eta = 0.0;
    for (int k = 0; k <= 1000; ++k) c_eta = std::max(c_eta, step_bound_constant(f.sup_norm(), base.at(k / 1000.0), eta));
    const double bound = std::min(eta, cfg.separation / c_eta);
    std::vector<ParamPoint> moved = base.waypoints;
    for (std::size_t k = 1; k < moved.size(); ++k) {
      const double da = rng.uniform(-bound, bound) / 3, db = rng.uniform(-bound, bound) / 3;
      moved[k].a = std::clamp(moved[k].a + da, kQuiet.a0, kQuiet.a1);
      moved[k].b = std::clamp(moved[k].b + db, kQuiet.b0, kQuiet.b1);
    }
    const ParamPath other(moved);
    // Arc-length reparameterization can stretch the deviation past the
    // waypoint displacement, so it is measured on the paths themselves.
    double sup_dev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const ParamPoint x = base.at(k / 1000.0), y = other.at(k / 1000.0);
      sup_dev = std::max({sup_dev, std::abs(x.a - y.a), std::abs(x.b - y.b)});
    }
    if (sup_dev > bound) continue;
    ++compared;
    const auto t = transport_diagram(f, 0, base, cfg);
    const auto u = transport_diagram(f, 0, other, cfg);
    for (std::size_t i = 0; i < t.start.size(); ++i) {
      INFO("deviation " << sup_dev << " bound constant " << c_eta);
      CHECK(sup_coordinate_distance(t.end.points[t.table[i]], u.end.points[u.table[i]]) <= sup_dev * c_eta);
    }
  }
  CHECK(compared >= 4);
}

TEST_CASE("transport is continuous in the function", "[transport][property]") {
  const auto& f = monodromy32();
  Rng rng(53);
  for (int trial = 0; trial < 4; ++trial) {
    // A uniform rescaling moves every value by at most lambda * ||f|| without
    // creating new critical values.
    const double lambda = quiet_config().separation / 8 / f.sup_norm() * rng.uniform(0.2, 1.0);
    std::vector<VertexValues> v = f.vertices();
    for (auto& x : v) {
      x.f1 = quantize(x.f1 * (1 + lambda));
      x.f2 = quantize(x.f2 * (1 + lambda));
    }
    const auto g = f.with_values(std::move(v));
    const double sup = sup_norm_distance(f, g);
    ParameterRegion u;
    u.rect = kQuiet;
    u.separation = 1.0;
    TransportConfig cfg;
    cfg.separation = choose_separation({&f, &g}, 0, region_lattice(u, 9));
    const ParamPath path = random_path(rng, random_point(rng, kQuiet), random_point(rng, kQuiet), kQuiet);
    const auto tf = transport_diagram(f, 0, path, cfg);
    const auto tg = transport_diagram(g, 0, path, cfg);
    const auto start = bottleneck_distance(tf.start, tg.start);
    REQUIRE(start.value <= sup);
    REQUIRE(start.matching.pairs.size() == 3);
    for (auto [l, r] : start.matching.pairs) {
      CHECK(point_distance(tf.end.points[tf.table[l]], tg.end.points[tg.table[r]]) <= sup);
    }
  }
}

TEST_CASE("identity matching of f with itself stays the identity", "[transport]") {
  const auto& f = monodromy32();
  const ParamPath path({{0.45, 0.5}, {0.65, 0.9}});
  const auto n = diagram_at(f, path.front(), 0).size();
  const Matching id = Matching::from_left_map(identity(n), n);
  CHECK(transport_matching(f, f, 0, path, id, quiet_config()) == id);
}

TEST_CASE("contractible loop gives the identity permutation", "[transport]") {
  const ParamPath loop({{0.45, 0.5}, {0.65, 0.5}, {0.65, 0.9}, {0.45, 0.9}, {0.45, 0.5}});
  CHECK(loop_permutation(monodromy32(), 0, loop, quiet_config()) == identity(3));
  CHECK_THROWS_AS(loop_permutation(monodromy32(), 0, ParamPath({{0.45, 0.5}, {0.6, 0.5}}), quiet_config()),
                  InputError);
}

TEST_CASE("improper points keep their order", "[transport]") {
  ExampleSpec spec;
  spec.id = ExampleId::Torus;
  const auto torus = generate(spec);
  ParameterRegion u;
  u.rect = Rect{0.45, 0.55, -0.08, 0.08};
  u.separation = 1.0;
  TransportConfig cfg;
  cfg.separation = choose_separation({&torus}, 1, region_lattice(u, 9));
  Rng rng(54);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = transport_diagram(torus, 1, random_path(rng, random_point(rng, u.rect), random_point(rng, u.rect), u.rect), cfg);
    REQUIRE(t.start.improper_count() == 2);
    // Improper points come first in the canonical order.
    CHECK(t.table[0] == 0);
    CHECK(t.table[1] == 1);
  }
}

TEST_CASE("cardinality change along the path is reported", "[transport]") {
  ExampleSpec spec;
  spec.id = ExampleId::Torus;
  spec.resolution = 16;
  TransportConfig cfg;
  cfg.separation = 1e-3;
  CHECK_THROWS_AS(transport_diagram(generate(spec), 1, ParamPath({{0.2, -0.9}, {0.8, 0.9}}), cfg), RegionViolation);
}

TEST_CASE("loop around the monodromy singular pair swaps two points", "[transport]") {
  const auto& f = monodromy32();
  ParameterRegion u;
  u.rect = Rect{0.1, 0.42, -0.22, 0.22};
  u.excluded = {{{0.25, 0.0}, 0.1}};
  u.separation = 1.0;
  TransportConfig cfg;
  cfg.separation = choose_separation({&f}, 0, region_lattice(u, 9));
  const auto loops = generator_loops(u, {0.12, -0.2});
  REQUIRE(loops.size() == 1);
  const auto perm = loop_permutation(f, 0, loops[0], cfg);
  int moved = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) moved += perm[i] != static_cast<int>(i);
  CHECK(moved == 2);
}
