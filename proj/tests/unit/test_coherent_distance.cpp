#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cmatch/coherent_distance.hpp"
#include "cmatch/errors.hpp"
#include "cmatch/examples.hpp"
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

SimplicialBifiltration scaled(const SimplicialBifiltration& f, double lambda) {
  std::vector<VertexValues> v = f.vertices();
  for (auto& x : v) {
    x.f1 = quantize(x.f1 * (1 + lambda));
    x.f2 = quantize(x.f2 * (1 + lambda));
  }
  return f.with_values(std::move(v));
}

ParameterRegion with_separation(ParameterRegion u, const std::vector<const SimplicialBifiltration*>& bifs, int degree) {
  u.separation = 1.0;
  u.separation = choose_separation(bifs, degree, region_lattice(u, 9));
  return u;
}

ParameterRegion quiet_region() {
  ParameterRegion u;
  u.rect = Rect{0.4, 0.7, 0.4, 1.0};
  return u;
}

ParameterRegion loop_region() {
  ParameterRegion u;
  u.rect = Rect{0.1, 0.42, -0.22, 0.22};
  u.excluded = {{{0.25, 0.0}, 0.1}};
  return u;
}

const ParamPoint kLoopBase{0.12, -0.2};

SampleSpec small_spec() {
  SampleSpec s;
  s.lattice_n = 7;
  s.ring_points = 16;
  return s;
}

}  // namespace

TEST_CASE("group closure", "[coherent_distance]") {
  const auto trivial = close_group({0.5, 0}, {}, 3, 2);
  CHECK(trivial.order() == 1);
  CHECK(trivial.elements[0] == std::pair<Permutation, Permutation>{{0, 1, 2}, {0, 1}});

  const auto swap = close_group({0.5, 0}, {{{1, 0, 2}, {0, 1}}}, 3, 2);
  CHECK(swap.order() == 2);

  // A transposition and a 3-cycle generate all of S3.
  const auto s3 = close_group({0.5, 0}, {{{1, 0, 2}, {0}}, {{1, 2, 0}, {0}}}, 3, 1);
  CHECK(s3.order() == 6);
  CHECK_THROWS_AS(close_group({0.5, 0}, {{{1, 0, 2}, {0}}, {{1, 2, 0}, {0}}}, 3, 1, 4), SizeError);
}

TEST_CASE("group action on matchings", "[coherent_distance]") {
  Matching sigma;
  sigma.pairs = {{0, 1}};
  sigma.left_to_delta = {1};
  sigma.right_to_delta = {0};
  CHECK(act({{0, 1}, {0, 1}}, sigma) == sigma);
  Matching swapped;
  swapped.pairs = {{1, 0}};
  swapped.left_to_delta = {0};
  swapped.right_to_delta = {1};
  CHECK(act({{1, 0}, {1, 0}}, sigma) == swapped);
}

TEST_CASE("sample network is a tree of in-region segments", "[coherent_distance]") {
  const auto u = with_separation(loop_region(), {&monodromy32()}, 0);
  const auto net = build_network(u, kLoopBase, small_spec());
  REQUIRE(!net.nodes.empty());
  CHECK(net.nodes[0] == kLoopBase);
  CHECK(net.parent[0] == -1);
  int ring = 0;
  for (std::size_t v = 1; v < net.nodes.size(); ++v) {
    REQUIRE(net.parent[v] >= 0);
    CHECK(static_cast<std::size_t>(net.parent[v]) < v);
    CHECK(u.contains_segment(net.nodes[net.parent[v]], net.nodes[v]));
    const auto& d = u.excluded[0];
    if (std::abs(std::hypot(net.nodes[v].a - d.center.a, net.nodes[v].b - d.center.b) - 1.01 * d.radius) < 1e-12) {
      ++ring;
    }
  }
  CHECK(ring == 16);
  CHECK(net.spacing == Catch::Approx(0.44 / 6));
  CHECK_THROWS_AS(build_network(u, {0.25, 0.0}, small_spec()), InputError);
}

TEST_CASE("f against itself has coherent distance zero", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto u = with_separation(quiet_region(), {&f}, 0);
  const auto rep = coherent_matching_distance(f, f, 0, u, {0.5, 0.6}, small_spec(), TransportConfig{});
  CHECK(rep.value == 0);
  CHECK(rep.dmatch_region == 0);
  CHECK(rep.group_order == 1);
}

TEST_CASE("improper count mismatch gives infinite distance", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto g = SimplicialBifiltration::from_maximal({{0, 0}, {10, 10}}, {});
  const auto u = with_separation(quiet_region(), {&f, &g}, 0);
  const auto rep = coherent_matching_distance(f, g, 0, u, {0.5, 0.6}, small_spec(), TransportConfig{});
  CHECK(rep.value == kInf);
}

TEST_CASE("coherent cost dominates the basepoint cost", "[coherent_distance][property]") {
  const auto& f = monodromy32();
  const auto g = shifted(f, 0.25);
  const auto u = with_separation(quiet_region(), {&f, &g}, 0);
  const PairPermutationGroup trivial;
  const CoherentEvaluator ev(f, g, 0, u, {0.5, 0.6}, trivial, small_spec(), TransportConfig{});
  const auto all = enumerate_matchings(ev.f_basepoint(), ev.g_basepoint());
  REQUIRE(all.size() > 1);
  for (const auto& sigma : all) {
    const auto c = ev.coherent_cost(sigma);
    CHECK(c.value >= c.basepoint_cost);
    CHECK(c.basepoint_cost == matching_cost(ev.f_basepoint(), ev.g_basepoint(), sigma).value);
  }
  const auto rep = coherent_matching_distance(ev);
  CHECK(rep.value >= bottleneck_distance(ev.f_basepoint(), ev.g_basepoint()).value);
  CHECK(rep.dmatch_region <= rep.value + rep.tolerance);
}

TEST_CASE("monodromy group of the example has order 2", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto g = shifted(f, 0.5);
  const auto u = with_separation(loop_region(), {&f, &g}, 0);
  const auto group = monodromy_group(f, g, 0, u, kLoopBase, TransportConfig{});
  REQUIRE(group.generators.size() == 1);
  CHECK(group.order() == 2);
  const auto& [pf, pg] = group.generators[0];
  int moved = 0;
  for (std::size_t i = 0; i < pf.size(); ++i) moved += pf[i] != static_cast<int>(i);
  CHECK(moved == 2);
  for (std::size_t i = 0; i < pg.size(); ++i) CHECK(pg[i] == static_cast<int>(i));
}

TEST_CASE("dmatch of f against itself and against a perturbation", "[coherent_distance]") {
  const auto& f = monodromy32();
  const Rect r{0.2, 0.8, -1.0, 1.0};
  CHECK(dmatch(f, f, 0, r, 5).value == 0);
  const auto g = scaled(f, 0.01);
  const auto res = dmatch(f, g, 0, r, 5);
  CHECK(res.table.size() == 25);
  CHECK(res.value > 0);
  CHECK(res.value <= sup_norm_distance(f, g));
  CHECK_THROWS_AS(dmatch(f, g, 0, r, 1), InputError);
  CHECK_THROWS_AS(dmatch(f, g, 0, Rect{0.0, 0.5, 0, 1}, 5), InputError);
}

TEST_CASE("maximum of the transported cost sits near a = 1/2 or the boundary", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto g = scaled(f, 0.02);
  ParameterRegion u = quiet_region();
  u.rect = Rect{0.35, 0.65, 0.4, 1.0};
  u = with_separation(u, {&f, &g}, 0);
  const CoherentEvaluator ev(f, g, 0, u, {0.4, 0.5}, PairPermutationGroup{}, small_spec(), TransportConfig{});
  const auto best = coherent_matching_distance(ev);
  const auto rep = max_principle_check(ev, u, best.best.sigma);
  CHECK(rep.max_value == best.value);
  CHECK(rep.passes);
}

TEST_CASE("basepoint choice does not change the distance", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto g = scaled(f, 0.02);
  const auto u = with_separation(quiet_region(), {&f, &g}, 0);
  const auto rep = basepoint_independence_check(f, g, 0, u, {0.45, 0.45}, {0.65, 0.95}, small_spec(), TransportConfig{});
  INFO(rep.value_first << " vs " << rep.value_second << " tolerance " << rep.tolerance);
  CHECK(rep.passes);
}

TEST_CASE("family of regions", "[coherent_distance]") {
  const auto& f = monodromy32();
  const auto g = scaled(f, 0.02);
  ParameterRegion left = quiet_region(), right = quiet_region();
  left.rect = Rect{0.4, 0.5, 0.4, 1.0};
  right.rect = Rect{0.6, 0.7, 0.4, 1.0};
  left = with_separation(left, {&f, &g}, 0);
  right = with_separation(right, {&f, &g}, 0);
  const auto rep = family_distances(f, g, 0, {left, right}, {{0.45, 0.5}, {0.65, 0.5}}, small_spec(), TransportConfig{});
  REQUIRE(rep.per_region.size() == 2);
  CHECK(rep.cd_family == std::max(rep.per_region[0].value, rep.per_region[1].value));
  CHECK(rep.ordered);
  CHECK_THROWS_AS(family_distances(f, g, 0, {left, left}, {{0.45, 0.5}, {0.45, 0.5}}, small_spec(), TransportConfig{}),
                  InputError);
  CHECK_THROWS_AS(family_distances(f, g, 0, {left}, {}, small_spec(), TransportConfig{}), InputError);
}
