#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "cmatch/errors.hpp"
#include "cmatch/persistence.hpp"
#include "test_support.hpp"

using namespace cmatch;
using cmatch::testing::Rng;

namespace {

// Around the cycle: 0.5, 0, 2, 1, 4, 3. Minima 0 and 1, maxima 2 and 4; the
// component born at 1 dies at 2.
SimplicialBifiltration two_minima_cycle() { return cmatch::testing::cycle({0.5, 0, 2, 1, 4, 3}); }

}  // namespace

TEST_CASE("height function on a 4-cycle", "[persistence]") {
  const auto c = cmatch::testing::cycle({0, 1, 3, 2});
  const auto s = build_slice(c, {0.5, 0});
  const auto d0 = compute_diagram(s, 0);
  const auto d1 = compute_diagram(s, 1);
  CHECK(d0.points == std::vector<DiagramPoint>{DiagramPoint::improper(0)});
  CHECK(d1.points == std::vector<DiagramPoint>{DiagramPoint::improper(3)});
}

TEST_CASE("6-cycle with two minima", "[persistence]") {
  const auto c = two_minima_cycle();
  const auto s = build_slice(c, {0.5, 0});
  const auto d0 = compute_diagram(s, 0);
  CHECK(d0.points == std::vector<DiagramPoint>{DiagramPoint::improper(0), DiagramPoint::proper(1, 2)});
  CHECK(compute_diagram(s, 1).points == std::vector<DiagramPoint>{DiagramPoint::improper(4)});
  CHECK(compute_diagram(s, 2).points.empty());
}

TEST_CASE("single vertex", "[persistence]") {
  const auto v = SimplicialBifiltration::from_maximal({{0.75, 0.75}}, {});
  CHECK(compute_diagram(build_slice(v, {0.5, 0}), 0).points == std::vector<DiagramPoint>{DiagramPoint::improper(0.75)});
}

TEST_CASE("persistent Betti numbers of the 6-cycle", "[persistence]") {
  const auto c = two_minima_cycle();
  const auto s = build_slice(c, {0.5, 0});
  CHECK(persistent_betti(s, 0, -1, 10) == 0);
  CHECK(persistent_betti(s, 0, 1.2, 1.5) == 2);
  CHECK(persistent_betti(s, 0, 2.1, 5) == 1);
  CHECK(persistent_betti(s, 1, 4, 5) == 1);
  CHECK_THROWS_AS(persistent_betti(s, 0, 1, 1), InputError);
}

TEST_CASE("multiplicities of the 6-cycle", "[persistence]") {
  const auto c = two_minima_cycle();
  const auto s = build_slice(c, {0.5, 0});
  CHECK(multiplicity(s, 0, DiagramPoint::proper(1, 2)) == 1);
  CHECK(multiplicity(s, 0, DiagramPoint::improper(0)) == 1);
  CHECK(multiplicity(s, 0, DiagramPoint::proper(0.5, 3)) == 0);
  CHECK(multiplicity(s, 1, DiagramPoint::improper(4)) == 1);
}

TEST_CASE("multiplicity agrees with the computed diagram on random complexes", "[persistence][property]") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto bif = cmatch::testing::random_complex(rng, 30);
    const auto s = build_slice(bif, {rng.uniform(0.1, 0.9), rng.uniform(-1, 1)});
    std::set<double> vals(s.simplex_values.begin(), s.simplex_values.end());
    for (int k = 0; k <= bif.dimension(); ++k) {
      const auto d = compute_diagram(s, k);
      for (auto u = vals.begin(); u != vals.end(); ++u) {
        REQUIRE(multiplicity(s, k, DiagramPoint::improper(*u)) == cmatch::testing::count_point(d, DiagramPoint::improper(*u)));
        for (auto v = std::next(u); v != vals.end(); ++v) {
          const auto x = DiagramPoint::proper(*u, *v);
          REQUIRE(multiplicity(s, k, x) == cmatch::testing::count_point(d, x));
        }
      }
    }
  }
}

TEST_CASE("improper counts equal Betti numbers", "[persistence][property]") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto bif = cmatch::testing::random_complex(rng);
    const auto betti = betti_numbers(bif);
    const auto dgms = compute_diagrams(build_slice(bif, {rng.uniform(0.1, 0.9), rng.uniform(-1, 1)}), bif.dimension());
    for (int k = 0; k <= bif.dimension(); ++k) CHECK(dgms[k].improper_count() == betti[k]);
  }
}

TEST_CASE("single-degree and all-degree reductions agree", "[persistence][property]") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto bif = cmatch::testing::random_complex(rng);
    const auto s = build_slice(bif, {rng.uniform(0.1, 0.9), rng.uniform(-1, 1)});
    const auto all = compute_diagrams(s, bif.dimension());
    for (int k = 0; k <= bif.dimension(); ++k) CHECK(compute_diagram(s, k).points == all[k].points);
  }
}

TEST_CASE("degree above the dimension gives an empty diagram", "[persistence]") {
  const auto c = cmatch::testing::cycle({0, 1, 2});
  CHECK(compute_diagram(build_slice(c, {0.5, 0}), 3).points.empty());
  CHECK_THROWS_AS(compute_diagram(build_slice(c, {0.5, 0}, 0), 1), InputError);
}

TEST_CASE("diagram rows", "[persistence]") {
  PersistenceDiagram d;
  d.degree = 1;
  d.points = {DiagramPoint::improper(0.5), DiagramPoint::proper(1, 2.25)};
  std::ostringstream os;
  write_diagram_rows(os, d);
  CHECK(os.str() == "1,0.5,inf\n1,1,2.25\n");
}
