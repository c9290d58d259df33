#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pism/lattice.hpp"
#include "pism/objectives.hpp"
#include "test_util.hpp"

using namespace pism;

namespace {

WeightedGraph two_node_unit_graph() {
  WeightedGraph graph(2);
  graph.add_undirected(0, 1, 1.0);
  return graph;
}

}  // namespace

TEST_CASE("revenue objective matches hand-computed values") {
  const auto f = revenue_objective(two_node_unit_graph(), 0.5, 3);
  CHECK(f({0, 0}) == 0.0);
  CHECK(f({1, 0}) == doctest::Approx(0.5));   // 1*0.5*1 + 1*0*0.5
  CHECK(f({1, 1}) == doctest::Approx(0.5));   // 0.5*0.5 + 0.5*0.5
  CHECK(f({2, 0}) == doctest::Approx(0.75));  // (1-0.25)*1
}

TEST_CASE("revenue objective validates q") {
  CHECK_THROWS_AS(revenue_objective(two_node_unit_graph(), 0.0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(revenue_objective(two_node_unit_graph(), 1.0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(revenue_objective(two_node_unit_graph(), -0.5, 3),
                  std::invalid_argument);
}

TEST_CASE("revenue value range is [0, total weight]") {
  WeightedGraph graph(3);
  graph.add_undirected(0, 1, 2.0);
  graph.add_undirected(1, 2, 3.0);
  const auto f = revenue_objective(std::move(graph), 0.5, 3);
  CHECK(f.lower_bound() == 0.0);
  CHECK(f.upper_bound() == doctest::Approx(10.0));
  CHECK(f.value_range() == doctest::Approx(10.0));
  // Spot check: sampled values stay inside the bound.
  f.domain().for_each_point([&](const IntegerPoint& x) {
    CHECK(f(x) >= f.lower_bound());
    CHECK(f(x) <= f.upper_bound());
  });
}

TEST_CASE("revenue is non-monotone on a generic instance") {
  const auto f =
      revenue_objective(testing::random_symmetric_graph(3, 5), 0.5, 3);
  // Witness search: some x <= y with f(x) > f(y) must exist.
  bool found = false;
  f.domain().for_each_point([&](const IntegerPoint& x) {
    const double fx = f(x);
    f.domain().for_each_point([&](const IntegerPoint& y) {
      if (leq(x, y) && fx > f(y) + 1e-12) found = true;
    });
  });
  CHECK(found);
}

TEST_CASE("multi-edges collapse by summing") {
  WeightedGraph graph(2);
  graph.add_undirected(0, 1, 1.0);
  graph.add_undirected(0, 1, 2.5);
  CHECK(graph.row(0).size() == 1);
  CHECK(graph.row(0)[0].second == doctest::Approx(3.5));
}

TEST_CASE("graph rejects self-loops and negative weights") {
  WeightedGraph graph(3);
  CHECK_THROWS_AS(graph.add_undirected(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(graph.add_undirected(0, 1, -1.0), std::invalid_argument);
}

TEST_CASE("facility location matches hand-computed values") {
  // m=1 customer, n=2 facilities, k=3 levels.
  FacilityWeights weights({{{0.0, 1.0, 2.0}, {0.0, 0.5, 3.0}}});
  const auto f = facility_location_objective(std::move(weights));
  CHECK(f({0, 0}) == 0.0);
  CHECK(f({2, 1}) == doctest::Approx(2.0));  // max(2, 0.5)
  CHECK(f({2, 2}) == doctest::Approx(3.0));  // max(2, 3)
  CHECK(f.upper_bound() == doctest::Approx(3.0));
  CHECK(f.lower_bound() == 0.0);
}

TEST_CASE("non-monotone facility tables are rejected at construction") {
  CHECK_THROWS_AS(FacilityWeights({{{0.0, 2.0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(FacilityWeights({{{1.0, 2.0, 3.0}}}), std::invalid_argument);
}

TEST_CASE("synthetic facility weights are deterministic and monotone") {
  const auto a = synthetic_facility_weights(4, 6, 5, 99);
  const auto b = synthetic_facility_weights(4, 6, 5, 99);
  for (int i = 0; i < a.customers(); ++i) {
    for (int j = 0; j < a.facilities(); ++j) {
      CHECK(a.utility(i, j, 0) == 0.0);
      for (int l = 1; l < a.levels(); ++l) {
        CHECK(a.utility(i, j, l) >= a.utility(i, j, l - 1));
        CHECK(a.utility(i, j, l) == b.utility(i, j, l));
      }
    }
  }
  // k=2: a single non-negative utility level.
  const auto c = synthetic_facility_weights(3, 3, 2, 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(c.utility(i, j, 1) >= 0.0);
  }
}

TEST_CASE("modular objective value range") {
  const auto f = modular_objective({{0.0, 1.0}, {0.0, 2.0}});
  CHECK(f.lower_bound() == 0.0);
  CHECK(f.upper_bound() == doctest::Approx(3.0));
}

TEST_CASE("facility objectives are monotone submodular on the lattice") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto f = facility_location_objective(
        synthetic_facility_weights(3, 4, 3, seed));
    CHECK(check_lattice_submodular(f).pass);
    CHECK(check_monotone(f).pass);
  }
}

TEST_CASE("revenue objectives pass the lattice submodularity oracle") {
  // Random W and q, enumerable sizes.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = revenue_objective(testing::random_symmetric_graph(3, seed),
                                     0.15 + 0.17 * double(seed), 3);
    CHECK(check_lattice_submodular(f).pass);
  }
}

TEST_CASE("evaluation is pure") {
  const auto f =
      revenue_objective(testing::random_symmetric_graph(4, 8), 0.5, 3);
  const IntegerPoint x{1, 2, 0, 1};
  const double first = f(x);
  for (int r = 0; r < 10; ++r) CHECK(f(x) == first);
}
