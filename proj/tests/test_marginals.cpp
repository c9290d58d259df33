#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pism/marginals.hpp"
#include "test_util.hpp"

using namespace pism;

TEST_CASE("block validation") {
  const LatticeDomain domain = LatticeDomain::uniform(2, 3);
  CHECK_THROWS_AS(ProductCategorical(domain, {{0.5, 0.6}, {0.1, 0.1}}),
                  std::invalid_argument);  // over-mass
  CHECK_THROWS_AS(ProductCategorical(domain, {{-0.1, 0.2}, {0.1, 0.1}}),
                  std::invalid_argument);  // negative
  CHECK_THROWS_AS(ProductCategorical(domain, {{0.5}, {0.1, 0.1}}),
                  std::invalid_argument);  // wrong block length
  const ProductCategorical ok(domain, {{0.5, 0.25}, {0.0, 1.0}});
  CHECK(ok.residual(0) == doctest::Approx(0.25));
  CHECK(ok.prob(1, 0) == doctest::Approx(0.0));
  CHECK(ok.prob(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("degenerate blocks sample deterministically") {
  const LatticeDomain domain = LatticeDomain::uniform(3, 4);
  IntegerPoint target{2, 0, 3};
  const auto rho = ProductCategorical::point_mass(domain, target);
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(sample(rho, 42, s) == target);
  }
}

TEST_CASE("sampling frequencies match the marginals") {
  const LatticeDomain domain = LatticeDomain::uniform(1, 3);
  const ProductCategorical rho(domain, {{1.0 / 3.0, 1.0 / 3.0}});
  const std::uint64_t draws = 100000;
  int counts[3] = {0, 0, 0};
  for (std::uint64_t s = 0; s < draws; ++s) ++counts[sample(rho, 7, s)[0]];
  // 3-sigma binomial band around p = 1/3.
  const double expected = draws / 3.0;
  const double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
  for (int level = 0; level < 3; ++level) {
    CHECK(std::abs(counts[level] - expected) < 3.0 * sigma);
  }
}

TEST_CASE("sampling is reproducible and index-keyed") {
  const LatticeDomain domain = LatticeDomain::uniform(5, 3);
  const auto rho = testing::random_marginals(domain, 1);
  // Same (seed, index) in any order gives the same draw.
  const IntegerPoint forward = sample(rho, 9, 17);
  for (std::uint64_t s = 30; s-- > 0;) {
    if (s == 17) CHECK(sample(rho, 9, s) == forward);
  }
  CHECK(sample(rho, 9, 17) == forward);
  CHECK(sample(rho, 10, 17) != forward);  // overwhelmingly likely
}

TEST_CASE("entropy values") {
  const LatticeDomain domain = LatticeDomain::uniform(2, 3);
  CHECK(entropy(ProductCategorical::point_mass(domain, {1, 2})) == 0.0);
  const auto uniform = ProductCategorical::uniform(domain);
  CHECK(entropy(uniform) == doctest::Approx(2.0 * std::log(3.0)));
  // Single uniform block over k=3 levels.
  CHECK(block_entropy({1.0 / 3, 1.0 / 3}) == doctest::Approx(std::log(3.0)));
  // Additivity across n uniform blocks over k levels.
  const auto big = ProductCategorical::uniform(LatticeDomain::uniform(7, 4));
  CHECK(entropy(big) == doctest::Approx(7.0 * std::log(4.0)));
  CHECK(entropy(uniform) >= 0.0);
}

TEST_CASE("entropy gradient closed form") {
  const LatticeDomain domain = LatticeDomain::uniform(1, 3);
  SUBCASE("uniform block has zero gradient") {
    const auto g = entropy_gradient(ProductCategorical::uniform(domain));
    CHECK(g[0][0] == doctest::Approx(0.0));
    CHECK(g[0][1] == doctest::Approx(0.0));
  }
  SUBCASE("worked example") {
    const ProductCategorical rho(domain, {{0.5, 0.25}});
    const auto g = entropy_gradient(rho);
    CHECK(g[0][0] == doctest::Approx(-std::log(2.0)));  // log(0.25/0.5)
    CHECK(g[0][1] == doctest::Approx(0.0));             // log(0.25/0.25)
  }
  SUBCASE("gradient is finite on the boundary") {
    const auto g =
        entropy_gradient(ProductCategorical::point_mass(domain, {1}));
    CHECK(std::isfinite(g[0][0]));
    CHECK(std::isfinite(g[0][1]));
  }
}

TEST_CASE("entropy gradient matches finite differences at interior points") {
  const LatticeDomain domain = LatticeDomain::uniform(3, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rho = testing::random_marginals(domain, 100 + seed);
    const auto g = entropy_gradient(rho);
    for (int i = 0; i < rho.blocks(); ++i) {
      for (int j = 0; j < 3; ++j) {
        const double fd = testing::central_difference(
            rho, i, j, 1e-7,
            [](const ProductCategorical& r) { return entropy(r); });
        CHECK(g[i][j] == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("entropy is strictly concave on block interiors") {
  const LatticeDomain domain = LatticeDomain::uniform(1, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = testing::random_marginals(domain, 200 + seed).block(0);
    const auto b = testing::random_marginals(domain, 300 + seed).block(0);
    std::vector<double> mid(a.size());
    double distance = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      mid[j] = 0.5 * (a[j] + b[j]);
      distance += std::abs(a[j] - b[j]);
    }
    if (distance < 1e-6) continue;
    CHECK(block_entropy(mid) >
          0.5 * (block_entropy(a) + block_entropy(b)));
  }
}

TEST_CASE("clamping blocks") {
  const LatticeDomain domain = LatticeDomain::uniform(3, 3);
  const auto rho = testing::random_marginals(domain, 3);
  SUBCASE("clamp to a vertex pins the sampled coordinate") {
    const auto clamped = rho.clamp_block(1, 2);
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(sample(clamped, 5, s)[1] == 2);
    const auto zeroed = rho.clamp_block(1, 0);
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(sample(zeroed, 5, s)[1] == 0);
  }
  SUBCASE("clamping is idempotent and local") {
    const auto once = rho.clamp_block(2, 1);
    const auto twice = once.clamp_block(2, 1);
    CHECK(once.raw() == twice.raw());
    CHECK(once.block(0) == rho.block(0));
    CHECK(once.block(1) == rho.block(1));
  }
  SUBCASE("out-of-range indices are rejected") {
    CHECK_THROWS_AS(rho.clamp_block(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(rho.clamp_block(0, 3), std::invalid_argument);
  }
}

TEST_CASE("feasibility is closed under exported mutations") {
  const LatticeDomain domain = LatticeDomain::uniform(4, 3);
  auto rho = testing::random_marginals(domain, 9);
  CHECK(rho.feasible());
  for (int i = 0; i < 4; ++i) {
    rho = rho.clamp_block(i, i % 3);
    CHECK(rho.feasible());
  }
  CHECK_THROWS_AS(rho.with_block(0, {0.7, 0.7}), std::invalid_argument);
}

TEST_CASE("marginal CSV round trip") {
  const LatticeDomain domain({3, 2, 4});
  const auto rho = testing::random_marginals(domain, 31);
  const std::string csv = marginals_to_csv(rho);
  CHECK(csv.rfind("element,level,prob\n", 0) == 0);
  std::istringstream in(csv);
  const auto back = read_marginals_csv(in);
  REQUIRE(back.domain() == domain);
  for (int i = 0; i < rho.blocks(); ++i) {
    for (int level = 0; level < domain.levels(i); ++level) {
      // 17 significant digits round-trip doubles exactly.
      CHECK(back.prob(i, level) == rho.prob(i, level));
    }
  }
}
