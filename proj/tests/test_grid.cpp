#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "freefock/grid.hpp"
#include "support.hpp"

using namespace freefock;
using namespace freefock::grid;
using Catch::Matchers::WithinAbs;

TEST_CASE("uniform midpoint grids", "[grid]") {
  const auto g4 = make_grid({0.0, 1.0, 4});
  for (double w : g4.weights) CHECK_THAT(w, WithinAbs(0.25, 1e-15));

  const auto g1 = make_grid({0.0, 1.0, 1});
  REQUIRE(g1.size() == 1);
  CHECK(g1.nodes[0] == 0.5);
  CHECK(g1.weights[0] == 1.0);

  const auto g2 = make_grid({0.0, 2.0, 2});
  CHECK(g2.nodes == std::vector<double>{0.5, 1.5});
  CHECK(g2.weights == std::vector<double>{1.0, 1.0});
}

TEST_CASE("integration against the grid measure", "[grid]") {
  const auto g = make_grid({0.0, 1.0, 6});
  CHECK_THAT(integrate(g, std::vector<double>(6, 1.0)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(integrate(g, indicator(g, 0.0, 0.5)), WithinAbs(0.5, 1e-15));
  const auto f = indicator(g, 0.0, 1.0);
  CHECK(f == std::vector<double>(6, 1.0));
  CHECK_THROWS_AS(integrate(g, std::vector<double>(5, 1.0)), ConfigError);
}

TEST_CASE("coefficient forms sample onto the nodes", "[grid]") {
  GridSpec spec{0.0, 1.0, 4};
  spec.lambda = 2.0;
  spec.eta = std::vector<double>{1, 2, 3, 4};
  auto g = make_grid(spec);
  CHECK(g.lambda == std::vector<double>(4, 2.0));
  CHECK(g.eta == std::vector<double>{1, 2, 3, 4});

  spec.lambda = std::vector<Segment>{{0.0, 0.5, 1.0}, {0.5, 1.0, 3.0}};
  g = make_grid(spec);
  CHECK(g.lambda == std::vector<double>{1, 1, 3, 3});
}

TEST_CASE("invalid grids are rejected", "[grid]") {
  CHECK_THROWS_AS(make_grid({0.0, 1.0, 0}), ConfigError);
  CHECK_THROWS_AS(make_grid({1.0, 0.0, 3}), ConfigError);
  GridSpec neg{0.0, 1.0, 3};
  neg.eta = -1.0;
  CHECK_THROWS_AS(make_grid(neg), ConfigError);
  GridSpec bad_table{0.0, 1.0, 3};
  bad_table.lambda = std::vector<double>{1.0, 2.0};
  CHECK_THROWS_AS(make_grid(bad_table), ConfigError);
  GridSpec nan{0.0, 1.0, 3};
  nan.lambda = std::nan("");
  CHECK_THROWS_AS(make_grid(nan), ConfigError);
}

TEST_CASE("semicircle fibers reproduce low moments", "[grid]") {
  CHECK_THAT(fiber_moment(semicircle_fiber(0.0, 1.0, 2), 2), WithinAbs(1.0, 1e-13));
  CHECK_THAT(fiber_moment(semicircle_fiber(0.0, 1.0, 3), 4), WithinAbs(2.0, 1e-13));
  CHECK_THAT(fiber_moment(semicircle_fiber(1.0, 1.0, 4), 1), WithinAbs(1.0, 1e-13));
  // Catalan moments up to the exactness degree 2M-1
  const auto mu = semicircle_fiber(0.0, 1.0, 5);
  const double catalan[] = {1, 1, 2, 5, 14};
  for (int k = 0; k < 5; ++k) CHECK_THAT(fiber_moment(mu, 2 * k), WithinAbs(catalan[k], 1e-12));
  for (int k = 0; k < 5; ++k) CHECK_THAT(fiber_moment(mu, 2 * k + 1), WithinAbs(0.0, 1e-12));
}

TEST_CASE("fiber measures are probability measures within their radius", "[grid][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = support::random_fiber(rng, 1 + trial % 4);
    double total = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      total += mu.probs[j];
      CHECK(std::abs(mu.atoms[j]) <= mu.support_radius);
    }
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
  }
  for (double eta : {0.5, 1.0, 3.0}) {
    const auto mu = semicircle_fiber(0.3, eta, 8);
    for (double a : mu.atoms) CHECK(std::abs(a) <= mu.support_radius);
    CHECK_THAT(fiber_moment(mu, 0), WithinAbs(1.0, 1e-14));
  }
}

TEST_CASE("semicircle with zero variance is the point mass", "[grid]") {
  const auto mu = semicircle_fiber(0.7, 0.0, 8);
  REQUIRE(mu.size() == 1);
  CHECK(mu.atoms[0] == 0.7);
  CHECK(mu.probs[0] == 1.0);
}

TEST_CASE("malformed fibers are rejected", "[grid]") {
  CHECK_THROWS_AS(make_fiber({}, {}), ConfigError);
  CHECK_THROWS_AS(make_fiber({0.0, 1.0}, {0.5}), ConfigError);
  CHECK_THROWS_AS(make_fiber({0.0, 1.0}, {0.5, 0.6}), ConfigError);
  CHECK_THROWS_AS(make_fiber({0.0, 1.0}, {1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(make_fiber({0.0, 3.0}, {0.5, 0.5}, 2.0), ConfigError);
  CHECK_THROWS_AS(semicircle_fiber(0.0, 1.0, 0), ConfigError);
}
