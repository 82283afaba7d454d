#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "support.hpp"

using namespace freefock;
using namespace freefock::jacobi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("low-degree orthogonal polynomials", "[jacobi]") {
  const auto e = constant_entry(0.0, 1.0, 4);
  for (double s : {-1.3, 0.0, 0.4, 2.2}) {
    CHECK(poly_eval(e, 0, s) == 1.0);
    CHECK(poly_eval(e, 1, s) == s);
    CHECK_THAT(poly_eval(e, 2, s), WithinAbs(s * s - 1.0, 1e-14));
    CHECK_THAT(poly_eval(e, 3, s), WithinAbs(s * s * s - 2.0 * s, 1e-14));
  }
  const auto shifted = constant_entry(0.7, 2.0, 2);
  CHECK_THAT(poly_eval(shifted, 1, 1.5), WithinAbs(0.8, 1e-15));
  CHECK_THROWS_AS(poly_eval(e, 5, 0.0), SizeError);
}

TEST_CASE("coefficients from simple measures", "[jacobi]") {
  const auto one = coeffs_from_measure(grid::make_fiber({0.4}, {1.0}), 4);
  CHECK(one.b[0] == 0.4);
  CHECK(one.finite_support == 1);
  for (int l = 1; l <= 4; ++l) {
    CHECK(one.a[static_cast<std::size_t>(l)] == 0.0);
    CHECK(one.g[static_cast<std::size_t>(l)] == 0.0);
    CHECK(poly_eval(one, l, 0.4) == 0.0);
  }
  CHECK(one.g[0] == 1.0);

  const auto two = coeffs_from_measure(grid::make_fiber({-1.0, 1.0}, {0.5, 0.5}), 5);
  CHECK_THAT(two.b[0], WithinAbs(0.0, 1e-15));
  CHECK_THAT(two.a[1], WithinAbs(1.0, 1e-14));
  CHECK(two.finite_support == 2);
  CHECK(two.g[2] == 0.0);

  const auto skew = coeffs_from_measure(grid::make_fiber({0.0, 1.0}, {0.25, 0.75}), 3);
  CHECK_THAT(skew.b[0], WithinAbs(0.75, 1e-15));
  CHECK_THAT(skew.a[1], WithinAbs(0.1875, 1e-15));
  CHECK_THAT(skew.b[1], WithinAbs(0.25, 1e-14));
  CHECK(skew.finite_support == 2);
}

TEST_CASE("semicircle fibers recover constant coefficients", "[jacobi]") {
  for (auto [lam, eta] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {-0.5, 0.3}, {2.0, 4.0}}) {
    const auto e = coeffs_from_measure(grid::semicircle_fiber(lam, eta, 10), 8);
    CHECK(e.finite_support == kInfiniteSupport);
    for (int l = 0; l <= 8; ++l) {
      CHECK_THAT(e.b[static_cast<std::size_t>(l)], WithinAbs(lam, 1e-9));
      if (l > 0) CHECK_THAT(e.a[static_cast<std::size_t>(l)], WithinAbs(eta, 1e-9 * std::max(1.0, eta)));
      CHECK_THAT(e.g[static_cast<std::size_t>(l)], WithinRel(std::pow(eta, l), 1e-10));
    }
  }
}

TEST_CASE("orthogonality and norms under random atomic measures", "[jacobi][property]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 6);
    const auto mu = support::random_fiber(rng, k);
    const int L = 7;
    const auto e = coeffs_from_measure(mu, L);
    const int N = std::min<int>(static_cast<int>(k), L + 1);
    INFO("atoms=" << k);
    if (static_cast<int>(k) <= L) CHECK(e.finite_support == static_cast<int>(k));
    const auto g = norms_by_quadrature(e, mu);
    for (int l = 0; l <= L; ++l) {
      const double scale = std::max(1.0, e.g[static_cast<std::size_t>(l)]);
      CHECK(std::abs(g[static_cast<std::size_t>(l)] - e.g[static_cast<std::size_t>(l)]) <= 1e-9 * scale);
      if (l < N) CHECK(e.g[static_cast<std::size_t>(l)] > 0.0);
      else CHECK(e.g[static_cast<std::size_t>(l)] == 0.0);
    }
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < p; ++q) {
        double s = 0.0;
        for (std::size_t j = 0; j < mu.size(); ++j)
          s += mu.probs[j] * poly_eval(e, p, mu.atoms[j]) * poly_eval(e, q, mu.atoms[j]);
        CHECK(std::abs(s) <= 1e-9);
      }
    for (int l = 0; l < N; ++l) CHECK(std::abs(e.b[static_cast<std::size_t>(l)]) <= mu.support_radius + 1e-12);
  }
}

TEST_CASE("Gauss rules invert the Stieltjes procedure", "[jacobi][property]") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 5);
    const auto mu = support::random_fiber(rng, k);
    const auto e = coeffs_from_measure(mu, static_cast<int>(k));
    const auto back = gauss_rule(e, static_cast<int>(k));
    for (int d = 0; d <= 2 * static_cast<int>(k) - 1; ++d)
      CHECK_THAT(grid::fiber_moment(back, d), WithinAbs(grid::fiber_moment(mu, d), 1e-10));
    const auto again = coeffs_from_measure(back, static_cast<int>(k));
    for (std::size_t l = 0; l < k; ++l) {
      CHECK_THAT(again.b[l], WithinAbs(e.b[l], 1e-9));
      CHECK_THAT(again.a[l], WithinAbs(e.a[l], 1e-9));
    }
  }
  CHECK_THROWS_AS(gauss_rule(coeffs_from_measure(grid::make_fiber({0.0}, {1.0}), 3), 2), DomainError);
}

TEST_CASE("spectral moments of Jacobi matrices", "[jacobi]") {
  const auto m = moments_of(constant_entry(0.0, 1.0, 4), 8);
  const double catalan[] = {1, 0, 1, 0, 2, 0, 5, 0, 14};
  for (int k = 0; k <= 8; ++k) CHECK_THAT(m[static_cast<std::size_t>(k)], WithinAbs(catalan[k], 1e-12));
  const auto point = moments_of(constant_entry(0.5, 0.0, 4), 5);
  for (int k = 0; k <= 5; ++k) CHECK_THAT(point[static_cast<std::size_t>(k)], WithinAbs(std::pow(0.5, k), 1e-15));
}

TEST_CASE("Meixner moment sequences", "[jacobi]") {
  const auto cat = meixner_moments(0.0, 0.0, 1.0, 6);
  CHECK_THAT(cat[2], WithinAbs(1.0, 1e-14));
  CHECK_THAT(cat[4], WithinAbs(2.0, 1e-14));
  CHECK_THAT(cat[6], WithinAbs(5.0, 1e-13));

  const auto mx = meixner_moments(1.0, 1.0, 1.0, 4);
  CHECK(mx[0] == 1.0);
  CHECK_THAT(mx[1], WithinAbs(0.0, 1e-15));
  CHECK_THAT(mx[2], WithinAbs(1.0, 1e-14));
  CHECK_THAT(mx[3], WithinAbs(1.0, 1e-14));
  CHECK_THAT(mx[4], WithinAbs(4.0, 1e-14));

  CHECK_THAT(meixner_moments(0.0, 1.0, 1.0, 4)[4], WithinAbs(3.0, 1e-14));

  // a larger truncation leaves exact moments unchanged
  const auto a = meixner_moments(0.4, 0.7, 1.3, 7);
  const auto b = meixner_moments(0.4, 0.7, 1.3, 7, 12);
  for (int k = 0; k <= 7; ++k) CHECK_THAT(a[static_cast<std::size_t>(k)], WithinRel(b[static_cast<std::size_t>(k)], 1e-13));

  CHECK_THROWS_AS(meixner_moments(0.0, 1.0, 1.0, 6, 3), SizeError);
  CHECK_THROWS_AS(meixner_moments(0.0, -1.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(meixner_moments(0.0, 1.0, 0.0, 4), DomainError);
}

TEST_CASE("entries reject invalid coefficients", "[jacobi]") {
  CHECK_THROWS_AS(make_entry({0.0, -1.0}, {0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(make_entry({0.0}, {0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(constant_entry(0.0, -0.1, 3), DomainError);
  CHECK_NOTHROW(make_entry({0.0, -1.0}, {0.5, 0.0}, 1));
  const auto sys = constant_system(grid::make_grid({0.0, 1.0, 3, 0.5, 2.0}), 5);
  CHECK(sys.size() == 3);
  CHECK(sys.max_level() == 5);
  CHECK_THAT(sys[1].g[3], WithinRel(8.0, 1e-15));
}
