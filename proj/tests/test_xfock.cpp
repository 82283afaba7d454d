#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "freefock/field.hpp"
#include "freefock/grid.hpp"
#include "freefock/io.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/xfock.hpp"
#include "support.hpp"

using namespace freefock;
using namespace freefock::xfock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

struct Model {
  grid::GridMeasure g;
  std::vector<grid::FiberMeasure> fibers;
  ProductGrid pg;
  XSpacePtr xs;
};

Model random_model(std::mt19937_64& rng, std::size_t m, int D, std::size_t max_atoms = 3) {
  Model md;
  md.g = grid::make_grid({0.0, 1.0, m});
  for (std::size_t i = 0; i < m; ++i) md.fibers.push_back(support::random_fiber(rng, 1 + i % max_atoms, 1.2));
  md.pg = make_product_grid(md.g, md.fibers);
  md.xs = make_xspace(md.g.weights, jacobi::build_system(md.fibers, D + 1), D);
  return md;
}

Model meixner_model(std::size_t m, double lambda, double eta, int D, std::size_t M = 8) {
  Model md;
  md.g = grid::make_grid({0.0, 1.0, m, lambda, eta});
  md.fibers = grid::semicircle_fibers(md.g, M);
  md.pg = make_product_grid(md.g, md.fibers);
  md.xs = make_xspace(md.g.weights, jacobi::constant_system(md.g, D + 1), D);
  return md;
}

fock::FockVector random_big(const fock::SpacePtr& s, int top, std::mt19937_64& rng) {
  fock::FockVector v(s);
  for (int n = 0; n <= top; ++n) v.level_mut(n) = support::random_vec(rng, s->level_size(n));
  return v;
}

double x_moment(const std::vector<std::vector<double>>& fs, const XSpacePtr& xs) {
  auto v = XFockVector::vacuum(xs);
  for (std::size_t k = fs.size(); k-- > 0;) v = xfield(fs[k], v);
  return v.scalar();
}

double big_moment(const std::vector<std::vector<double>>& fs, const ProductGrid& pg) {
  const auto big = big_fock_space(pg, static_cast<int>(fs.size()));
  auto v = fock::FockVector::vacuum(big);
  for (std::size_t k = fs.size(); k-- > 0;) v = big_fock_realize(pg, fs[k], v);
  return v.scalar();
}

}  // namespace

TEST_CASE("multi-indices are graded by degree", "[xfock]") {
  for (int d = 1; d <= 7; ++d) {
    const auto mis = multi_indices(d);
    CHECK(mis.size() == (std::size_t{1} << (d - 1)));
    for (std::size_t k = 0; k < mis.size(); ++k) {
      CHECK(degree(mis[k]) == d);
      if (k > 0) CHECK(MultiIndexLess{}(mis[k - 1], mis[k]));
    }
  }
  CHECK(multi_indices(2) == std::vector<MultiIndex>{{0, 0}, {1}});
  const auto md = meixner_model(3, 0.0, 1.0, 3);
  XFockVector v(md.xs);
  CHECK_NOTHROW(v.component_mut({0, 1}));
  CHECK_THROWS_AS(v.component_mut({1, 1}), CapacityError);
  CHECK_THROWS_AS(v.component_mut({}), ConfigError);
  CHECK_THROWS_AS(make_xspace(md.g.weights, jacobi::constant_system(md.g, 2), 3), ConfigError);
}

TEST_CASE("extended creation and annihilation on small vectors", "[xfock]") {
  std::mt19937_64 rng(51);
  const auto md = random_model(rng, 4, 4);
  const auto f = support::random_vec(rng, 4), g = support::random_vec(rng, 4);
  const auto omega = XFockVector::vacuum(md.xs);
  const auto xf = xplus(f, omega);
  CHECK(xf.scalar() == 0.0);
  REQUIRE(xf.components().size() == 1);
  const auto c = xf.component({0});
  for (std::size_t t = 0; t < 4; ++t) CHECK(c[t] == f[t]);
  double fg = 0.0;
  for (std::size_t t = 0; t < 4; ++t) fg += md.g.weights[t] * f[t] * g[t];
  CHECK_THAT(xminus(f, xplus(g, omega)).scalar(), WithinRel(fg, 1e-14));
  CHECK(x_moment({f}, md.xs) == 0.0);
  CHECK_THAT(x_moment({f, g}, md.xs), WithinRel(fg, 1e-14));
}

TEST_CASE("neutral action with constant coefficients", "[xfock]") {
  std::mt19937_64 rng(52);
  const double lambda = 0.8;
  const auto md = meixner_model(3, lambda, 1.5, 5);
  XFockVector v(md.xs);
  for (const auto& mi : std::vector<MultiIndex>{{0}, {2}, {1, 0}, {0, 2, 0}}) v.component_mut(mi) = support::random_vec(rng, ipow(3, mi.size()));
  const auto f = support::random_vec(rng, 3);
  const auto out = xzero(f, v);
  for (const auto& [mi, src] : v.components()) {
    const auto dst = out.component(mi);
    const std::size_t stride = src.size() / 3;
    for (std::size_t k = 0; k < src.size(); ++k) CHECK_THAT(dst[k], WithinAbs(lambda * f[k / stride] * src[k], 1e-15));
  }
}

TEST_CASE("Meixner vacuum moments on the extended space", "[xfock]") {
  const auto md = meixner_model(4, 1.0, 1.0, 4);
  const std::vector<double> chi(4, 1.0);
  CHECK_THAT(x_moment({chi, chi}, md.xs), WithinAbs(1.0, 1e-14));
  CHECK_THAT(x_moment({chi, chi, chi}, md.xs), WithinAbs(1.0, 1e-14));
  CHECK_THAT(x_moment({chi, chi, chi, chi}, md.xs), WithinAbs(4.0, 1e-13));
  CHECK_THAT(big_moment({chi, chi, chi, chi}, md.pg), WithinAbs(4.0, 1e-12));

  const auto semi = meixner_model(4, 0.0, 1.0, 4);
  CHECK(big_moment({chi}, semi.pg) == 0.0);
  CHECK_THAT(big_moment({chi, chi, chi, chi}, semi.pg), WithinAbs(3.0, 1e-12));
}

TEST_CASE("big Fock and extended Fock moments agree", "[xfock][property]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial;
    const auto md = random_model(rng, 3, n);
    std::vector<std::vector<double>> fs;
    for (int k = 0; k < n; ++k) fs.push_back(support::random_vec(rng, 3));
    INFO("n=" << n);
    CHECK(rel(big_moment(fs, md.pg), x_moment(fs, md.xs)) <= 1e-10);
  }
}

TEST_CASE("basis change on level-one vectors", "[xfock]") {
  std::mt19937_64 rng(54);
  const double lambda = 0.6, eta = 1.7;
  const auto md = meixner_model(3, lambda, eta, 6, 6);
  const auto big = big_fock_space(md.pg, 2);
  const auto f = support::random_vec(rng, 3);

  const auto one = fock::FockVector::homogeneous(big, 1, lift(md.pg, f));
  const auto k1 = k_transform(md.pg, one, md.xs);
  for (std::size_t t = 0; t < 3; ++t) CHECK_THAT(k1.component({0})[t], WithinAbs(f[t], 1e-12));
  for (const auto& [mi, c] : k1.components())
    if (mi != MultiIndex{0}) CHECK(max_abs(c) <= 1e-12);

  auto fs = lift(md.pg, f);
  for (std::size_t q = 0; q < fs.size(); ++q) fs[q] *= md.pg.atoms[q];
  const auto ks = k_transform(md.pg, fock::FockVector::homogeneous(big, 1, fs), md.xs);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK_THAT(ks.component({1})[t], WithinAbs(f[t], 1e-12));
    CHECK_THAT(ks.component({0})[t], WithinAbs(lambda * f[t], 1e-12));
  }
}

TEST_CASE("basis change is unitary and intertwines the fields", "[xfock][property]") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 8; ++trial) {
    std::mt19937_64 local(rng());
    Model md;
    md.g = grid::make_grid({0.0, 1.0, 3});
    for (std::size_t i = 0; i < 3; ++i) md.fibers.push_back(support::random_fiber(local, 1 + (i + trial) % 3, 1.2));
    md.pg = make_product_grid(md.g, md.fibers);
    const int top = 2;
    const int D = (top + 1) * static_cast<int>(md.pg.max_atoms());
    md.xs = make_xspace(md.g.weights, jacobi::build_system(md.fibers, D + 2), D);
    const auto big = big_fock_space(md.pg, top + 1);
    const auto v = random_big(big, top, local);
    const auto kv = k_transform(md.pg, v, md.xs);
    CHECK_THAT(norm(kv), WithinRel(fock::norm(v), 1e-10));
    CHECK(fock::relative_gap(k_inverse(md.pg, kv, big), v) <= 1e-10);

    const auto f = support::random_vec(local, 3);
    const auto lhs = k_transform(md.pg, big_fock_realize(md.pg, f, v), md.xs);
    const auto rhs = xfield(f, kv);
    CHECK(relative_gap(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("inner-product formula", "[xfock][property]") {
  std::mt19937_64 rng(56);
  const std::size_t m = 3;
  const double eta = 0.9;
  const auto md = meixner_model(m, 0.4, eta, 4);
  const auto f1 = support::random_vec(rng, m), g1 = support::random_vec(rng, m);
  double fg = 0.0;
  for (std::size_t t = 0; t < m; ++t) fg += md.g.weights[t] * f1[t] * g1[t];
  CHECK_THAT(inner_product_formula(field::product_kernel({f1}), field::product_kernel({g1}), *md.xs), WithinRel(fg, 1e-14));

  const auto F = field::make_kernel(m, 2, support::random_vec(rng, m * m));
  const auto G = field::make_kernel(m, 2, support::random_vec(rng, m * m));
  double expect = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) expect += md.g.weights[s] * md.g.weights[t] * F.values[s * m + t] * G.values[s * m + t];
  for (std::size_t t = 0; t < m; ++t) expect += md.g.weights[t] * eta * F.values[t * m + t] * G.values[t * m + t];
  CHECK_THAT(inner_product_formula(F, G, *md.xs), WithinRel(expect, 1e-13));

  const auto rm = random_model(rng, m, 4);
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::vector<double>> fs, gs;
    for (int k = 0; k < n; ++k) {
      fs.push_back(support::random_vec(rng, m));
      gs.push_back(support::random_vec(rng, m));
    }
    for (const auto* x : {&md, &rm}) {
      const double formula = inner_product_formula(field::product_kernel(fs), field::product_kernel(gs), *x->xs);
      const double direct = inner(xplus_word(fs, x->xs), xplus_word(gs, x->xs));
      INFO("n=" << n);
      CHECK(rel(formula, direct) <= 1e-10);
    }
  }
}

TEST_CASE("orthogonalized power jumps", "[xfock][property]") {
  std::mt19937_64 rng(57);
  const std::size_t m = 4;
  const auto g = grid::make_grid({0.0, 1.0, m});
  std::vector<grid::FiberMeasure> fibers;
  for (std::size_t i = 0; i < m; ++i) fibers.push_back(support::random_fiber(rng, 6, 1.2));
  const auto pg = make_product_grid(g, fibers);
  const auto sys = jacobi::build_system(fibers, 6);
  const auto big = big_fock_space(pg, 1);
  const auto omega = fock::FockVector::vacuum(big);
  const auto chi = grid::indicator(g, 0.0, 0.6);

  CHECK(fock::relative_gap(power_jump(pg, sys, 0, chi, omega), big_fock_realize(pg, chi, omega)) == 0.0);
  for (int l2 = 1; l2 <= 4; ++l2)
    for (int l1 = 0; l1 < l2; ++l1) {
      const auto y = power_jump(pg, sys, l1, chi, omega, Jump::Power);
      const auto x = power_jump(pg, sys, l2, chi, omega);
      CHECK(std::abs(fock::inner(y, x)) <= 1e-10);
    }
  for (int l = 0; l <= 4; ++l) {
    const auto x = power_jump(pg, sys, l, chi, omega);
    double expect = 0.0;
    for (std::size_t t = 0; t < m; ++t) expect += chi[t] * g.weights[t] * sys[t].g[static_cast<std::size_t>(l)];
    CHECK_THAT(fock::inner(x, x), WithinRel(expect, 1e-10));
  }
}

TEST_CASE("Meixner form of the field matches the extended operators", "[xfock][property]") {
  std::mt19937_64 rng(58);
  const std::size_t m = 3;
  grid::GridSpec spec{0.0, 1.0, m, support::random_vec(rng, m), support::random_vec(rng, m, 0.1, 2.0)};
  const auto g = grid::make_grid(spec);
  const auto xs = make_xspace(g.weights, jacobi::constant_system(g, 6), 5);
  for (int n = 0; n <= 4; ++n) {
    const auto G = field::make_kernel(m, n, support::random_vec(rng, ipow(m, static_cast<std::size_t>(n))));
    const auto f = support::random_vec(rng, m);
    INFO("order=" << n);
    CHECK(relative_gap(meixner_field(f, G, g, xs), xfield(f, embed_diagonal(G, xs))) <= 1e-12);
  }
}

TEST_CASE("an inhomogeneous fiber gives an index-dependent neutral action", "[xfock]") {
  const auto g = grid::make_grid({0.0, 1.0, 2});
  const std::vector<grid::FiberMeasure> fibers(2, grid::make_fiber({0.0, 1.0}, {0.25, 0.75}));
  const auto xs = make_xspace(g.weights, jacobi::build_system(fibers, 3), 3);
  XFockVector v(xs);
  v.component_mut({0}) = {1.0, 1.0};
  v.component_mut({1}) = {1.0, 1.0};
  const std::vector<double> one{1.0, 1.0};
  const auto out = xzero(one, v);
  CHECK_THAT(out.component({0})[0], WithinAbs(0.75, 1e-14));
  CHECK_THAT(out.component({1})[0], WithinAbs(0.25, 1e-14));
  // the second level is outside the support, so raising it is invisible in the norm
  const auto up = xplus2(one, v);
  CHECK(up.component({2}).size() == 2);
  CHECK(xs->g(2, 0) == 0.0);
}

TEST_CASE("extended vectors survive a JSON round trip", "[xfock]") {
  std::mt19937_64 rng(59);
  const auto md = random_model(rng, 3, 4);
  auto v = XFockVector::vacuum(md.xs);
  for (int k = 0; k < 3; ++k) v = xfield(support::random_vec(rng, 3), v);
  const auto back = io::xfock_from_json(io::to_json(v), md.xs);
  CHECK(relative_gap(back, v) == 0.0);
  CHECK(back.scalar() == v.scalar());
  CHECK(back.components().size() == v.components().size());
}
