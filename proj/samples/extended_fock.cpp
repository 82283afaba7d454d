// Realizes X(f) on the big Fock space over T x R and in the extended Fock
// space, and maps one into the other with the polynomial basis change.

#include <cstdio>

#include "freefock/fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/xfock.hpp"

using namespace freefock;

int main() {
  const auto g = grid::make_grid({0.0, 1.0, 3, 0.0, 0.0});
  const std::vector<grid::FiberMeasure> fibers{
      grid::make_fiber({-1.0, 0.5}, {0.4, 0.6}),
      grid::make_fiber({0.0, 1.0, 2.0}, {0.2, 0.5, 0.3}),
      grid::make_fiber({0.25}, {1.0}),
  };
  const auto pg = xfock::make_product_grid(g, fibers);
  const auto sys = jacobi::build_system(fibers, 8);
  const auto xs = xfock::make_xspace(g.weights, sys, 8);
  const auto big = xfock::big_fock_space(pg, 2);

  const std::vector<double> f{1.0, -0.5, 2.0}, h{0.3, 1.0, 1.0};
  const auto omega = fock::FockVector::vacuum(big);
  const auto v = xfock::big_fock_realize(pg, f, xfock::big_fock_realize(pg, h, omega));
  const auto kv = xfock::k_transform(pg, v, xs);
  const auto w = xfock::xfield(f, xfock::xfield(h, xfock::XFockVector::vacuum(xs)));

  std::printf("tau(X(f) X(h)) = %.12f\n", v.scalar());
  for (const auto& [mi, values] : kv.components()) {
    std::printf("component (");
    for (std::size_t k = 0; k < mi.size(); ++k) std::printf("%s%d", k ? "," : "", mi[k]);
    std::printf(") has %zu entries\n", values.size());
  }
  // entries on zero-weight slots may differ, so compare in the extended norm
  std::printf("basis change vs extended-space product: relative gap %.2e\n", xfock::relative_gap(kv, w));
  std::printf("norms: big Fock %.12f, extended %.12f\n", fock::norm(v), xfock::norm(kv));
}
