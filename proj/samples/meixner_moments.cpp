// Moments of X(Delta) for a free Meixner process, from the tridiagonal
// recursion and from the extended Fock space.

#include <cstdio>

#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/xfock.hpp"

using namespace freefock;

int main() {
  const double lambda = 1.0, eta = 1.0;
  const auto g = grid::make_grid({0.0, 1.0, 4, lambda, eta});
  const int K = 8;
  const auto tri = jacobi::meixner_moments(lambda, eta, 1.0, K);

  const auto xs = xfock::make_xspace(g.weights, jacobi::constant_system(g, K + 1), K);
  const std::vector<double> chi(g.size(), 1.0);
  auto v = xfock::XFockVector::vacuum(xs);
  std::printf("%-4s %-14s %s\n", "k", "tridiagonal", "extended Fock");
  for (int k = 1; k <= K; ++k) {
    v = xfock::xfield(chi, v);
    std::printf("%-4d %-14.6f %.6f\n", k, tri[static_cast<std::size_t>(k)], v.scalar());
  }
}
