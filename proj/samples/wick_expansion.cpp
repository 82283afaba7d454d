// Expands a product of three smeared fields over G_3 and compares it with
// the direct operator product on the vacuum.

#include <cstdio>

#include "freefock/field.hpp"
#include "freefock/fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/ncpart.hpp"

using namespace freefock;

int main() {
  const auto g = grid::make_grid({0.0, 1.0, 5, std::vector<double>{0.3, -0.5, 1.0, 0.0, 0.7}, 0.0});
  const auto space = fock::make_space(g, 3);
  const auto omega = fock::FockVector::vacuum(space);

  const auto f = field::product_kernel({{1, 2, 0, 1, 1}, {0.5, 0.5, 1, -1, 0}, {1, 1, 1, 1, 1}});
  const auto direct = field::monomial_apply(f, omega);

  std::printf("%-20s %-8s %s\n", "kappa", "order", "norm of term");
  for (const auto& kappa : ncpart::enumerate_gn(3)) {
    const auto h = field::reduce_kernel(kappa, f, *space);
    const auto term = field::wick_apply(h, omega);
    std::string label;
    for (std::size_t b = 0; b < kappa.partition.blocks.size(); ++b) {
      label += "{";
      for (int x : kappa.partition.blocks[b]) label += std::to_string(x);
      label += kappa.marks[b] > 0 ? "}+" : "}-";
    }
    std::printf("%-20s %-8d %.6f\n", label.c_str(), h.order, fock::norm(term));
  }
  const auto sum = field::wick_rule_expand(f, space);
  std::printf("relative gap to the operator product: %.3e\n", fock::relative_gap(direct, sum));
}
