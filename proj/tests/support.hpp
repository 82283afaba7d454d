#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "freefock/grid.hpp"

namespace support {

inline std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline freefock::grid::GridMeasure random_lambda_grid(std::mt19937_64& rng, std::size_t m) {
  return freefock::grid::make_grid({0.0, 1.0, m, random_vec(rng, m), 0.0});
}

/// A random atomic probability measure with k atoms in [-R, R].
inline freefock::grid::FiberMeasure random_fiber(std::mt19937_64& rng, std::size_t k, double R = 1.5) {
  auto atoms = random_vec(rng, k, -R, R);
  auto probs = random_vec(rng, k, 0.2, 1.0);
  double s = 0.0;
  for (double p : probs) s += p;
  for (double& p : probs) p /= s;
  double rest = 1.0;
  for (std::size_t j = 0; j + 1 < k; ++j) rest -= probs[j];
  probs[k - 1] = rest;
  return freefock::grid::make_fiber(std::move(atoms), std::move(probs), R);
}

}  // namespace support
