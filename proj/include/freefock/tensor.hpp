#pragma once

// Dense row-major tensors over a fixed per-slot dimension. The first index is
// the most significant, so prepending a slot never moves existing data.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "freefock/errors.hpp"

namespace freefock {

constexpr std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// Mode product along `slot` of a row-major tensor with the given shape:
/// out[.., r, ..] = sum_c matrix[r * shape[slot] + c] * in[.., c, ..].
/// `rows` is the new extent of that slot.
inline std::vector<double> mode_product(std::span<const double> in,
                                        const std::vector<std::size_t>& shape,
                                        std::size_t slot,
                                        std::span<const double> matrix,
                                        std::size_t rows) {
  const std::size_t cols = shape[slot];
  if (matrix.size() != rows * cols)
    throw ConfigError("mode_product: matrix shape mismatch");
  std::size_t outer = 1, inner = 1;
  for (std::size_t k = 0; k < slot; ++k) outer *= shape[k];
  for (std::size_t k = slot + 1; k < shape.size(); ++k) inner *= shape[k];
  std::vector<double> out(outer * rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = in.data() + o * cols * inner;
    double* dst = out.data() + o * rows * inner;
    for (std::size_t r = 0; r < rows; ++r) {
      double* drow = dst + r * inner;
      for (std::size_t c = 0; c < cols; ++c) {
        const double coef = matrix[r * cols + c];
        if (coef == 0.0) continue;
        const double* srow = src + c * inner;
        for (std::size_t q = 0; q < inner; ++q) drow[q] += coef * srow[q];
      }
    }
  }
  return out;
}

/// Decomposes a flat row-major index into `order` digits base `dim`.
inline void unflatten(std::size_t flat, std::size_t dim, std::size_t order,
                      std::span<std::size_t> digits) {
  for (std::size_t k = order; k-- > 0;) {
    digits[k] = flat % dim;
    flat /= dim;
  }
}

inline double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x < 0 ? -x : x);
  return m;
}

}  // namespace freefock
