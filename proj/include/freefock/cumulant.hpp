#pragma once

// Vacuum moments of field products, free cumulants, the moment-cumulant
// relation over NC(n), and the free cumulant transform.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "freefock/errors.hpp"
#include "freefock/fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/ncpart.hpp"
#include "freefock/xfock.hpp"

namespace freefock::cumulant {

/// Lambda: the Gauss-Poisson field with neutral coefficient lambda(t).
/// Fiber: X(f) over explicit atomic fibers mu(t, .).
/// Meixner: X(f) with semicircle fibers of mean lambda(t) and variance eta(t).
enum class Mode { Lambda, Fiber, Meixner };

struct CumulantSpec {
  Mode mode = Mode::Lambda;
  grid::GridMeasure grid;
  std::vector<grid::FiberMeasure> fibers;  // required in fiber mode
  std::size_t fiber_nodes = 8;             // Gauss nodes for Meixner moments computed by operators
};

inline void validate(const CumulantSpec& spec) {
  if (spec.mode == Mode::Fiber && spec.fibers.size() != spec.grid.size())
    throw ConfigError("fiber mode needs one fiber per grid node");
}

/// k-th moment of the per-node law entering the (k+2)-th cumulant: lambda^k,
/// the k-th fiber moment, or the k-th semicircle moment.
inline std::vector<double> node_moments(const CumulantSpec& spec, int k) {
  validate(spec);
  const std::size_t m = spec.grid.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    switch (spec.mode) {
      case Mode::Lambda: {
        double x = 1.0;
        for (int q = 0; q < k; ++q) x *= spec.grid.lambda[i];
        out[i] = x;
        break;
      }
      case Mode::Fiber:
        out[i] = grid::fiber_moment(spec.fibers[i], k);
        break;
      case Mode::Meixner: {
        const auto e = jacobi::constant_entry(spec.grid.lambda[i], spec.grid.eta[i], k / 2 + 1);
        out[i] = jacobi::moments_of(e, k)[static_cast<std::size_t>(k)];
        break;
      }
    }
  }
  return out;
}

/// C(f_1, .., f_n) = 0 for n = 1, else the quadrature of f_1 .. f_n M_{n-2}.
inline double cumulant_direct(const std::vector<std::vector<double>>& fs, const CumulantSpec& spec) {
  const std::size_t n = fs.size();
  if (n == 0) throw ConfigError("cumulant of an empty tuple");
  for (const auto& f : fs)
    if (f.size() != spec.grid.size()) throw ConfigError("cumulant_direct: node count mismatch");
  if (n == 1) return 0.0;
  const auto mom = node_moments(spec, static_cast<int>(n) - 2);
  double s = 0.0;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    double p = spec.grid.weights[i] * mom[i];
    for (const auto& f : fs) p *= f[i];
    s += p;
  }
  return s;
}

/// Fibers used by the operator realization of fiber and Meixner modes.
inline std::vector<grid::FiberMeasure> operator_fibers(const CumulantSpec& spec) {
  if (spec.mode == Mode::Fiber) return spec.fibers;
  return grid::semicircle_fibers(spec.grid, spec.fiber_nodes);
}

/// Vacuum expectation of F(f_1) .. F(f_n) where F applies one field operator.
/// Uses <F_{k+1} .. F_n Omega, F_k .. F_1 Omega> with k = n/2, valid since each
/// field is symmetric, so only levels up to ceil(n/2) are ever built.
template <class Field>
double split_moment(const std::vector<std::vector<double>>& fs, const fock::SpacePtr& space, Field&& apply) {
  const std::size_t n = fs.size();
  const std::size_t k = n / 2;
  auto right = fock::FockVector::vacuum(space);
  for (std::size_t q = n; q-- > k;) right = apply(fs[q], right);
  auto left = fock::FockVector::vacuum(space);
  for (std::size_t q = 0; q < k; ++q) left = apply(fs[q], left);
  return fock::inner(right, left);
}

inline int split_levels(std::size_t n) { return static_cast<int>(n - n / 2); }

/// tau(x(f_1) .. x(f_n)) in lambda mode, tau(X(f_1) .. X(f_n)) otherwise.
inline double moment(const std::vector<std::vector<double>>& fs, const CumulantSpec& spec) {
  validate(spec);
  if (fs.empty()) return 1.0;
  if (spec.mode == Mode::Lambda) {
    const auto space = fock::make_space(spec.grid, split_levels(fs.size()));
    return split_moment(fs, space, [](const std::vector<double>& f, const fock::FockVector& v) {
      return fock::field_apply(f, v);
    });
  }
  const auto pg = xfock::make_product_grid(spec.grid, operator_fibers(spec));
  const auto space = xfock::big_fock_space(pg, split_levels(fs.size()));
  return split_moment(fs, space, [&](const std::vector<double>& f, const fock::FockVector& v) {
    return xfock::big_fock_realize(pg, f, v);
  });
}

/// sum over pi in NC(n) of the product of direct cumulants over blocks.
inline double nc_moment(const std::vector<std::vector<double>>& fs, const CumulantSpec& spec) {
  if (fs.empty()) return 1.0;
  double total = 0.0;
  ncpart::for_each_nc(static_cast<int>(fs.size()), [&](const ncpart::SetPartition& p) {
    double prod = 1.0;
    for (const auto& block : p.blocks) {
      if (block.size() == 1) return;  // first cumulants vanish
      std::vector<std::vector<double>> sub;
      for (int x : block) sub.push_back(fs[static_cast<std::size_t>(x - 1)]);
      prod *= cumulant_direct(sub, spec);
      if (prod == 0.0) return;
    }
    total += prod;
  });
  return total;
}

/// Top cumulant recovered from moments by inverting the NC(n) relation,
/// memoized over sub-tuples.
inline double cumulant_from_moments(const std::vector<std::vector<double>>& fs, const CumulantSpec& spec) {
  const int n = static_cast<int>(fs.size());
  if (n == 0) throw ConfigError("cumulant of an empty tuple");
  if (n > ncpart::kMaxNc || n > 20) throw SizeError("cumulant_from_moments: n too large");
  std::unordered_map<std::uint32_t, double> memo;
  std::vector<std::vector<ncpart::SetPartition>> nc(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n; ++k) nc[static_cast<std::size_t>(k)] = ncpart::enumerate_nc(k);

  auto members = [](std::uint32_t mask) {
    std::vector<int> out;
    for (int b = 0; b < 32; ++b)
      if ((mask >> b) & 1U) out.push_back(b);
    return out;
  };
  auto rec = [&](auto&& self, std::uint32_t mask) -> double {
    if (const auto it = memo.find(mask); it != memo.end()) return it->second;
    const auto idx = members(mask);
    const std::size_t k = idx.size();
    double c = 0.0;
    if (k >= 2) {
      std::vector<std::vector<double>> sub;
      for (int q : idx) sub.push_back(fs[static_cast<std::size_t>(q)]);
      c = moment(sub, spec);
      for (const auto& p : nc[k]) {
        if (p.blocks.size() == 1) continue;
        double prod = 1.0;
        for (const auto& block : p.blocks) {
          std::uint32_t sm = 0;
          for (int x : block) sm |= 1U << idx[static_cast<std::size_t>(x - 1)];
          prod *= self(self, sm);
          if (prod == 0.0) break;
        }
        c -= prod;
      }
    }
    memo.emplace(mask, c);
    return c;
  };
  return rec(rec, (n == 32 ? 0U : (1U << n)) - 1U);
}

struct TransformReport {
  std::complex<double> closed;
  std::complex<double> series;
  double gap = 0.0;
  double tail_bound = 0.0;  // geometric majorant of the omitted terms
  int degree = 0;
};

/// Per-node radius R(t): |f(t)| R(t) < 1 keeps the cumulant series convergent.
inline std::vector<double> radius(const CumulantSpec& spec) {
  validate(spec);
  std::vector<double> r(spec.grid.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    switch (spec.mode) {
      case Mode::Lambda: r[i] = std::abs(spec.grid.lambda[i]); break;
      case Mode::Fiber: {
        double reach = 0.0;
        for (double s : spec.fibers[i].atoms) reach = std::max(reach, std::abs(s));
        r[i] = reach;
        break;
      }
      case Mode::Meixner:
        r[i] = std::abs(spec.grid.lambda[i]) + 2.0 * std::sqrt(spec.grid.eta[i]);
        break;
    }
  }
  return r;
}

/// Closed form of sum_n C^(n)(f, .., f) next to the series truncated at `degree`.
inline TransformReport cumulant_transform(const std::vector<std::complex<double>>& f, const CumulantSpec& spec,
                                          int degree = 30) {
  const auto& g = spec.grid;
  if (f.size() != g.size()) throw ConfigError("cumulant_transform: node count mismatch");
  if (degree < 1) throw ConfigError("cumulant_transform: degree must be positive");
  const auto R = radius(spec);
  TransformReport rep;
  rep.degree = degree;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = std::abs(f[i]) * R[i];
    if (!(q < 1.0))
      throw DomainError("cumulant_transform: |f| R = " + std::to_string(q) + " >= 1 at node " +
                        std::to_string(i));
    const std::complex<double> f2 = f[i] * f[i];
    std::complex<double> closed;
    switch (spec.mode) {
      case Mode::Lambda: closed = f2 / (1.0 - g.lambda[i] * f[i]); break;
      case Mode::Fiber:
        for (std::size_t j = 0; j < spec.fibers[i].size(); ++j)
          closed += spec.fibers[i].probs[j] * f2 / (1.0 - spec.fibers[i].atoms[j] * f[i]);
        break;
      case Mode::Meixner: {
        const std::complex<double> u = 1.0 - g.lambda[i] * f[i];
        closed = 2.0 * f2 / (u + std::sqrt(u * u - 4.0 * g.eta[i] * f2));
        break;
      }
    }
    rep.closed += g.weights[i] * closed;
    rep.tail_bound += g.weights[i] * std::norm(f[i]) * std::pow(q, degree - 1) / (1.0 - q);
  }
  for (int n = 2; n <= degree; ++n) {
    const auto mom = node_moments(spec, n - 2);
    for (std::size_t i = 0; i < f.size(); ++i) rep.series += g.weights[i] * mom[i] * std::pow(f[i], n);
  }
  rep.gap = std::abs(rep.closed - rep.series);
  return rep;
}

}  // namespace freefock::cumulant
