#pragma once

// Processes with freely independent values: the product grid over T x R that
// carries the big Fock realization X(f) = x(f (x) 1), and the extended Fock
// space built from per-node orthogonal polynomials, a direct sum of weighted
// L^2 spaces H_(l_1..l_i) indexed by multi-indices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freefock/errors.hpp"
#include "freefock/field.hpp"
#include "freefock/fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/tensor.hpp"

namespace freefock::xfock {

// ---------------------------------------------------------------- product grid

/// Points (i, j) = (node t_i, atom s_ij of mu(t_i, .)) with weight w_i p_ij and
/// lambda(t, s) = s. Flat index offset[i] + j.
struct ProductGrid {
  std::vector<double> base_weights;
  std::vector<grid::FiberMeasure> fibers;
  std::vector<std::size_t> offset;
  std::vector<std::size_t> node_of;
  std::vector<double> weights;
  std::vector<double> atoms;

  std::size_t nodes() const { return base_weights.size(); }
  std::size_t size() const { return weights.size(); }
  std::size_t max_atoms() const {
    std::size_t k = 0;
    for (const auto& f : fibers) k = std::max(k, f.size());
    return k;
  }
};

inline ProductGrid make_product_grid(const std::vector<double>& weights,
                                     const std::vector<grid::FiberMeasure>& fibers) {
  if (weights.size() != fibers.size() || weights.empty())
    throw ConfigError("product grid needs one fiber per grid node");
  ProductGrid pg{weights, fibers, {}, {}, {}, {}};
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    pg.offset.push_back(pg.weights.size());
    for (std::size_t j = 0; j < fibers[i].size(); ++j) {
      pg.node_of.push_back(i);
      pg.weights.push_back(weights[i] * fibers[i].probs[j]);
      pg.atoms.push_back(fibers[i].atoms[j]);
    }
  }
  return pg;
}

inline ProductGrid make_product_grid(const grid::GridMeasure& g,
                                     const std::vector<grid::FiberMeasure>& fibers) {
  return make_product_grid(g.weights, fibers);
}

inline fock::SpacePtr big_fock_space(const ProductGrid& pg, int max_level) {
  return fock::make_space(pg.weights, pg.atoms, max_level);
}

/// f (x) 1 on the product grid.
inline std::vector<double> lift(const ProductGrid& pg, std::span<const double> f) {
  if (f.size() != pg.nodes()) throw ConfigError("lift: expected one value per grid node");
  std::vector<double> out(pg.size());
  for (std::size_t q = 0; q < pg.size(); ++q) out[q] = f[pg.node_of[q]];
  return out;
}

/// X(f) = a+(f (x) 1) + a-(f (x) 1) + a0(f (x) s) on the big Fock space.
inline fock::FockVector big_fock_realize(const ProductGrid& pg, std::span<const double> f,
                                         const fock::FockVector& v) {
  return fock::field_apply(lift(pg, f), v);
}

/// Kernel chi_Delta(t) p^(l)(t, s) of the orthogonalized power jump X^(l)(Delta).
inline std::vector<double> power_jump_kernel(const ProductGrid& pg, const jacobi::JacobiSystem& sys,
                                             int l, std::span<const double> chi) {
  std::vector<double> h(pg.size());
  for (std::size_t q = 0; q < pg.size(); ++q) {
    const std::size_t i = pg.node_of[q];
    h[q] = chi[i] == 0.0 ? 0.0 : chi[i] * jacobi::poly_eval(sys[i], l, pg.atoms[q]);
  }
  return h;
}

/// Kernel chi_Delta(t) s^l of the power jump Y^(l)(Delta).
inline std::vector<double> power_kernel(const ProductGrid& pg, int l, std::span<const double> chi) {
  std::vector<double> h(pg.size());
  for (std::size_t q = 0; q < pg.size(); ++q) h[q] = chi[pg.node_of[q]] * std::pow(pg.atoms[q], l);
  return h;
}

enum class Jump { Orthogonal, Power };

/// X^(l)(Delta) or Y^(l)(Delta) applied to a big Fock vector.
inline fock::FockVector power_jump(const ProductGrid& pg, const jacobi::JacobiSystem& sys, int l,
                                   std::span<const double> chi, const fock::FockVector& v,
                                   Jump kind = Jump::Orthogonal) {
  if (chi.size() != pg.nodes()) throw ConfigError("power_jump: indicator has wrong length");
  const auto h = kind == Jump::Orthogonal ? power_jump_kernel(pg, sys, l, chi) : power_kernel(pg, l, chi);
  return fock::field_apply(h, v);
}

// ------------------------------------------------------------ extended space

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& mi) {
  int d = static_cast<int>(mi.size());
  for (int l : mi) d += l;
  return d;
}

struct MultiIndexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

/// All multi-indices of the given degree, in canonical order.
inline std::vector<MultiIndex> multi_indices(int deg) {
  std::vector<MultiIndex> out;
  if (deg < 1) return out;
  // compositions of deg: each part p contributes l = p - 1
  const unsigned total = 1U << (deg - 1);
  for (unsigned cuts = 0; cuts < total; ++cuts) {
    MultiIndex mi;
    int part = 0;
    for (int x = 1; x <= deg; ++x) {
      ++part;
      if (x == deg || ((cuts >> (x - 1)) & 1U)) {
        mi.push_back(part - 1);
        part = 0;
      }
    }
    out.push_back(std::move(mi));
  }
  std::sort(out.begin(), out.end(), MultiIndexLess{});
  return out;
}

struct XFockSpace {
  std::vector<double> weights;
  jacobi::JacobiSystem sys;
  int max_degree = 0;

  std::size_t dim() const { return weights.size(); }
  double a(int l, std::size_t t) const { return sys[t].a[static_cast<std::size_t>(l)]; }
  double b(int l, std::size_t t) const { return sys[t].b[static_cast<std::size_t>(l)]; }
  double g(int l, std::size_t t) const { return sys[t].g[static_cast<std::size_t>(l)]; }
};

using XSpacePtr = std::shared_ptr<const XFockSpace>;

inline XSpacePtr make_xspace(std::vector<double> weights, jacobi::JacobiSystem sys, int max_degree) {
  if (weights.empty() || weights.size() != sys.size())
    throw ConfigError("extended Fock space needs one Jacobi entry per grid node");
  if (max_degree < 0) throw ConfigError("max degree must be non-negative");
  if (sys.max_level() < max_degree)
    throw ConfigError("Jacobi system has levels up to " + std::to_string(sys.max_level()) +
                      ", extended Fock space needs " + std::to_string(max_degree));
  return std::make_shared<const XFockSpace>(XFockSpace{std::move(weights), std::move(sys), max_degree});
}

class XFockVector {
 public:
  using Components = std::map<MultiIndex, std::vector<double>, MultiIndexLess>;

  XFockVector() = default;
  explicit XFockVector(XSpacePtr space) : space_(std::move(space)) {}

  static XFockVector vacuum(XSpacePtr space) {
    XFockVector v(std::move(space));
    v.scalar_ = 1.0;
    return v;
  }

  const XSpacePtr& space() const { return space_; }
  const XFockSpace& xs() const { return *space_; }
  double scalar() const { return scalar_; }
  double& scalar() { return scalar_; }
  const Components& components() const { return comps_; }

  std::span<const double> component(const MultiIndex& mi) const {
    const auto it = comps_.find(mi);
    if (it == comps_.end()) return {};
    return it->second;
  }

  /// Mutable component, allocated (zero) on first access.
  std::vector<double>& component_mut(const MultiIndex& mi) {
    if (mi.empty()) throw ConfigError("multi-index must have at least one slot");
    if (degree(mi) > space_->max_degree)
      throw CapacityError("multi-index degree " + std::to_string(degree(mi)) +
                          " exceeds max degree " + std::to_string(space_->max_degree));
    auto& c = comps_[mi];
    if (c.empty()) c.assign(ipow(space_->dim(), mi.size()), 0.0);
    return c;
  }

  XFockVector& axpy(double alpha, const XFockVector& x) {
    scalar_ += alpha * x.scalar_;
    for (const auto& [mi, src] : x.comps_) {
      auto& dst = component_mut(mi);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] += alpha * src[k];
    }
    return *this;
  }
  XFockVector& operator+=(const XFockVector& x) { return axpy(1.0, x); }
  XFockVector& operator-=(const XFockVector& x) { return axpy(-1.0, x); }
  XFockVector& operator*=(double alpha) {
    scalar_ *= alpha;
    for (auto& [mi, c] : comps_)
      for (double& x : c) x *= alpha;
    return *this;
  }
  friend XFockVector operator+(XFockVector a, const XFockVector& b) { return a += b; }
  friend XFockVector operator-(XFockVector a, const XFockVector& b) { return a -= b; }
  friend XFockVector operator*(double alpha, XFockVector a) { return a *= alpha; }

 private:
  XSpacePtr space_;
  double scalar_ = 0.0;
  Components comps_;
};

/// prod_j w_{t_j} g^(l_j)(t_j) over the entries of a component.
inline std::vector<double> component_weights(const XFockSpace& xs, const MultiIndex& mi) {
  std::vector<double> w{1.0};
  for (int l : mi) {
    std::vector<double> next;
    next.reserve(w.size() * xs.dim());
    for (double x : w)
      for (std::size_t t = 0; t < xs.dim(); ++t) next.push_back(x * xs.weights[t] * xs.g(l, t));
    w = std::move(next);
  }
  return w;
}

inline double inner(const XFockVector& u, const XFockVector& v) {
  double s = u.scalar() * v.scalar();
  for (const auto& [mi, a] : u.components()) {
    const auto b = v.component(mi);
    if (b.empty()) continue;
    const auto w = component_weights(u.xs(), mi);
    for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * a[k] * b[k];
  }
  return s;
}

inline double norm(const XFockVector& v) { return std::sqrt(std::max(inner(v, v), 0.0)); }

inline double relative_gap(const XFockVector& a, const XFockVector& b) {
  const double scale = std::max(norm(a), norm(b));
  const double d = norm(a - b);
  return scale == 0.0 ? d : d / scale;
}

namespace detail {
inline MultiIndex with_first(const MultiIndex& mi, int l1) {
  MultiIndex out = mi;
  out[0] = l1;
  return out;
}
inline MultiIndex prepend(const MultiIndex& mi, int l) {
  MultiIndex out{l};
  out.insert(out.end(), mi.begin(), mi.end());
  return out;
}
inline void check_f(const XFockSpace& xs, std::span<const double> f, const char* op) {
  if (f.size() != xs.dim())
    throw ConfigError(std::string(op) + ": expected one value per grid node");
}
}  // namespace detail

/// X1+(f): prepend an l = 0 slot carrying f.
inline XFockVector xplus1(std::span<const double> f, const XFockVector& v) {
  detail::check_f(v.xs(), f, "xplus");
  XFockVector out(v.space());
  if (v.scalar() != 0.0) {
    auto& c = out.component_mut({0});
    for (std::size_t t = 0; t < f.size(); ++t) c[t] = v.scalar() * f[t];
  }
  for (const auto& [mi, src] : v.components()) {
    auto& dst = out.component_mut(detail::prepend(mi, 0));
    for (std::size_t t = 0; t < f.size(); ++t)
      for (std::size_t r = 0; r < src.size(); ++r) dst[t * src.size() + r] = f[t] * src[r];
  }
  return out;
}

/// X2+(f): raise l_1, multiplying the first slot by f.
inline XFockVector xplus2(std::span<const double> f, const XFockVector& v) {
  detail::check_f(v.xs(), f, "xplus");
  XFockVector out(v.space());
  for (const auto& [mi, src] : v.components()) {
    auto& dst = out.component_mut(detail::with_first(mi, mi[0] + 1));
    const std::size_t stride = src.size() / f.size();
    for (std::size_t t = 0; t < f.size(); ++t)
      for (std::size_t r = 0; r < stride; ++r) dst[t * stride + r] += f[t] * src[t * stride + r];
  }
  return out;
}

/// X1-(f): on components with l_1 = 0, integrate the first slot against f.
inline XFockVector xminus1(std::span<const double> f, const XFockVector& v) {
  const auto& xs = v.xs();
  detail::check_f(xs, f, "xminus");
  XFockVector out(v.space());
  for (const auto& [mi, src] : v.components()) {
    if (mi[0] != 0) continue;
    if (mi.size() == 1) {
      for (std::size_t t = 0; t < f.size(); ++t) out.scalar() += xs.weights[t] * f[t] * src[t];
      continue;
    }
    auto& dst = out.component_mut(MultiIndex(mi.begin() + 1, mi.end()));
    const std::size_t stride = src.size() / f.size();
    for (std::size_t t = 0; t < f.size(); ++t) {
      const double c = xs.weights[t] * f[t];
      for (std::size_t r = 0; r < stride; ++r) dst[r] += c * src[t * stride + r];
    }
  }
  return out;
}

/// X2-(f): lower l_1 >= 1, multiplying the first slot by a^(l_1) f.
inline XFockVector xminus2(std::span<const double> f, const XFockVector& v) {
  const auto& xs = v.xs();
  detail::check_f(xs, f, "xminus");
  XFockVector out(v.space());
  for (const auto& [mi, src] : v.components()) {
    if (mi[0] == 0) continue;
    auto& dst = out.component_mut(detail::with_first(mi, mi[0] - 1));
    const std::size_t stride = src.size() / f.size();
    for (std::size_t t = 0; t < f.size(); ++t) {
      const double c = xs.a(mi[0], t) * f[t];
      for (std::size_t r = 0; r < stride; ++r) dst[t * stride + r] += c * src[t * stride + r];
    }
  }
  return out;
}

inline XFockVector xplus(std::span<const double> f, const XFockVector& v) {
  return xplus1(f, v) + xplus2(f, v);
}

inline XFockVector xminus(std::span<const double> f, const XFockVector& v) {
  return xminus1(f, v) + xminus2(f, v);
}

/// X0(f): multiply the first slot by b^(l_1) f.
inline XFockVector xzero(std::span<const double> f, const XFockVector& v) {
  const auto& xs = v.xs();
  detail::check_f(xs, f, "xzero");
  XFockVector out(v.space());
  for (const auto& [mi, src] : v.components()) {
    auto& dst = out.component_mut(mi);
    const std::size_t stride = src.size() / f.size();
    for (std::size_t t = 0; t < f.size(); ++t) {
      const double c = xs.b(mi[0], t) * f[t];
      for (std::size_t r = 0; r < stride; ++r) dst[t * stride + r] = c * src[t * stride + r];
    }
  }
  return out;
}

inline XFockVector xfield(std::span<const double> f, const XFockVector& v) {
  return xplus(f, v) + xzero(f, v) + xminus(f, v);
}

// ------------------------------------------------------- basis change K^{-1}

namespace detail {
/// Row (t, l), column (t, a) entry p_ta p^(l)(t, s_ta) / g^(l)(t).
inline std::vector<double> analysis_matrix(const ProductGrid& pg, const XFockSpace& xs, std::size_t L) {
  const std::size_t m = pg.nodes(), cols = pg.size();
  std::vector<double> T(m * L * cols, 0.0);
  for (std::size_t q = 0; q < cols; ++q) {
    const std::size_t t = pg.node_of[q];
    const std::size_t a = q - pg.offset[t];
    const auto p = jacobi::poly_values(xs.sys[t], pg.atoms[q]);
    for (std::size_t l = 0; l < L; ++l) {
      const double g = xs.g(static_cast<int>(l), t);
      if (g == 0.0) continue;
      T[(t * L + l) * cols + q] = pg.fibers[t].probs[a] * p[l] / g;
    }
  }
  return T;
}

/// Row (t, a), column (t, l) entry p^(l)(t, s_ta).
inline std::vector<double> synthesis_matrix(const ProductGrid& pg, const XFockSpace& xs, std::size_t L) {
  const std::size_t m = pg.nodes(), rows = pg.size();
  std::vector<double> S(rows * m * L, 0.0);
  for (std::size_t q = 0; q < rows; ++q) {
    const std::size_t t = pg.node_of[q];
    const auto p = jacobi::poly_values(xs.sys[t], pg.atoms[q]);
    for (std::size_t l = 0; l < L; ++l) S[q * m * L + t * L + l] = p[l];
  }
  return S;
}

inline void check_compatible(const ProductGrid& pg, const XFockSpace& xs) {
  if (pg.nodes() != xs.dim()) throw ConfigError("product grid and extended space differ in nodes");
  for (std::size_t t = 0; t < xs.dim(); ++t) {
    const int need = static_cast<int>(pg.fibers[t].size());
    if (xs.sys[t].max_level() < need)
      throw SizeError("basis change needs Jacobi levels up to the fiber size " + std::to_string(need));
  }
}
}  // namespace detail

/// Expands every slot of a big Fock vector in the orthogonal polynomial basis:
/// level i goes to the components (l_1..l_i) with l_j below the fiber size.
inline XFockVector k_transform(const ProductGrid& pg, const fock::FockVector& v, const XSpacePtr& xs) {
  detail::check_compatible(pg, *xs);
  if (v.fs().dim() != pg.size()) throw ConfigError("k_transform: vector is not over the product grid");
  const std::size_t m = pg.nodes(), L = pg.max_atoms(), mt = pg.size();
  const auto T = detail::analysis_matrix(pg, *xs, L);
  XFockVector out(xs);
  out.scalar() = v.scalar();
  for (int i = 1; i <= v.top(); ++i) {
    if (!v.has_level(i)) continue;
    std::vector<double> data(v.level(i).begin(), v.level(i).end());
    std::vector<std::size_t> shape(static_cast<std::size_t>(i), mt);
    for (std::size_t slot = 0; slot < shape.size(); ++slot) {
      data = mode_product(data, shape, slot, T, m * L);
      shape[slot] = m * L;
    }
    // data is indexed by (t_1, l_1, ..., t_i, l_i)
    const auto ui = static_cast<std::size_t>(i);
    MultiIndex mi(ui);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
      if (data[flat] == 0.0) continue;
      std::size_t rest = flat, tflat = 0, scale = 1;
      for (std::size_t s = ui; s-- > 0;) {
        mi[s] = static_cast<int>(rest % L);
        rest /= L;
        tflat += (rest % m) * scale;
        rest /= m;
        scale *= m;
      }
      out.component_mut(mi)[tflat] = data[flat];
    }
  }
  return out;
}

/// Inverse of k_transform: component (l_1..l_i) f goes to f p^(l_1) .. p^(l_i).
inline fock::FockVector k_inverse(const ProductGrid& pg, const XFockVector& x, const fock::SpacePtr& big) {
  detail::check_compatible(pg, x.xs());
  if (big->dim() != pg.size()) throw ConfigError("k_inverse: target space is not over the product grid");
  const std::size_t m = pg.nodes(), L = pg.max_atoms(), mt = pg.size();
  const auto S = detail::synthesis_matrix(pg, x.xs(), L);
  fock::FockVector out(big);
  if (x.scalar() != 0.0) out.level_mut(0)[0] = x.scalar();
  std::map<std::size_t, std::vector<double>> packed;  // level -> (t, l) tensor
  for (const auto& [mi, src] : x.components()) {
    const std::size_t i = mi.size();
    bool representable = true;
    for (int l : mi) representable = representable && static_cast<std::size_t>(l) < L;
    if (!representable) {
      // components beyond the fiber size have zero weight and no image
      continue;
    }
    auto& data = packed[i];
    if (data.empty()) data.assign(ipow(m * L, i), 0.0);
    std::vector<std::size_t> t(i);
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
      unflatten(flat, m, i, t);
      std::size_t idx = 0;
      for (std::size_t s = 0; s < i; ++s) idx = idx * (m * L) + t[s] * L + static_cast<std::size_t>(mi[s]);
      data[idx] += src[flat];
    }
  }
  for (auto& [i, data] : packed) {
    std::vector<std::size_t> shape(i, m * L);
    for (std::size_t slot = 0; slot < i; ++slot) {
      data = mode_product(data, shape, slot, S, mt);
      shape[slot] = mt;
    }
    auto& dst = out.level_mut(static_cast<int>(i));
    for (std::size_t k = 0; k < data.size(); ++k) dst[k] += data[k];
  }
  return out;
}

// ---------------------------------------------------- diagonal embeddings

namespace detail {
/// Kernel index of the pattern t_1 repeated l_1 + 1 times, t_2 repeated l_2 + 1 times, ...
inline std::size_t pattern_index(const MultiIndex& mi, std::span<const std::size_t> t, std::size_t m) {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < mi.size(); ++s)
    for (int r = 0; r <= mi[s]; ++r) idx = idx * m + t[s];
  return idx;
}
}  // namespace detail

/// Restricts an order-n kernel to every diagonal pattern of degree n.
inline XFockVector embed_diagonal(const field::Kernel& G, const XSpacePtr& xs) {
  XFockVector out(xs);
  const std::size_t m = xs->dim();
  if (G.values.size() != ipow(m, static_cast<std::size_t>(G.order)))
    throw ConfigError("embed_diagonal: kernel size does not match the grid");
  if (G.order == 0) {
    out.scalar() = G.values[0];
    return out;
  }
  for (const auto& mi : multi_indices(G.order)) {
    auto& dst = out.component_mut(mi);
    std::vector<std::size_t> t(mi.size());
    for (std::size_t flat = 0; flat < dst.size(); ++flat) {
      unflatten(flat, m, mi.size(), t);
      dst[flat] = G.values[detail::pattern_index(mi, t, m)];
    }
  }
  return out;
}

/// sum over multi-indices of degree n of the diagonal-pattern quadrature of
/// f g weighted by prod_j w_{t_j} g^(l_j)(t_j).
inline double inner_product_formula(const field::Kernel& f, const field::Kernel& g, const XFockSpace& xs) {
  if (f.order != g.order) throw ConfigError("inner_product_formula: kernels differ in order");
  if (f.order > xs.max_degree) throw SizeError("inner_product_formula: order exceeds max degree");
  if (f.order == 0) return f.values[0] * g.values[0];
  const std::size_t m = xs.dim();
  double s = 0.0;
  for (const auto& mi : multi_indices(f.order)) {
    std::vector<std::size_t> t(mi.size());
    const std::size_t count = ipow(m, mi.size());
    for (std::size_t flat = 0; flat < count; ++flat) {
      unflatten(flat, m, mi.size(), t);
      double w = 1.0;
      for (std::size_t q = 0; q < mi.size(); ++q) w *= xs.weights[t[q]] * xs.g(mi[q], t[q]);
      if (w == 0.0) continue;
      const std::size_t idx = detail::pattern_index(mi, t, m);
      s += w * f.values[idx] * g.values[idx];
    }
  }
  return s;
}

/// X+(f_1) ... X+(f_n) Omega.
inline XFockVector xplus_word(const std::vector<std::vector<double>>& fs, const XSpacePtr& xs) {
  auto v = XFockVector::vacuum(xs);
  for (std::size_t k = fs.size(); k-- > 0;) v = xplus(fs[k], v);
  return v;
}

// ---------------------------------------------------------- Meixner forms

/// The four pieces of omega(t) = d^+ + lambda d^+ d + d + eta d^+ d d smeared
/// with f and applied to an order-n kernel G in the diagonal picture.
struct MeixnerAction {
  field::Kernel raise;     // f(t_1) G(t_2, ..)
  field::Kernel neutral;   // lambda(t_1) f(t_1) G(t_1, ..)
  field::Kernel lower;     // int f(t) G(t, t_2, ..) sigma(dt)
  field::Kernel collapse;  // eta(t_1) f(t_1) G(t_1, t_1, t_2, ..)
};

inline MeixnerAction meixner_action(std::span<const double> f, const field::Kernel& G,
                                    const grid::GridMeasure& g) {
  const std::size_t m = g.size();
  const auto n = static_cast<std::size_t>(G.order);
  if (f.size() != m || G.values.size() != ipow(m, n)) throw ConfigError("meixner_action: size mismatch");
  MeixnerAction act;
  {
    std::vector<double> v(ipow(m, n + 1));
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t r = 0; r < G.values.size(); ++r) v[t * G.values.size() + r] = f[t] * G.values[r];
    act.raise = field::Kernel{G.order + 1, std::move(v)};
  }
  if (n == 0) {
    act.neutral = field::Kernel::scalar(0.0);
    act.lower = field::Kernel::scalar(0.0);
    act.collapse = field::Kernel::scalar(0.0);
    return act;
  }
  const std::size_t stride = G.values.size() / m;
  std::vector<double> neu(G.values.size());
  std::vector<double> low(stride, 0.0);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t r = 0; r < stride; ++r) {
      const double x = G.values[t * stride + r];
      neu[t * stride + r] = g.lambda[t] * f[t] * x;
      low[r] += g.weights[t] * f[t] * x;
    }
  act.neutral = field::Kernel{G.order, std::move(neu)};
  act.lower = field::Kernel{G.order - 1, std::move(low)};
  if (n < 2) {
    act.collapse = field::Kernel::scalar(0.0);
  } else {
    const std::size_t inner = stride / m;
    std::vector<double> col(stride);
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t r = 0; r < inner; ++r)
        col[t * inner + r] = g.eta[t] * f[t] * G.values[(t * m + t) * inner + r];
    act.collapse = field::Kernel{G.order - 1, std::move(col)};
  }
  return act;
}

/// The Meixner form of the field in the diagonal picture, embedded in the
/// extended space.
inline XFockVector meixner_field(std::span<const double> f, const field::Kernel& G,
                                 const grid::GridMeasure& g, const XSpacePtr& xs) {
  const auto act = meixner_action(f, G, g);
  auto out = embed_diagonal(act.raise, xs);
  if (G.order >= 1) {
    out += embed_diagonal(act.neutral, xs);
    out += embed_diagonal(act.lower, xs);
  }
  if (G.order >= 2) out += embed_diagonal(act.collapse, xs);
  return out;
}

}  // namespace freefock::xfock
