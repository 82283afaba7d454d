#pragma once

// Truncated full Fock space over a weighted finite one-particle space.
// Level n is a dense row-major array of size m^n; the inner product weights
// every slot by the node weights w.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freefock/errors.hpp"
#include "freefock/grid.hpp"
#include "freefock/tensor.hpp"

namespace freefock::fock {

struct FockSpace {
  std::vector<double> weights;
  std::vector<double> lambda;  // coefficient of the neutral part of the field
  int max_level = 0;

  std::size_t dim() const { return weights.size(); }
  std::size_t level_size(int n) const { return ipow(dim(), static_cast<std::size_t>(n)); }
};

using SpacePtr = std::shared_ptr<const FockSpace>;

inline SpacePtr make_space(std::vector<double> weights, std::vector<double> lambda,
                           int max_level) {
  if (weights.empty()) throw ConfigError("fock space needs at least one node");
  if (lambda.size() != weights.size())
    throw ConfigError("fock space: lambda and weights differ in length");
  for (double w : weights)
    if (!(w > 0.0)) throw ConfigError("fock space weights must be positive");
  if (max_level < 0) throw ConfigError("fock space max level must be non-negative");
  return std::make_shared<const FockSpace>(FockSpace{std::move(weights), std::move(lambda), max_level});
}

inline SpacePtr make_space(const grid::GridMeasure& g, int max_level) {
  return make_space(g.weights, g.lambda, max_level);
}

/// A finite element of the Fock space. Levels above levels.size()-1 are zero.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(SpacePtr space) : space_(std::move(space)) {}

  static FockVector vacuum(SpacePtr space) {
    FockVector v(std::move(space));
    v.levels_.push_back({1.0});
    return v;
  }

  /// A vector whose only non-zero component is `values` at level n.
  static FockVector homogeneous(SpacePtr space, int n, std::vector<double> values) {
    FockVector v(std::move(space));
    v.check_level(n);
    if (values.size() != v.space_->level_size(n))
      throw ConfigError("homogeneous: level " + std::to_string(n) + " expects " +
                        std::to_string(v.space_->level_size(n)) + " entries");
    v.ensure(n);
    v.levels_[static_cast<std::size_t>(n)] = std::move(values);
    return v;
  }

  const SpacePtr& space() const { return space_; }
  const FockSpace& fs() const { return *space_; }

  /// Highest stored level, -1 for the empty vector.
  int top() const { return static_cast<int>(levels_.size()) - 1; }

  std::span<const double> level(int n) const {
    if (n < 0 || n > top()) return {};
    return levels_[static_cast<std::size_t>(n)];
  }

  /// Mutable level n, allocated (zero) on first access.
  std::vector<double>& level_mut(int n) {
    check_level(n);
    ensure(n);
    return levels_[static_cast<std::size_t>(n)];
  }

  bool has_level(int n) const { return n >= 0 && n <= top() && !levels_[static_cast<std::size_t>(n)].empty(); }

  double scalar() const { return has_level(0) ? levels_[0][0] : 0.0; }

  FockVector& axpy(double alpha, const FockVector& x) {
    for (int n = 0; n <= x.top(); ++n) {
      if (!x.has_level(n)) continue;
      auto& dst = level_mut(n);
      const auto src = x.level(n);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] += alpha * src[k];
    }
    return *this;
  }

  FockVector& operator+=(const FockVector& x) { return axpy(1.0, x); }
  FockVector& operator-=(const FockVector& x) { return axpy(-1.0, x); }
  FockVector& operator*=(double alpha) {
    for (auto& l : levels_)
      for (double& x : l) x *= alpha;
    return *this;
  }

  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(double alpha, FockVector a) { return a *= alpha; }

  void check_level(int n) const {
    if (n < 0) throw SizeError("negative Fock level");
    if (n > space_->max_level)
      throw CapacityError("Fock level " + std::to_string(n) + " exceeds max level " +
                          std::to_string(space_->max_level));
  }

 private:
  void ensure(int n) {
    if (n > top()) levels_.resize(static_cast<std::size_t>(n) + 1);
    auto& l = levels_[static_cast<std::size_t>(n)];
    if (l.empty()) l.assign(space_->level_size(n), 0.0);
  }

  SpacePtr space_;
  std::vector<std::vector<double>> levels_;
};

/// Product of the node weights of each multi-index at level n.
inline std::vector<double> level_weights(const FockSpace& fs, int n) {
  std::vector<double> w{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next;
    next.reserve(w.size() * fs.dim());
    for (double x : w)
      for (double wi : fs.weights) next.push_back(x * wi);
    w = std::move(next);
  }
  return w;
}

inline double inner(const FockVector& u, const FockVector& v) {
  double s = 0.0;
  const int top = std::min(u.top(), v.top());
  for (int n = 0; n <= top; ++n) {
    if (!u.has_level(n) || !v.has_level(n)) continue;
    const auto w = level_weights(u.fs(), n);
    const auto a = u.level(n), b = v.level(n);
    for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * a[k] * b[k];
  }
  return s;
}

inline double norm(const FockVector& v) { return std::sqrt(std::max(inner(v, v), 0.0)); }

inline void check_node_values(const FockSpace& fs, std::span<const double> f, const char* op) {
  if (f.size() != fs.dim())
    throw ConfigError(std::string(op) + ": expected " + std::to_string(fs.dim()) +
                      " node values, got " + std::to_string(f.size()));
}

/// a+(f): level n -> n+1, out[j, r] = f_j v[r].
inline FockVector create(std::span<const double> f, const FockVector& v) {
  check_node_values(v.fs(), f, "create");
  FockVector out(v.space());
  for (int n = 0; n <= v.top(); ++n) {
    if (!v.has_level(n)) continue;
    auto& dst = out.level_mut(n + 1);
    const auto src = v.level(n);
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f[j] == 0.0) continue;
      double* d = dst.data() + j * src.size();
      for (std::size_t r = 0; r < src.size(); ++r) d[r] = f[j] * src[r];
    }
  }
  return out;
}

/// a-(f): contracts the first slot against w f.
inline FockVector annihilate(std::span<const double> f, const FockVector& v) {
  const auto& fs = v.fs();
  check_node_values(fs, f, "annihilate");
  FockVector out(v.space());
  for (int n = 1; n <= v.top(); ++n) {
    if (!v.has_level(n)) continue;
    auto& dst = out.level_mut(n - 1);
    const auto src = v.level(n);
    const std::size_t stride = dst.size();
    for (std::size_t j = 0; j < fs.dim(); ++j) {
      const double c = fs.weights[j] * f[j];
      if (c == 0.0) continue;
      const double* s = src.data() + j * stride;
      for (std::size_t r = 0; r < stride; ++r) dst[r] += c * s[r];
    }
  }
  return out;
}

/// a0(f): multiplies the first slot by f.
inline FockVector neutral(std::span<const double> f, const FockVector& v) {
  check_node_values(v.fs(), f, "neutral");
  FockVector out(v.space());
  for (int n = 1; n <= v.top(); ++n) {
    if (!v.has_level(n)) continue;
    auto& dst = out.level_mut(n);
    const auto src = v.level(n);
    const std::size_t stride = src.size() / f.size();
    for (std::size_t j = 0; j < f.size(); ++j)
      for (std::size_t r = 0; r < stride; ++r) dst[j * stride + r] = f[j] * src[j * stride + r];
  }
  return out;
}

/// Point annihilator: the slice with first index i.
inline FockVector point_annihilate(std::size_t i, const FockVector& v) {
  const auto& fs = v.fs();
  if (i >= fs.dim()) throw SizeError("point_annihilate: node index out of range");
  FockVector out(v.space());
  for (int n = 1; n <= v.top(); ++n) {
    if (!v.has_level(n)) continue;
    auto& dst = out.level_mut(n - 1);
    const auto src = v.level(n);
    std::copy_n(src.data() + i * dst.size(), dst.size(), dst.data());
  }
  return out;
}

/// Point creator: prepends the discrete delta at node i (value 1/w_i there),
/// so that sum_i w_i f_i point_create(i, .) = create(f, .) and
/// point_annihilate(i, point_create(j, .)) = delta_ij / w_i.
inline FockVector point_create(std::size_t i, const FockVector& v) {
  const auto& fs = v.fs();
  if (i >= fs.dim()) throw SizeError("point_create: node index out of range");
  std::vector<double> delta(fs.dim(), 0.0);
  delta[i] = 1.0 / fs.weights[i];
  return create(delta, v);
}

/// x(f) = a+(f) + a-(f) + a0(lambda f).
inline FockVector field_apply(std::span<const double> f, const FockVector& v) {
  const auto& fs = v.fs();
  check_node_values(fs, f, "field_apply");
  std::vector<double> lf(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) lf[j] = fs.lambda[j] * f[j];
  FockVector out = create(f, v);
  out += annihilate(f, v);
  out += neutral(lf, v);
  return out;
}

/// Relative distance ||a - b|| / max(||a||, ||b||), 0 when both vanish.
inline double relative_gap(const FockVector& a, const FockVector& b) {
  const double scale = std::max(norm(a), norm(b));
  const double d = norm(a - b);
  return scale == 0.0 ? d : d / scale;
}

}  // namespace freefock::fock
