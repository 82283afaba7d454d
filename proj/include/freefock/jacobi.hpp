#pragma once

// Per-node monic orthogonal polynomial systems defined by the three-term
// recursion  s p_n = p_{n+1} + b_n p_n + a_n p_{n-1},  p_{-1} = 0, p_0 = 1.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "freefock/errors.hpp"
#include "freefock/grid.hpp"

namespace freefock::jacobi {

/// Sentinel for "infinite support" in JacobiEntry::finite_support.
constexpr int kInfiniteSupport = -1;

/// Relative breakdown threshold on <p_N, p_N> used to detect N-atom support.
constexpr double kBreakdownTol = 1e-12;

/// Recursion coefficients for one fiber, levels 0..L.
/// a[0] is unused and kept at 0; a[n] = b[n] = 0 for n >= finite_support.
struct JacobiEntry {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> g;  // g[l] = a[1] * ... * a[l]
  int finite_support = kInfiniteSupport;

  int max_level() const { return static_cast<int>(b.size()) - 1; }
  bool alive(int l) const { return finite_support == kInfiniteSupport || l < finite_support; }
};

struct JacobiSystem {
  std::vector<JacobiEntry> entries;  // one per grid node

  std::size_t size() const { return entries.size(); }
  const JacobiEntry& operator[](std::size_t i) const { return entries[i]; }
  int max_level() const { return entries.empty() ? -1 : entries.front().max_level(); }
};

inline std::vector<double> product_norms(const std::vector<double>& a, int finite_support) {
  std::vector<double> g(a.size(), 0.0);
  if (g.empty()) return g;
  g[0] = 1.0;
  for (std::size_t l = 1; l < g.size(); ++l) {
    const bool dead = finite_support != kInfiniteSupport && static_cast<int>(l) >= finite_support;
    g[l] = dead ? 0.0 : g[l - 1] * a[l];
  }
  return g;
}

/// Builds an entry from explicit coefficients; a[0] is ignored.
inline JacobiEntry make_entry(std::vector<double> a, std::vector<double> b,
                              int finite_support = kInfiniteSupport) {
  if (a.size() != b.size() || b.empty())
    throw ConfigError("jacobi entry needs equal-length, non-empty a and b");
  a[0] = 0.0;
  for (std::size_t n = 1; n < a.size(); ++n) {
    const bool dead =
        finite_support != kInfiniteSupport && static_cast<int>(n) >= finite_support;
    if (dead) {
      a[n] = 0.0;
      b[n] = 0.0;
    } else if (!(a[n] > 0.0)) {
      throw ConfigError("recursion coefficient a_" + std::to_string(n) + " must be positive");
    }
  }
  auto g = product_norms(a, finite_support);
  return JacobiEntry{std::move(a), std::move(b), std::move(g), finite_support};
}

/// Constant coefficients b_n = lambda, a_n = eta: the semicircle law with mean
/// lambda and variance eta (a point mass when eta == 0).
inline JacobiEntry constant_entry(double lambda, double eta, int L) {
  if (L < 0) throw ConfigError("max level must be non-negative");
  if (eta < 0.0) throw DomainError("eta must be non-negative");
  std::vector<double> a(static_cast<std::size_t>(L) + 1, eta), b(a.size(), lambda);
  return make_entry(std::move(a), std::move(b), eta == 0.0 ? 1 : kInfiniteSupport);
}

/// Monic p_l(s) by forward recursion; zero at and beyond finite support.
inline double poly_eval(const JacobiEntry& e, int l, double s) {
  if (l < 0 || l > e.max_level())
    throw SizeError("poly_eval: degree " + std::to_string(l) + " outside [0, " +
                    std::to_string(e.max_level()) + "]");
  if (!e.alive(l)) return 0.0;
  double prev = 0.0, cur = 1.0;
  for (int n = 0; n < l; ++n) {
    const double next = (s - e.b[static_cast<std::size_t>(n)]) * cur -
                        e.a[static_cast<std::size_t>(n)] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// p_0(s) .. p_L(s).
inline std::vector<double> poly_values(const JacobiEntry& e, double s) {
  const auto L = static_cast<std::size_t>(e.max_level());
  std::vector<double> p(L + 1, 0.0);
  double prev = 0.0, cur = 1.0;
  for (std::size_t n = 0; n <= L; ++n) {
    p[n] = e.alive(static_cast<int>(n)) ? cur : 0.0;
    const double next = (s - e.b[n]) * cur - e.a[n] * prev;
    prev = cur;
    cur = next;
  }
  return p;
}

/// Stieltjes procedure under the atomic measure `mu`, levels 0..L.
inline JacobiEntry coeffs_from_measure(const grid::FiberMeasure& mu, int L) {
  if (L < 0) throw ConfigError("max level must be non-negative");
  double total = 0.0;
  for (double p : mu.probs) total += p;
  if (mu.size() == 0 || std::abs(total - 1.0) > 1e-12)
    throw ConfigError("coeffs_from_measure: measure is not normalized");

  const std::size_t M = mu.size();
  const auto Ls = static_cast<std::size_t>(L);
  std::vector<double> a(Ls + 1, 0.0), b(Ls + 1, 0.0);
  std::vector<double> prev(M, 0.0), cur(M, 1.0), next(M);
  double prev_norm = 1.0;
  int support = kInfiniteSupport;
  for (std::size_t n = 0; n <= Ls; ++n) {
    double norm = 0.0, moment = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      norm += mu.probs[j] * cur[j] * cur[j];
      moment += mu.probs[j] * mu.atoms[j] * cur[j] * cur[j];
    }
    if (n > 0 && norm < kBreakdownTol) {
      support = static_cast<int>(n);
      break;
    }
    b[n] = moment / norm;
    if (n > 0) a[n] = norm / prev_norm;
    for (std::size_t j = 0; j < M; ++j)
      next[j] = (mu.atoms[j] - b[n]) * cur[j] - a[n] * prev[j];
    prev.swap(cur);
    cur.swap(next);
    prev_norm = norm;
  }
  return make_entry(std::move(a), std::move(b), support);
}

inline JacobiSystem build_system(const std::vector<grid::FiberMeasure>& fibers, int L) {
  JacobiSystem sys;
  sys.entries.reserve(fibers.size());
  for (const auto& mu : fibers) sys.entries.push_back(coeffs_from_measure(mu, L));
  return sys;
}

inline JacobiSystem constant_system(const grid::GridMeasure& g, int L) {
  JacobiSystem sys;
  for (std::size_t i = 0; i < g.size(); ++i) sys.entries.push_back(constant_entry(g.lambda[i], g.eta[i], L));
  return sys;
}

/// g_l computed as the mu-integral of p_l^2.
inline std::vector<double> norms_by_quadrature(const JacobiEntry& e, const grid::FiberMeasure& mu) {
  std::vector<double> g(static_cast<std::size_t>(e.max_level()) + 1, 0.0);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const auto p = poly_values(e, mu.atoms[j]);
    for (std::size_t l = 0; l < g.size(); ++l) g[l] += mu.probs[j] * p[l] * p[l];
  }
  return g;
}

/// Gauss rule with M nodes: eigenvalues of the M x M Jacobi matrix and the
/// squared first components of its normalized eigenvectors.
inline grid::FiberMeasure gauss_rule(const JacobiEntry& e, int M) {
  if (M < 1 || M > e.max_level() + 1)
    throw SizeError("gauss_rule: " + std::to_string(M) + " nodes need levels up to " +
                    std::to_string(M - 1));
  if (!e.alive(M - 1))
    throw DomainError("gauss_rule: measure has fewer than " + std::to_string(M) + " atoms");
  Eigen::VectorXd diag(M), off(std::max(M - 1, 0));
  for (int n = 0; n < M; ++n) diag[n] = e.b[static_cast<std::size_t>(n)];
  for (int n = 1; n < M; ++n) off[n - 1] = std::sqrt(e.a[static_cast<std::size_t>(n)]);
  std::vector<double> atoms(static_cast<std::size_t>(M)), probs(atoms.size());
  if (M == 1) {
    atoms[0] = diag[0];
    probs[0] = 1.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw DomainError("gauss_rule: eigensolver failed");
    double total = 0.0;
    for (int k = 0; k < M; ++k) {
      atoms[static_cast<std::size_t>(k)] = solver.eigenvalues()[k];
      const double v = solver.eigenvectors()(0, k);
      probs[static_cast<std::size_t>(k)] = v * v;
      total += v * v;
    }
    for (double& p : probs) p /= total;
  }
  double reach = 0.0;
  for (double s : atoms) reach = std::max(reach, std::abs(s));
  return grid::make_fiber(std::move(atoms), std::move(probs), reach > 0.0 ? reach : 1.0);
}

/// Moments m_0..m_k of the measure of `e`, as (J^j)_{00} of its Jacobi matrix.
inline std::vector<double> moments_of(const JacobiEntry& e, int k) {
  if (k < 0) throw ConfigError("moment degree must be non-negative");
  int K = k / 2 + 1;
  if (e.finite_support != kInfiniteSupport) K = std::min(K, e.finite_support);
  if (K - 1 > e.max_level())
    throw SizeError("moments_of: degree " + std::to_string(k) + " needs levels up to " +
                    std::to_string(K - 1));
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
  for (int n = 0; n < K; ++n) {
    J(n, n) = e.b[static_cast<std::size_t>(n)];
    if (n > 0) J(n - 1, n) = J(n, n - 1) = std::sqrt(e.a[static_cast<std::size_t>(n)]);
  }
  std::vector<double> m(static_cast<std::size_t>(k) + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(K);
  v[0] = 1.0;
  for (int j = 0; j <= k; ++j) {
    m[static_cast<std::size_t>(j)] = v[0];
    v = J * v;
  }
  return m;
}

/// Moments m_0..m_k of the law with recursion coefficients b = (0, lambda,
/// lambda, ...) and a = (sigma_delta, sigma_delta + eta, ...), read off as
/// (J^j)_{00} of the K x K truncated Jacobi matrix. The truncation is exact
/// for k <= 2K - 1; K = 0 picks the smallest exact size.
inline std::vector<double> meixner_moments(double lambda, double eta, double sigma_delta, int k,
                                           int K = 0) {
  if (k < 0) throw ConfigError("moment degree must be non-negative");
  if (eta < 0.0) throw DomainError("eta must be non-negative");
  if (!(sigma_delta > 0.0)) throw DomainError("sigma(Delta) must be positive");
  if (K == 0) K = k / 2 + 1;
  if (K < 1 || k > 2 * K - 1)
    throw SizeError("meixner_moments: truncation " + std::to_string(K) +
                    " is too small for degree " + std::to_string(k));
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
  for (int n = 1; n < K; ++n) {
    J(n, n) = lambda;
    const double off = std::sqrt(n == 1 ? sigma_delta : sigma_delta + eta);
    J(n - 1, n) = off;
    J(n, n - 1) = off;
  }
  std::vector<double> m(static_cast<std::size_t>(k) + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(K);
  v[0] = 1.0;
  for (int j = 0; j <= k; ++j) {
    m[static_cast<std::size_t>(j)] = v[0];
    v = J * v;
  }
  return m;
}

}  // namespace freefock::jacobi
