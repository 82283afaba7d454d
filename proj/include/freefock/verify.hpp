#pragma once

// Seeded self-checks of the algebraic identities, grouped in suites that the
// command-line front end runs against a model configuration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "freefock/config.hpp"
#include "freefock/cumulant.hpp"
#include "freefock/field.hpp"
#include "freefock/fock.hpp"
#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/ncpart.hpp"
#include "freefock/xfock.hpp"

namespace freefock::verify {

struct Check {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct Report {
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  double max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }
};

struct Options {
  int n_max = 5;
  std::uint64_t seed = 1;
};

/// |a - b| / max(|a|, |b|, 1)
inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline fock::FockVector random_fock(const fock::SpacePtr& space, int top, Rng& rng) {
  fock::FockVector v(space);
  for (int n = 0; n <= top; ++n) v.level_mut(n) = rng.vec(space->level_size(n));
  return v;
}

/// Random entries on every multi-index of degree <= deg.
inline xfock::XFockVector random_xfock(const xfock::XSpacePtr& xs, int deg, Rng& rng) {
  xfock::XFockVector v(xs);
  v.scalar() = rng.uniform();
  for (int d = 1; d <= deg; ++d)
    for (const auto& mi : xfock::multi_indices(d)) v.component_mut(mi) = rng.vec(ipow(xs->dim(), mi.size()));
  return v;
}

/// All compositions of n with at most `parts` parts.
inline std::vector<std::vector<int>> compositions(int n, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == parts) return;
    for (int k = 1; k <= left; ++k) {
      cur.push_back(k);
      rec(left - k);
      cur.pop_back();
    }
  };
  rec(n);
  return out;
}

namespace detail {

class Recorder {
 public:
  Recorder(Report& r, std::string suite) : report_(r), suite_(std::move(suite)) {}
  void add(const std::string& name, double residual, double tol) {
    report_.checks.push_back({suite_, name, residual, tol, std::isfinite(residual) && residual <= tol});
  }

 private:
  Report& report_;
  std::string suite_;
};

inline std::string str(const std::vector<int>& xs) {
  std::ostringstream os;
  for (std::size_t k = 0; k < xs.size(); ++k) os << (k ? "," : "") << xs[k];
  return os.str();
}

/// v_j = F^j Omega for j = 0..J, built once.
template <class Vec, class Apply>
std::vector<Vec> powers(Vec omega, int J, Apply&& apply) {
  std::vector<Vec> out{std::move(omega)};
  for (int j = 1; j <= J; ++j) out.push_back(apply(out.back()));
  return out;
}

}  // namespace detail

inline void wick_suite(const config::ModelConfig& cfg, const Options& opt, Report& report) {
  detail::Recorder rec(report, "wick");
  const double tol = cfg.tolerances.identity;
  const auto g = cfg.grid();
  const std::size_t m = g.size();
  Rng rng(opt.seed);
  const int n_max = std::min(opt.n_max, ncpart::kMaxGn);
  const auto space = fock::make_space(g, n_max + 2);
  const auto omega = fock::FockVector::vacuum(space);
  for (int n = 1; n <= n_max; ++n) {
    const auto f = field::make_kernel(m, n, rng.vec(ipow(m, static_cast<std::size_t>(n))));
    const auto lhs = field::monomial_apply(f, omega);
    rec.add("wick_rule n=" + std::to_string(n), fock::relative_gap(lhs, field::wick_rule_expand(f, space)), tol);

    const auto proj = field::wick_apply(f, omega);
    rec.add("projection n=" + std::to_string(n),
            fock::relative_gap(proj, fock::FockVector::homogeneous(space, n, f.values)), tol);

    const auto v = random_fock(space, 2, rng);
    rec.add("recursion_vs_explicit n=" + std::to_string(n),
            fock::relative_gap(field::wick_apply(f, v), field::wick_apply_explicit(f, v)), tol);

    std::vector<std::vector<double>> factors;
    for (int k = 0; k < n; ++k) factors.push_back(rng.vec(m));
    auto iterated = v;
    for (int k = n; k-- > 0;) iterated = fock::field_apply(factors[static_cast<std::size_t>(k)], iterated);
    rec.add("monomial_vs_fields n=" + std::to_string(n),
            fock::relative_gap(field::monomial_apply(field::product_kernel(factors), v), iterated), tol);

    for (const auto& orders : compositions(n, 3)) {
      if (orders.size() < 2) continue;
      rec.add("normal_products (" + detail::str(orders) + ")",
              fock::relative_gap(field::wick_product_apply(orders, f, omega),
                                 field::wick_product_expand(orders, f, space)),
              tol);
    }
  }
}

inline void cumulant_suite(const config::ModelConfig& cfg, const Options& opt, Report& report) {
  detail::Recorder rec(report, "cumulant");
  const double tol = cfg.tolerances.identity;
  Rng rng(opt.seed + 1);
  auto spec = cfg.cumulant_spec();
  const std::size_t m = spec.grid.size();
  const int n_top = std::min(6, cfg.budgets.max_degree);

  auto lambda_spec = spec;
  lambda_spec.mode = cumulant::Mode::Lambda;
  std::vector<cumulant::CumulantSpec> specs{lambda_spec};
  if (spec.mode != cumulant::Mode::Lambda) specs.push_back(spec);
  for (const auto& sp : specs) {
    const std::string tag = sp.mode == cumulant::Mode::Lambda ? "lambda" : (sp.mode == cumulant::Mode::Fiber ? "fiber" : "meixner");
    for (int n = 1; n <= n_top; ++n) {
      std::vector<std::vector<double>> fs;
      for (int k = 0; k < n; ++k) fs.push_back(rng.vec(m));
      rec.add("moment_vs_nc_sum " + tag + " n=" + std::to_string(n),
              rel(cumulant::moment(fs, sp), cumulant::nc_moment(fs, sp)), tol);
      if (n <= 4)
        rec.add("cumulant_from_moments " + tag + " n=" + std::to_string(n),
                rel(cumulant::cumulant_from_moments(fs, sp), cumulant::cumulant_direct(fs, sp)), tol);
    }
    // disjoint supports: first half of the nodes against the second half
    std::vector<double> f(m, 0.0), h(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) (i < m / 2 ? f : h)[i] = rng.uniform(0.5, 1.5);
    if (m >= 2) {
      double mixed = 0.0;
      for (const auto& word : std::vector<std::vector<std::vector<double>>>{{f, h}, {f, h, f}, {h, f, f, h}, {f, f, h, h, f}})
        mixed = std::max(mixed, std::abs(cumulant::cumulant_direct(word, sp)));
      rec.add("mixed_cumulants_vanish " + tag, mixed, 0.0);
      rec.add("free_factorization " + tag,
              rel(cumulant::moment({f, h, f, h}, sp), cumulant::nc_moment({f, h, f, h}, sp)), tol);
    }
    // tau(ab) = tau(ba)
    double trace_gap = 0.0;
    for (int total = 2; total <= n_top; ++total) {
      std::vector<std::vector<double>> word;
      for (int k = 0; k < total; ++k) word.push_back(rng.vec(m));
      const std::size_t cut = 1 + rng.index(static_cast<std::size_t>(total - 1));
      std::vector<std::vector<double>> rotated(word.begin() + static_cast<std::ptrdiff_t>(cut), word.end());
      rotated.insert(rotated.end(), word.begin(), word.begin() + static_cast<std::ptrdiff_t>(cut));
      trace_gap = std::max(trace_gap, rel(cumulant::moment(word, sp), cumulant::moment(rotated, sp)));
    }
    rec.add("traciality " + tag, trace_gap, tol);

    // transform at half the admissible radius
    const auto R = cumulant::radius(sp);
    const double rmax = *std::max_element(R.begin(), R.end());
    const double c = rmax > 0.0 ? 0.5 / rmax : 0.5;
    std::vector<std::complex<double>> fc(m, c);
    const auto rep = cumulant::cumulant_transform(fc, sp, 30);
    rec.add("transform_closed_vs_series " + tag, rep.gap, cfg.tolerances.transform);
  }
}

struct XModel {
  grid::GridMeasure grid;
  std::vector<grid::FiberMeasure> fibers;
  xfock::ProductGrid pg;
  jacobi::JacobiSystem sys;
};

inline XModel make_xmodel(const config::ModelConfig& cfg, int levels) {
  XModel x;
  x.grid = cfg.grid();
  x.fibers = cfg.fiber_set(x.grid);
  x.pg = xfock::make_product_grid(x.grid, x.fibers);
  x.sys = jacobi::build_system(x.fibers, levels);
  return x;
}

inline void xfock_suite(const config::ModelConfig& cfg, const Options& opt, Report& report) {
  detail::Recorder rec(report, "xfock");
  const double tol = cfg.tolerances.identity;
  Rng rng(opt.seed + 2);
  const int D = cfg.budgets.max_degree;
  const int M = static_cast<int>(std::max<std::size_t>(1, [&] {
    std::size_t k = 0;
    for (const auto& f : cfg.fiber_set(cfg.grid())) k = std::max(k, f.size());
    return k;
  }()));
  const int levels = std::max(D, 3 * M) + 2;
  const auto x = make_xmodel(cfg, levels);
  const std::size_t m = x.grid.size();

  // vacuum moments, big Fock against the extended space
  const auto xs = xfock::make_xspace(x.grid.weights, x.sys, D);
  const auto big = xfock::big_fock_space(x.pg, cumulant::split_levels(static_cast<std::size_t>(D)));
  double worst = 0.0;
  for (int n = 1; n <= D; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::vector<double>> fs;
      for (int k = 0; k < n; ++k) fs.push_back(rng.vec(m));
      const double a = cumulant::split_moment(fs, big, [&](const std::vector<double>& f, const fock::FockVector& v) {
        return xfock::big_fock_realize(x.pg, f, v);
      });
      auto v = xfock::XFockVector::vacuum(xs);
      for (std::size_t k = fs.size(); k-- > 0;) v = xfock::xfield(fs[k], v);
      worst = std::max(worst, rel(a, v.scalar()));
    }
  rec.add("moments_big_fock_vs_extended", worst, tol);

  // basis change on random vectors of levels <= 2
  const auto xs_k = xfock::make_xspace(x.grid.weights, x.sys, 3 * M);
  const auto big3 = xfock::big_fock_space(x.pg, 3);
  double norm_gap = 0.0, inter_gap = 0.0, inv_gap = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto v = random_fock(big3, 2, rng);
    const auto f = rng.vec(m);
    const auto kv = xfock::k_transform(x.pg, v, xs_k);
    norm_gap = std::max(norm_gap, rel(fock::norm(v), xfock::norm(kv)));
    inv_gap = std::max(inv_gap, fock::relative_gap(xfock::k_inverse(x.pg, kv, big3), v));
    inter_gap = std::max(inter_gap, xfock::relative_gap(xfock::k_transform(x.pg, xfock::big_fock_realize(x.pg, f, v), xs_k),
                                                        xfock::xfield(f, kv)));
  }
  rec.add("k_transform_norm", norm_gap, tol);
  rec.add("k_transform_inverse", inv_gap, tol);
  rec.add("k_transform_intertwines", inter_gap, tol);

  // diagonal-pattern quadrature against the extended inner product
  for (int n = 1; n <= std::min(4, D); ++n) {
    std::vector<std::vector<double>> fa, fb;
    for (int k = 0; k < n; ++k) {
      fa.push_back(rng.vec(m));
      fb.push_back(rng.vec(m));
    }
    const double lhs = xfock::inner_product_formula(field::product_kernel(fa), field::product_kernel(fb), *xs);
    const double rhs = xfock::inner(xfock::xplus_word(fa, xs), xfock::xplus_word(fb, xs));
    rec.add("inner_product_formula n=" + std::to_string(n), rel(lhs, rhs), tol);
  }

  // power jumps on Delta = first half of the grid
  const auto chi = grid::indicator(x.grid, x.grid.nodes.front(), x.grid.nodes[std::max<std::size_t>(m / 2, 1) - 1]);
  const int lmax = std::min(4, x.sys.max_level());
  const auto big1 = xfock::big_fock_space(x.pg, 1);
  const auto om = fock::FockVector::vacuum(big1);
  double orth = 0.0, iso = 0.0;
  for (int l2 = 0; l2 <= lmax; ++l2) {
    const auto X = xfock::power_jump(x.pg, x.sys, l2, chi, om);
    double expect = 0.0;
    for (std::size_t i = 0; i < m; ++i) expect += x.grid.weights[i] * chi[i] * x.sys[i].g[static_cast<std::size_t>(l2)];
    iso = std::max(iso, rel(fock::inner(X, X), expect));
    for (int l1 = 0; l1 < l2; ++l1) {
      const auto Y = xfock::power_jump(x.pg, x.sys, l1, chi, om, xfock::Jump::Power);
      orth = std::max(orth, std::abs(fock::inner(Y, X)));
    }
  }
  rec.add("power_jump_orthogonality", orth, tol);
  rec.add("power_jump_norms", iso, tol);
}

inline void meixner_suite(const config::ModelConfig& cfg, const Options& opt, Report& report) {
  detail::Recorder rec(report, "meixner");
  Rng rng(opt.seed + 3);
  const auto g = cfg.grid();
  const std::size_t m = g.size();
  const int Lj = 8;
  const std::size_t Mj = std::max<std::size_t>(cfg.fiber_nodes, Lj + 2);

  // Jacobi recovery from semicircle Gauss rules
  double coef_gap = 0.0, norm_gap = 0.0, zero_pattern = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lam = g.lambda[i], eta = g.eta[i];
    const auto e = jacobi::coeffs_from_measure(grid::semicircle_fiber(lam, eta, Mj), Lj);
    if (eta > 0.0) {
      for (int n = 0; n <= Lj; ++n) {
        coef_gap = std::max(coef_gap, std::abs(e.b[static_cast<std::size_t>(n)] - lam));
        if (n >= 1) coef_gap = std::max(coef_gap, std::abs(e.a[static_cast<std::size_t>(n)] - eta));
        norm_gap = std::max(norm_gap, rel(e.g[static_cast<std::size_t>(n)], std::pow(eta, n)));
      }
    }
  }
  {
    const auto e = jacobi::coeffs_from_measure(grid::semicircle_fiber(g.lambda[0], 0.0, Mj), Lj);
    zero_pattern = e.finite_support == 1 ? 0.0 : 1.0;
    for (int n = 1; n <= Lj; ++n)
      zero_pattern += std::abs(e.a[static_cast<std::size_t>(n)]) + std::abs(e.b[static_cast<std::size_t>(n)]) +
                      std::abs(e.g[static_cast<std::size_t>(n)]);
    zero_pattern += std::abs(e.b[0] - g.lambda[0]) + std::abs(e.g[0] - 1.0);
  }
  rec.add("semicircle_recovery", coef_gap, cfg.tolerances.jacobi);
  rec.add("semicircle_norms", norm_gap, cfg.tolerances.identity);
  rec.add("point_mass_zero_pattern", zero_pattern, 0.0);

  // tau(X(Delta)^k) three ways on Delta = nodes sharing (lambda, eta) with node 0
  const int K = std::min(8, std::max(cfg.budgets.max_degree, 8));
  std::vector<double> chi(m, 0.0);
  double sd = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (g.lambda[i] == g.lambda[0] && g.eta[i] == g.eta[0]) {
      chi[i] = 1.0;
      sd += g.weights[i];
    }
  const auto tri = jacobi::meixner_moments(g.lambda[0], g.eta[0], sd, K);
  const auto fibers = grid::semicircle_fibers(g, cfg.fiber_nodes);
  const auto pg = xfock::make_product_grid(g, fibers);
  const auto bigv = detail::powers(fock::FockVector::vacuum(xfock::big_fock_space(pg, (K + 1) / 2)), (K + 1) / 2,
                                   [&](const fock::FockVector& v) { return xfock::big_fock_realize(pg, chi, v); });
  const auto xs = xfock::make_xspace(g.weights, jacobi::constant_system(g, K + 1), K);
  const auto xv = detail::powers(xfock::XFockVector::vacuum(xs), K, [&](const xfock::XFockVector& v) { return xfock::xfield(chi, v); });
  double path_gap = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double big = fock::inner(bigv[static_cast<std::size_t>((k + 1) / 2)], bigv[static_cast<std::size_t>(k / 2)]);
    const double ext = xv[static_cast<std::size_t>(k)].scalar();
    const double t = tri[static_cast<std::size_t>(k)];
    path_gap = std::max({path_gap, rel(big, t), rel(ext, t)});
  }
  rec.add("meixner_moments_three_paths", path_gap, cfg.tolerances.identity);

  // constant coefficients: X0 and X2- act slotwise by lambda f and eta f
  const auto xs4 = xfock::make_xspace(g.weights, jacobi::constant_system(g, 5), 4);
  const auto v = random_xfock(xs4, 3, rng);
  const auto f = rng.vec(m);
  double slot_gap = 0.0;
  {
    const auto x0 = xfock::xzero(f, v);
    const auto xm = xfock::xminus2(f, v);
    for (const auto& [mi, src] : v.components()) {
      const std::size_t stride = src.size() / m;
      const auto a0 = x0.component(mi);
      for (std::size_t t = 0; t < m; ++t)
        for (std::size_t r = 0; r < stride; ++r) {
          slot_gap = std::max(slot_gap, std::abs(a0[t * stride + r] - g.lambda[t] * f[t] * src[t * stride + r]));
          if (mi[0] >= 1) {
            auto lower = mi;
            lower[0] -= 1;
            const auto am = xm.component(lower);
            // xminus2 sums into `lower` from a single source index
            slot_gap = std::max(slot_gap, std::abs(am[t * stride + r] - g.eta[t] * f[t] * src[t * stride + r]));
          }
        }
    }
  }
  rec.add("constant_coefficients_slotwise", slot_gap, cfg.tolerances.identity);

  // l-inhomogeneous fiber: X0 on H_(0) and H_(1) multiplies by different b
  {
    const auto two = grid::make_fiber({0.0, 1.0}, {0.25, 0.75});
    const auto sys2 = jacobi::build_system(std::vector<grid::FiberMeasure>(m, two), 3);
    const auto xs2 = xfock::make_xspace(g.weights, sys2, 2);
    xfock::XFockVector u(xs2);
    u.component_mut({0}) = std::vector<double>(m, 1.0);
    u.component_mut({1}) = std::vector<double>(m, 1.0);
    const std::vector<double> one(m, 1.0);
    const auto out = xfock::xzero(one, u);
    const double spread = std::abs(out.component({0})[0] - out.component({1})[0]);
    // zero once the two actions differ by at least 0.1
    rec.add("inhomogeneous_fiber_breaks_slotwise_form", std::max(0.0, 0.1 - spread), 0.0);
  }

  // omega = d^+ + lambda d^+ d + d + eta d^+ d d on diagonal kernels
  double rep_gap = 0.0;
  for (int n = 0; n <= 3; ++n) {
    const auto G = field::make_kernel(m, n, rng.vec(ipow(m, static_cast<std::size_t>(n))));
    const auto h = rng.vec(m);
    rep_gap = std::max(rep_gap, xfock::relative_gap(xfock::xfield(h, xfock::embed_diagonal(G, xs4)),
                                                    xfock::meixner_field(h, G, g, xs4)));
  }
  rec.add("meixner_field_representation", rep_gap, cfg.tolerances.identity);
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"wick", "cumulant", "xfock", "meixner"};
  return names;
}

inline Report run(const config::ModelConfig& cfg, const std::string& suite, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "wick") { wick_suite(cfg, opt, report); known = true; }
  if (all || suite == "cumulant") { cumulant_suite(cfg, opt, report); known = true; }
  if (all || suite == "xfock") { xfock_suite(cfg, opt, report); known = true; }
  if (all || suite == "meixner") { meixner_suite(cfg, opt, report); known = true; }
  if (!known) throw ConfigError("unknown suite '" + suite + "'");
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"suite", c.suite}, {"name", c.name}, {"residual", c.residual},
                      {"tolerance", c.tolerance}, {"passed", c.passed}});
  return {{"passed", r.passed()}, {"seconds", r.seconds}, {"max_residual", r.max_residual()}, {"checks", checks}};
}

inline std::string format_report(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << to_json(r).dump(2) << "\n";
  } else if (format == "csv") {
    os << "suite,name,residual,tolerance,passed\n";
    for (const auto& c : r.checks)
      os << c.suite << ",\"" << c.name << "\"," << c.residual << "," << c.tolerance << "," << (c.passed ? 1 : 0) << "\n";
  } else {
    std::size_t width = 4;
    for (const auto& c : r.checks) width = std::max(width, c.suite.size() + c.name.size() + 1);
    for (const auto& c : r.checks) {
      std::string label = c.suite + " " + c.name;
      label.resize(width, ' ');
      char buf[96];
      std::snprintf(buf, sizeof buf, "  %-4s  residual %.3e  tol %.1e", c.passed ? "ok" : "FAIL", c.residual, c.tolerance);
      os << label << buf << "\n";
    }
    char tail[96];
    std::snprintf(tail, sizeof tail, "%zu checks, %s, %.2f s\n", r.checks.size(), r.passed() ? "all passed" : "FAILED", r.seconds);
    os << tail;
  }
  return os.str();
}

}  // namespace freefock::verify
