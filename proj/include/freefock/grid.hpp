#pragma once

// Finite discretization of the index space T with its measure sigma, the
// per-node coefficient values lambda(t), eta(t), and the per-node fiber
// measures mu(t, .) on the real line.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "freefock/errors.hpp"

namespace freefock::grid {

/// Piecewise-constant segment [from, to) carrying `value`.
struct Segment {
  double from = 0.0;
  double to = 0.0;
  double value = 0.0;
};

/// A coefficient function sampled at grid nodes: a constant, a table aligned
/// with the nodes, or piecewise-constant segments.
using Coefficient = std::variant<double, std::vector<double>, std::vector<Segment>>;

struct GridSpec {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t nodes = 0;
  Coefficient lambda = 0.0;
  Coefficient eta = 0.0;
};

struct GridMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> lambda;
  std::vector<double> eta;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline double eval_segments(const std::vector<Segment>& segs, double t, double upper) {
  for (const auto& s : segs)
    if ((t >= s.from && t < s.to) || (t == upper && s.to == upper)) return s.value;
  throw ConfigError("coefficient segments do not cover node t=" + std::to_string(t));
}

inline std::vector<double> sample(const Coefficient& c, const std::vector<double>& nodes,
                                  double upper, const char* name) {
  std::vector<double> out(nodes.size());
  if (const auto* v = std::get_if<double>(&c)) {
    std::fill(out.begin(), out.end(), *v);
  } else if (const auto* table = std::get_if<std::vector<double>>(&c)) {
    if (table->size() != nodes.size())
      throw ConfigError(std::string(name) + " table has " + std::to_string(table->size()) +
                        " entries for " + std::to_string(nodes.size()) + " nodes");
    out = *table;
  } else {
    const auto& segs = std::get<std::vector<Segment>>(c);
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = eval_segments(segs, nodes[i], upper);
  }
  for (double x : out)
    if (!std::isfinite(x)) throw ConfigError(std::string(name) + " has a non-finite value");
  return out;
}

}  // namespace detail

/// Midpoint rule with `spec.nodes` cells on [lower, upper].
inline GridMeasure make_grid(const GridSpec& spec) {
  if (spec.nodes == 0) throw ConfigError("grid needs at least one node");
  if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) || !(spec.upper > spec.lower))
    throw ConfigError("grid interval must be finite with lower < upper");
  GridMeasure g;
  const double h = (spec.upper - spec.lower) / static_cast<double>(spec.nodes);
  g.nodes.resize(spec.nodes);
  g.weights.assign(spec.nodes, h);
  for (std::size_t i = 0; i < spec.nodes; ++i)
    g.nodes[i] = spec.lower + (static_cast<double>(i) + 0.5) * h;
  g.lambda = detail::sample(spec.lambda, g.nodes, spec.upper, "lambda");
  g.eta = detail::sample(spec.eta, g.nodes, spec.upper, "eta");
  for (double e : g.eta)
    if (e < 0.0) throw ConfigError("eta must be non-negative");
  return g;
}

inline double integrate(const GridMeasure& g, std::span<const double> values) {
  if (values.size() != g.size())
    throw ConfigError("integrate: " + std::to_string(values.size()) + " values for " +
                      std::to_string(g.size()) + " nodes");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += g.weights[i] * values[i];
  return s;
}

/// Indicator of the nodes lying in [from, to].
inline std::vector<double> indicator(const GridMeasure& g, double from, double to) {
  std::vector<double> chi(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.nodes[i] >= from && g.nodes[i] <= to) chi[i] = 1.0;
  return chi;
}

/// Atomic probability measure on the real line.
struct FiberMeasure {
  std::vector<double> atoms;
  std::vector<double> probs;
  double support_radius = 0.0;

  std::size_t size() const { return atoms.size(); }
};

inline FiberMeasure make_fiber(std::vector<double> atoms, std::vector<double> probs,
                               double support_radius = 0.0) {
  if (atoms.empty() || atoms.size() != probs.size())
    throw ConfigError("fiber needs matching, non-empty atoms and probabilities");
  double total = 0.0, reach = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (!std::isfinite(atoms[j]) || !(probs[j] > 0.0))
      throw ConfigError("fiber atoms must be finite with positive probabilities");
    total += probs[j];
    reach = std::max(reach, std::abs(atoms[j]));
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("fiber probabilities must sum to 1 (got " + std::to_string(total) + ")");
  if (support_radius == 0.0) support_radius = reach > 0.0 ? reach : 1.0;
  if (reach > support_radius) throw ConfigError("fiber atom outside [-R, R]");
  return FiberMeasure{std::move(atoms), std::move(probs), support_radius};
}

/// Gauss rule with M nodes for the semicircle law of mean lambda and variance
/// eta; exact for polynomials of degree <= 2M-1. eta <= 0 gives the point
/// mass at lambda.
inline FiberMeasure semicircle_fiber(double lambda, double eta, std::size_t M) {
  if (M == 0) throw ConfigError("semicircle fiber needs at least one node");
  if (!(eta > 0.0)) return make_fiber({lambda}, {1.0}, std::max(std::abs(lambda), 1e-300));
  std::vector<double> atoms(M), probs(M);
  const double r = 2.0 * std::sqrt(eta);
  const double step = std::numbers::pi / static_cast<double>(M + 1);
  double total = 0.0;
  for (std::size_t k = 1; k <= M; ++k) {
    const double theta = static_cast<double>(k) * step;
    atoms[k - 1] = lambda + r * std::cos(theta);
    probs[k - 1] = 2.0 / static_cast<double>(M + 1) * std::sin(theta) * std::sin(theta);
    total += probs[k - 1];
  }
  for (double& p : probs) p /= total;  // absorb roundoff in the normalization
  return make_fiber(std::move(atoms), std::move(probs), std::abs(lambda) + r);
}

inline std::vector<FiberMeasure> semicircle_fibers(const GridMeasure& g, std::size_t M) {
  std::vector<FiberMeasure> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(semicircle_fiber(g.lambda[i], g.eta[i], M));
  return out;
}

inline double fiber_moment(const FiberMeasure& mu, int k) {
  double s = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) s += mu.probs[j] * std::pow(mu.atoms[j], k);
  return s;
}

inline double max_support_radius(const std::vector<FiberMeasure>& fibers) {
  double r = 0.0;
  for (const auto& f : fibers) r = std::max(r, f.support_radius);
  return r;
}

}  // namespace freefock::grid
