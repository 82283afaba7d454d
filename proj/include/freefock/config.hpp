#pragma once

// Model configuration read from a single JSON document:
//
//   {
//     "grid": {"interval": [0, 1], "m": 6},
//     "mode": "gauss_poisson" | "general" | "meixner",
//     "lambda": 1.0 | [per-node values] | [{"from": 0, "to": 0.5, "value": 1}, ...],
//     "eta": same forms as lambda,
//     "fibers": [{"atoms": [...], "probs": [...]}, ...],   // general mode
//     "fiber_nodes": 8,
//     "budgets": {"max_degree": 6, "n_max": 5},
//     "tolerances": {"identity": 1e-10, "transform": 1e-8, "jacobi": 1e-9},
//     "output": {"format": "json"}
//   }
//
// In general mode a single fiber object is shared by all nodes.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "freefock/cumulant.hpp"
#include "freefock/errors.hpp"
#include "freefock/grid.hpp"
#include "freefock/jacobi.hpp"

namespace freefock::config {

using nlohmann::json;

enum class Mode { GaussPoisson, General, Meixner };

struct Budgets {
  int max_degree = 6;
  int n_max = 5;
};

struct Tolerances {
  double identity = 1e-10;
  double transform = 1e-8;
  double jacobi = 1e-9;
};

constexpr int kMaxDegreeBound = 8;
constexpr int kNMaxBound = 6;

struct ModelConfig {
  grid::GridSpec grid_spec{0.0, 1.0, 6, 0.0, 0.0};
  Mode mode = Mode::GaussPoisson;
  std::vector<grid::FiberMeasure> fibers;  // general mode only
  std::size_t fiber_nodes = 8;
  Budgets budgets;
  Tolerances tolerances;
  std::string format = "json";

  grid::GridMeasure grid() const { return grid::make_grid(grid_spec); }

  /// Per-node fibers: point masses at lambda, explicit atoms, or semicircle Gauss rules.
  std::vector<grid::FiberMeasure> fiber_set(const grid::GridMeasure& g) const {
    switch (mode) {
      case Mode::GaussPoisson: {
        std::vector<grid::FiberMeasure> out;
        for (double l : g.lambda) out.push_back(grid::semicircle_fiber(l, 0.0, 1));
        return out;
      }
      case Mode::General: return fibers;
      case Mode::Meixner: return grid::semicircle_fibers(g, fiber_nodes);
    }
    return {};
  }

  cumulant::CumulantSpec cumulant_spec() const {
    const auto g = grid();
    switch (mode) {
      case Mode::GaussPoisson: return {cumulant::Mode::Lambda, g, {}, fiber_nodes};
      case Mode::General: return {cumulant::Mode::Fiber, g, fibers, fiber_nodes};
      case Mode::Meixner: return {cumulant::Mode::Meixner, g, {}, fiber_nodes};
    }
    return {};
  }
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::GaussPoisson: return "gauss_poisson";
    case Mode::General: return "general";
    case Mode::Meixner: return "meixner";
  }
  return "?";
}

namespace detail {

inline grid::Coefficient parse_coefficient(const json& j, const char* name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && (j.empty() || j.front().is_number())) return j.get<std::vector<double>>();
  if (j.is_array()) {
    std::vector<grid::Segment> segs;
    for (const auto& s : j) segs.push_back({s.at("from").get<double>(), s.at("to").get<double>(),
                                            s.at("value").get<double>()});
    return segs;
  }
  throw ConfigError(std::string(name) + " must be a number, a table or a segment list");
}

inline grid::FiberMeasure parse_fiber(const json& j) {
  return grid::make_fiber(j.at("atoms").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>(),
                          j.value("support_radius", 0.0));
}

}  // namespace detail

inline ModelConfig parse(const json& j) {
  ModelConfig c;
  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("interval")) {
        const auto iv = g.at("interval").get<std::vector<double>>();
        if (iv.size() != 2) throw ConfigError("grid.interval must have two entries");
        c.grid_spec.lower = iv[0];
        c.grid_spec.upper = iv[1];
      }
      c.grid_spec.nodes = g.value("m", c.grid_spec.nodes);
    }
    const std::string mode = j.value("mode", std::string("gauss_poisson"));
    if (mode == "gauss_poisson") c.mode = Mode::GaussPoisson;
    else if (mode == "general") c.mode = Mode::General;
    else if (mode == "meixner") c.mode = Mode::Meixner;
    else throw ConfigError("unknown mode '" + mode + "'");
    if (j.contains("lambda")) c.grid_spec.lambda = detail::parse_coefficient(j.at("lambda"), "lambda");
    if (j.contains("eta")) c.grid_spec.eta = detail::parse_coefficient(j.at("eta"), "eta");
    c.fiber_nodes = j.value("fiber_nodes", c.fiber_nodes);
    if (j.contains("budgets")) {
      c.budgets.max_degree = j.at("budgets").value("max_degree", c.budgets.max_degree);
      c.budgets.n_max = j.at("budgets").value("n_max", c.budgets.n_max);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tolerances.identity = t.value("identity", c.tolerances.identity);
      c.tolerances.transform = t.value("transform", c.tolerances.transform);
      c.tolerances.jacobi = t.value("jacobi", c.tolerances.jacobi);
    }
    if (j.contains("output")) c.format = j.at("output").value("format", c.format);

    const auto g = c.grid();  // validates the grid and coefficients
    if (c.mode == Mode::General) {
      if (!j.contains("fibers")) throw ConfigError("general mode needs 'fibers'");
      const auto& fj = j.at("fibers");
      if (fj.is_object()) c.fibers.assign(g.size(), detail::parse_fiber(fj));
      else
        for (const auto& f : fj) c.fibers.push_back(detail::parse_fiber(f));
      if (c.fibers.size() != g.size())
        throw ConfigError("general mode needs one fiber per node (got " + std::to_string(c.fibers.size()) + ")");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.fiber_nodes < 1 || c.fiber_nodes > 32) throw ConfigError("fiber_nodes must lie in [1, 32]");
  if (c.budgets.max_degree < 1 || c.budgets.max_degree > kMaxDegreeBound)
    throw ConfigError("budgets.max_degree must lie in [1, " + std::to_string(kMaxDegreeBound) + "]");
  if (c.budgets.n_max < 1 || c.budgets.n_max > kNMaxBound)
    throw ConfigError("budgets.n_max must lie in [1, " + std::to_string(kNMaxBound) + "]");
  if (!(c.tolerances.identity > 0.0) || !(c.tolerances.transform > 0.0) || !(c.tolerances.jacobi > 0.0))
    throw ConfigError("tolerances must be positive");
  if (c.format != "json" && c.format != "text" && c.format != "csv")
    throw ConfigError("output.format must be json, text or csv");
  return c;
}

inline ModelConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse(j);
}

/// m = 6 on [0, 1], Meixner with lambda = eta = 1, M = 8 fiber nodes.
inline ModelConfig default_config() {
  ModelConfig c;
  c.mode = Mode::Meixner;
  c.grid_spec.lambda = 1.0;
  c.grid_spec.eta = 1.0;
  return c;
}

}  // namespace freefock::config
