#pragma once

// JSON views of partitions, Jacobi systems and Fock vectors.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "freefock/errors.hpp"
#include "freefock/fock.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/ncpart.hpp"
#include "freefock/xfock.hpp"

namespace freefock::io {

using nlohmann::json;

inline json to_json(const ncpart::SetPartition& p) { return json{{"blocks", p.blocks}}; }

inline json to_json(const ncpart::MarkedPartition& k) {
  return json{{"blocks", k.partition.blocks}, {"marks", k.marks}};
}

inline ncpart::MarkedPartition marked_from_json(const json& j) {
  ncpart::MarkedPartition k;
  k.partition.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
  for (const auto& b : k.partition.blocks) k.partition.n += static_cast<int>(b.size());
  k.marks = j.contains("marks") ? j.at("marks").get<std::vector<int>>()
                                : std::vector<int>(k.partition.blocks.size(), 1);
  return k;
}

inline json to_json(const jacobi::JacobiSystem& sys, const std::vector<double>& nodes) {
  json out = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& e = sys[i];
    json entry{{"t", i < nodes.size() ? nodes[i] : static_cast<double>(i)},
               {"a", std::vector<double>(e.a.begin() + 1, e.a.end())},
               {"b", e.b},
               {"g", e.g}};
    entry["finite_support"] = e.finite_support == jacobi::kInfiniteSupport
                                  ? json(nullptr)
                                  : json(e.finite_support);
    out.push_back(std::move(entry));
  }
  return out;
}

inline json to_json(const fock::FockVector& v) {
  json levels = json::array();
  for (int n = 0; n <= v.top(); ++n) {
    const auto l = v.level(n);
    levels.push_back(std::vector<double>(l.begin(), l.end()));
  }
  return json{{"levels", levels}};
}

inline json to_json(const xfock::XFockVector& v) {
  json comps = json::array();
  for (const auto& [mi, values] : v.components())
    comps.push_back(json{{"index", mi}, {"values", values}});
  return json{{"scalar", v.scalar()}, {"components", comps}};
}

inline xfock::XFockVector xfock_from_json(const json& j, const xfock::XSpacePtr& space) {
  xfock::XFockVector v(space);
  v.scalar() = j.value("scalar", 0.0);
  for (const auto& c : j.at("components")) {
    const auto mi = c.at("index").get<xfock::MultiIndex>();
    const auto values = c.at("values").get<std::vector<double>>();
    auto& dst = v.component_mut(mi);
    if (values.size() != dst.size()) throw ConfigError("component size does not match the grid");
    dst = values;
  }
  return v;
}

}  // namespace freefock::io
