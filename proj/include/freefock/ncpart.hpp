#pragma once

// Non-crossing partitions, marked partitions and the admissible family G_n
// that indexes the free Wick rule.
//
// Blocks are 1-based, stored sorted, and ordered by their minima. The
// canonical order on partitions is lexicographic on the restricted growth
// string (the block label of 1, 2, ..., n); marked partitions with equal
// underlying partition are ordered lexicographically on marks, +1 before -1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "freefock/errors.hpp"

namespace freefock::ncpart {

constexpr int kMaxNc = 14;
constexpr int kMaxGn = 12;

struct SetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  std::size_t size() const { return blocks.size(); }
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

struct MarkedPartition {
  SetPartition partition;
  std::vector<int> marks;  // +1 or -1, aligned with partition.blocks

  int n() const { return partition.n; }
  std::size_t plus_blocks() const {
    return static_cast<std::size_t>(std::count(marks.begin(), marks.end(), 1));
  }
  friend bool operator==(const MarkedPartition&, const MarkedPartition&) = default;
};

/// Block label (0-based, in order of minima) of each element 1..n.
inline std::vector<int> growth_string(const SetPartition& p) {
  std::vector<int> labels(static_cast<std::size_t>(p.n), -1);
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    for (int x : p.blocks[b]) labels[static_cast<std::size_t>(x - 1)] = static_cast<int>(b);
  return labels;
}

inline bool canonical_less(const SetPartition& a, const SetPartition& b) {
  if (a.n != b.n) return a.n < b.n;
  return growth_string(a) < growth_string(b);
}

inline bool canonical_less(const MarkedPartition& a, const MarkedPartition& b) {
  if (a.partition != b.partition) return canonical_less(a.partition, b.partition);
  // +1 sorts before -1
  return std::lexicographical_compare(a.marks.begin(), a.marks.end(), b.marks.begin(),
                                      b.marks.end(), [](int x, int y) { return x > y; });
}

inline bool is_well_formed(const SetPartition& p) {
  if (p.n < 1) return false;
  std::vector<char> seen(static_cast<std::size_t>(p.n), 0);
  int prev_min = 0;
  for (const auto& block : p.blocks) {
    if (block.empty() || !std::is_sorted(block.begin(), block.end())) return false;
    if (block.front() <= prev_min) return false;
    prev_min = block.front();
    for (int x : block) {
      if (x < 1 || x > p.n || seen[static_cast<std::size_t>(x - 1)]) return false;
      seen[static_cast<std::size_t>(x - 1)] = 1;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

/// True iff no x1 < y1 < x2 < y2 with x1, x2 in one block and y1, y2 in another.
inline bool is_noncrossing(const SetPartition& p) {
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& a = p.blocks[i];
    for (std::size_t j = 0; j < p.blocks.size(); ++j) {
      if (i == j) continue;
      const auto& b = p.blocks[j];
      // b crosses a iff some gap (a[r], a[r+1]) holds an element of b while
      // another element of b lies outside [a[r], a[r+1]].
      for (std::size_t r = 0; r + 1 < a.size(); ++r) {
        bool inside = false, outside = false;
        for (int y : b) {
          if (y > a[r] && y < a[r + 1]) inside = true;
          else outside = true;
        }
        if (inside && outside) return false;
      }
    }
  }
  return true;
}

/// min outer < min inner <= max inner < max outer
inline bool is_nested_in(const std::vector<int>& inner, const std::vector<int>& outer) {
  return outer.front() < inner.front() && inner.back() < outer.back();
}

inline bool is_interval(const SetPartition& p) {
  for (const auto& block : p.blocks)
    if (block.back() - block.front() + 1 != static_cast<int>(block.size())) return false;
  return true;
}

/// Membership in NC(n, +-1): non-crossing, marks are +-1, singletons marked +1.
inline bool is_marked_nc(const MarkedPartition& k) {
  const auto& p = k.partition;
  if (!is_well_formed(p) || !is_noncrossing(p) || k.marks.size() != p.blocks.size())
    return false;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (k.marks[b] != 1 && k.marks[b] != -1) return false;
    if (p.blocks[b].size() == 1 && k.marks[b] != 1) return false;
  }
  return true;
}

/// Membership in G_n: additionally, no +1 block lies within another block.
inline bool in_gn(const MarkedPartition& k) {
  if (!is_marked_nc(k)) return false;
  const auto& blocks = k.partition.blocks;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (k.marks[j] != 1) continue;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (i != j && is_nested_in(blocks[j], blocks[i])) return false;
  }
  return true;
}

namespace detail {

template <class Visitor>
void nc_recurse(int k, int n, std::vector<std::vector<int>>& blocks,
                std::vector<std::size_t>& visible, SetPartition& scratch, Visitor& visit) {
  if (k > n) {
    scratch.blocks = blocks;
    visit(static_cast<const SetPartition&>(scratch));
    return;
  }
  // Joining a visible block hides every block opened after it.
  for (std::size_t pos = 0; pos < visible.size(); ++pos) {
    const std::size_t b = visible[pos];
    std::vector<std::size_t> hidden(visible.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                                    visible.end());
    visible.resize(pos + 1);
    blocks[b].push_back(k);
    nc_recurse(k + 1, n, blocks, visible, scratch, visit);
    blocks[b].pop_back();
    visible.insert(visible.end(), hidden.begin(), hidden.end());
  }
  blocks.push_back({k});
  visible.push_back(blocks.size() - 1);
  nc_recurse(k + 1, n, blocks, visible, scratch, visit);
  visible.pop_back();
  blocks.pop_back();
}

inline void check_bound(int n, int max_n, const char* what) {
  if (n < 1 || n > max_n)
    throw SizeError(std::string(what) + ": n=" + std::to_string(n) + " outside [1, " +
                    std::to_string(max_n) + "]");
}

}  // namespace detail

/// Calls `visit(const SetPartition&)` once per element of NC(n), in canonical order.
template <class Visitor>
void for_each_nc(int n, Visitor&& visit) {
  detail::check_bound(n, kMaxNc, "enumerate_nc");
  std::vector<std::vector<int>> blocks;
  std::vector<std::size_t> visible;
  SetPartition scratch{n, {}};
  detail::nc_recurse(1, n, blocks, visible, scratch, visit);
}

inline std::vector<SetPartition> enumerate_nc(int n) {
  std::vector<SetPartition> out;
  for_each_nc(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

/// Marked versions of `p` that belong to G_n, in canonical mark order.
inline std::vector<MarkedPartition> admissible_markings(const SetPartition& p) {
  const std::size_t nb = p.blocks.size();
  std::vector<int> forced(nb, 0);  // 0 = free, otherwise the forced mark
  std::vector<std::size_t> free_blocks;
  for (std::size_t j = 0; j < nb; ++j) {
    bool nested = false;
    for (std::size_t i = 0; i < nb && !nested; ++i)
      nested = i != j && is_nested_in(p.blocks[j], p.blocks[i]);
    const bool singleton = p.blocks[j].size() == 1;
    if (nested && singleton) return {};
    if (nested) forced[j] = -1;
    else if (singleton) forced[j] = 1;
    else free_blocks.push_back(j);
  }
  std::vector<MarkedPartition> out;
  const std::size_t combos = std::size_t{1} << free_blocks.size();
  out.reserve(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    MarkedPartition k{p, forced};
    for (std::size_t f = 0; f < free_blocks.size(); ++f) {
      const bool minus = (c >> (free_blocks.size() - 1 - f)) & 1U;
      k.marks[free_blocks[f]] = minus ? -1 : 1;
    }
    out.push_back(std::move(k));
  }
  return out;
}

template <class Visitor>
void for_each_gn(int n, Visitor&& visit) {
  detail::check_bound(n, kMaxGn, "enumerate_gn");
  for_each_nc(n, [&](const SetPartition& p) {
    for (const auto& k : admissible_markings(p)) visit(k);
  });
}

inline std::vector<MarkedPartition> enumerate_gn(int n) {
  std::vector<MarkedPartition> out;
  for_each_gn(n, [&](const MarkedPartition& k) { out.push_back(k); });
  return out;
}

/// Builds G_n from G_{n-1} on {2..n}: prepend {1} as a +1 singleton, or add 1
/// to the first +1 block keeping its mark, or add 1 to it and flip the mark to
/// -1. The output is in generation order, not canonical order.
inline std::vector<MarkedPartition> enumerate_gn_recursive(int n) {
  detail::check_bound(n, kMaxGn, "enumerate_gn_recursive");
  std::vector<MarkedPartition> level{MarkedPartition{SetPartition{1, {{1}}}, {1}}};
  for (int size = 2; size <= n; ++size) {
    std::vector<MarkedPartition> next;
    next.reserve(level.size() * 3);
    for (const auto& k : level) {
      SetPartition shifted{size, k.partition.blocks};
      for (auto& block : shifted.blocks)
        for (int& x : block) ++x;

      MarkedPartition with_singleton{shifted, k.marks};
      with_singleton.partition.blocks.insert(with_singleton.partition.blocks.begin(), {1});
      with_singleton.marks.insert(with_singleton.marks.begin(), 1);
      next.push_back(std::move(with_singleton));

      const auto first_plus = std::find(k.marks.begin(), k.marks.end(), 1);
      if (first_plus == k.marks.end()) continue;
      const auto b = static_cast<std::size_t>(first_plus - k.marks.begin());
      MarkedPartition absorbed{shifted, k.marks};
      auto& target = absorbed.partition.blocks[b];
      target.insert(target.begin(), 1);
      // The absorbing block now has minimum 1 and must come first.
      std::rotate(absorbed.partition.blocks.begin(),
                  absorbed.partition.blocks.begin() + static_cast<std::ptrdiff_t>(b),
                  absorbed.partition.blocks.begin() + static_cast<std::ptrdiff_t>(b) + 1);
      std::rotate(absorbed.marks.begin(),
                  absorbed.marks.begin() + static_cast<std::ptrdiff_t>(b),
                  absorbed.marks.begin() + static_cast<std::ptrdiff_t>(b) + 1);
      next.push_back(absorbed);
      absorbed.marks.front() = -1;
      next.push_back(std::move(absorbed));
    }
    level = std::move(next);
  }
  return level;
}

/// Marked interval partitions Int(n, +-1), in canonical order.
inline std::vector<MarkedPartition> enumerate_interval(int n) {
  detail::check_bound(n, kMaxGn, "enumerate_interval");
  std::vector<MarkedPartition> out;
  // Compositions of n: bit i of `cuts` set means a block ends after element i+1.
  const std::uint32_t compositions = 1U << (n - 1);
  for (std::uint32_t cuts = 0; cuts < compositions; ++cuts) {
    SetPartition p{n, {}};
    std::vector<int> current;
    for (int x = 1; x <= n; ++x) {
      current.push_back(x);
      if (x == n || ((cuts >> (x - 1)) & 1U)) {
        p.blocks.push_back(current);
        current.clear();
      }
    }
    for (auto& k : admissible_markings(p)) out.push_back(std::move(k));
  }
  std::sort(out.begin(), out.end(),
            [](const MarkedPartition& a, const MarkedPartition& b) { return canonical_less(a, b); });
  return out;
}

inline std::uint64_t catalan(int n) {
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * static_cast<std::uint64_t>(k) + 1) / (k + 2);
  return c;
}

}  // namespace freefock::ncpart
