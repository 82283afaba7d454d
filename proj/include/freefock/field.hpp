#pragma once

// Smeared operator words in the point operators d_t (annihilate), d_t^+
// (create) and lambda(t) d_t^+ d_t (neutral), applied to Fock vectors through
// a kernel f(t_1, ..., t_n). Position k of a word carries the variable t_k;
// the rightmost position acts first.
//
// The engine walks the kernel from t_n down to t_1. After consuming t_{k+1..n}
// each partial result stores, per Fock level l, an m^k x m^l array indexed by
// the still-free variables (t_1..t_k) followed by the Fock slots.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freefock/errors.hpp"
#include "freefock/fock.hpp"
#include "freefock/ncpart.hpp"
#include "freefock/tensor.hpp"

namespace freefock::field {

using fock::FockVector;

/// f^(n) sampled on the grid: order 0 is a scalar, order n has m^n entries.
struct Kernel {
  int order = 0;
  std::vector<double> values{0.0};

  static Kernel scalar(double c) { return Kernel{0, {c}}; }
};

inline Kernel make_kernel(std::size_t m, int order, std::vector<double> values) {
  if (order < 0) throw ConfigError("kernel order must be non-negative");
  if (values.size() != ipow(m, static_cast<std::size_t>(order)))
    throw ConfigError("kernel of order " + std::to_string(order) + " expects " +
                      std::to_string(ipow(m, static_cast<std::size_t>(order))) + " values");
  return Kernel{order, std::move(values)};
}

/// f_1 (x) ... (x) f_n.
inline Kernel product_kernel(const std::vector<std::vector<double>>& factors) {
  std::vector<double> values{1.0};
  for (const auto& f : factors) {
    std::vector<double> next;
    next.reserve(values.size() * f.size());
    for (double x : values)
      for (double y : f) next.push_back(x * y);
    values = std::move(next);
  }
  return Kernel{static_cast<int>(factors.size()), std::move(values)};
}

enum class Letter { Create, Annihilate, Neutral };

struct Transition {
  int from = 0;
  Letter letter = Letter::Create;
  int to = 0;
};

/// steps[k-1] lists the transitions allowed at position k. States start at 0.
struct WordAutomaton {
  int states = 1;
  std::vector<std::vector<Transition>> steps;
};

namespace detail {

using Partial = std::vector<std::vector<double>>;  // by level; empty means zero

inline void add_level(Partial& p, std::size_t level, std::size_t size) {
  if (p.size() <= level) p.resize(level + 1);
  if (p[level].empty()) p[level].assign(size, 0.0);
}

/// Applies `letter` at position k (so k free variables before, k-1 after).
inline void apply_letter(Letter letter, const Partial& in, std::size_t k, const fock::FockSpace& fs,
                         Partial& out) {
  const std::size_t m = fs.dim();
  const std::size_t head = ipow(m, k - 1);  // range of F' = (t_1..t_{k-1})
  for (std::size_t l = 0; l < in.size(); ++l) {
    const auto& src = in[l];
    if (src.empty()) continue;
    const std::size_t tail = ipow(m, l);
    switch (letter) {
      case Letter::Create: {
        if (static_cast<int>(l) + 1 > fs.max_level)
          throw CapacityError("smeared word needs Fock level " + std::to_string(l + 1) +
                              " above max level " + std::to_string(fs.max_level));
        add_level(out, l + 1, src.size());
        auto& dst = out[l + 1];
        for (std::size_t q = 0; q < src.size(); ++q) dst[q] += src[q];
        break;
      }
      case Letter::Annihilate: {
        if (l == 0) break;
        const std::size_t rest = tail / m;
        add_level(out, l - 1, head * rest);
        auto& dst = out[l - 1];
        for (std::size_t F = 0; F < head; ++F)
          for (std::size_t t = 0; t < m; ++t) {
            const double w = fs.weights[t];
            const double* s = src.data() + (F * m + t) * tail + t * rest;
            double* d = dst.data() + F * rest;
            for (std::size_t r = 0; r < rest; ++r) d[r] += w * s[r];
          }
        break;
      }
      case Letter::Neutral: {
        if (l == 0) break;
        const std::size_t rest = tail / m;
        add_level(out, l, head * tail);
        auto& dst = out[l];
        for (std::size_t F = 0; F < head; ++F)
          for (std::size_t j = 0; j < m; ++j) {
            const double c = fs.lambda[j];
            if (c == 0.0) continue;
            const double* s = src.data() + (F * m + j) * tail + j * rest;
            double* d = dst.data() + F * tail + j * rest;
            for (std::size_t r = 0; r < rest; ++r) d[r] += c * s[r];
          }
        break;
      }
    }
  }
}

}  // namespace detail

/// Applies sum over accepted words w of the smeared operator <f, w> to v.
inline FockVector smeared_apply(const Kernel& f, const FockVector& v, const WordAutomaton& a) {
  const auto& fs = v.fs();
  const std::size_t n = static_cast<std::size_t>(f.order);
  if (f.values.size() != ipow(fs.dim(), n))
    throw ConfigError("kernel size does not match the Fock space dimension");
  if (a.steps.size() != n) throw ConfigError("automaton length differs from kernel order");

  std::vector<detail::Partial> state(static_cast<std::size_t>(a.states));
  auto& init = state[0];
  for (int l = 0; l <= v.top(); ++l) {
    if (!v.has_level(l)) continue;
    const auto src = v.level(l);
    detail::add_level(init, static_cast<std::size_t>(l), f.values.size() * src.size());
    auto& dst = init[static_cast<std::size_t>(l)];
    for (std::size_t F = 0; F < f.values.size(); ++F) {
      if (f.values[F] == 0.0) continue;
      for (std::size_t r = 0; r < src.size(); ++r) dst[F * src.size() + r] = f.values[F] * src[r];
    }
  }
  for (std::size_t k = n; k >= 1; --k) {
    std::vector<detail::Partial> next(state.size());
    for (const auto& tr : a.steps[k - 1])
      detail::apply_letter(tr.letter, state[static_cast<std::size_t>(tr.from)], k, fs,
                           next[static_cast<std::size_t>(tr.to)]);
    state = std::move(next);
  }
  FockVector out(v.space());
  for (const auto& p : state)
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (p[l].empty()) continue;
      auto& dst = out.level_mut(static_cast<int>(l));
      for (std::size_t q = 0; q < p[l].size(); ++q) dst[q] += p[l][q];
    }
  return out;
}

/// Automaton accepting exactly one word.
inline WordAutomaton single_word(const std::vector<Letter>& word) {
  WordAutomaton a{1, {}};
  for (Letter x : word) a.steps.push_back({Transition{0, x, 0}});
  return a;
}

inline WordAutomaton monomial_automaton(int n) {
  WordAutomaton a{1, {}};
  for (int k = 0; k < n; ++k)
    a.steps.push_back({{0, Letter::Create, 0}, {0, Letter::Annihilate, 0}, {0, Letter::Neutral, 0}});
  return a;
}

namespace detail {
constexpr int kTail = 0;  // only annihilators read so far (right to left)
constexpr int kHead = 1;  // a creator or the neutral letter has been read

inline std::vector<Transition> wick_step(bool group_start) {
  std::vector<Transition> t{{kTail, Letter::Annihilate, kTail},
                            {kTail, Letter::Neutral, kHead},
                            {kTail, Letter::Create, kHead},
                            {kHead, Letter::Create, kHead}};
  if (group_start) {
    // rightmost position of a factor: restart from whatever the previous factor left
    t.push_back({kHead, Letter::Annihilate, kTail});
    t.push_back({kHead, Letter::Neutral, kHead});
  }
  return t;
}
}  // namespace detail

/// Words C..C [N] A..A: the normal-ordered product of n fields.
inline WordAutomaton wick_automaton(int n) {
  WordAutomaton a{2, {}};
  for (int k = 0; k < n; ++k) a.steps.push_back(detail::wick_step(false));
  return a;
}

/// Product of normal-ordered groups of the given orders, left to right.
inline WordAutomaton wick_product_automaton(const std::vector<int>& orders) {
  WordAutomaton a{2, {}};
  for (int order : orders) {
    if (order < 1) throw ConfigError("wick product groups must be non-empty");
    for (int k = 0; k < order; ++k) a.steps.push_back(detail::wick_step(k == order - 1));
  }
  // the first processed position has only the initial state populated
  return a;
}

/// <f, omega^{(x)n}> v
inline FockVector monomial_apply(const Kernel& f, const FockVector& v) {
  return smeared_apply(f, v, monomial_automaton(f.order));
}

/// <f, :omega^{(x)n}:> v via the right-to-left recursion.
inline FockVector wick_apply(const Kernel& f, const FockVector& v) {
  return smeared_apply(f, v, wick_automaton(f.order));
}

/// The 2n+1 words of the normal-ordered product, applied one by one.
inline std::vector<std::vector<Letter>> wick_words(int n) {
  std::vector<std::vector<Letter>> words;
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<Letter> w(static_cast<std::size_t>(n), Letter::Annihilate);
    std::fill_n(w.begin(), i - 1, Letter::Create);
    words.push_back(w);
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<Letter> w(static_cast<std::size_t>(n), Letter::Annihilate);
    std::fill_n(w.begin(), i - 1, Letter::Create);
    w[static_cast<std::size_t>(i - 1)] = Letter::Neutral;
    words.push_back(w);
  }
  return words;
}

inline FockVector wick_apply_explicit(const Kernel& f, const FockVector& v) {
  if (f.order == 0) return f.values[0] * v;
  FockVector out(v.space());
  for (const auto& w : wick_words(f.order)) out += smeared_apply(f, v, single_word(w));
  return out;
}

/// Applies :omega(group 1): :omega(group 2): ... to v.
inline FockVector wick_product_apply(const std::vector<int>& orders, const Kernel& f,
                                     const FockVector& v) {
  return smeared_apply(f, v, wick_product_automaton(orders));
}

using fock::field_apply;

/// The reduced kernel of the term W(kappa): each -1 block of size l is
/// integrated along its diagonal with weight lambda^{l-2}; each +1 block of
/// size l keeps one variable at its minimum with weight lambda^{l-1}.
/// Output variables follow the +1 blocks in order of their minima.
inline Kernel reduce_kernel(const ncpart::MarkedPartition& kappa, const Kernel& f,
                            const fock::FockSpace& fs) {
  if (kappa.n() != f.order) throw ConfigError("reduce_kernel: partition size differs from kernel order");
  if (!ncpart::in_gn(kappa)) throw ConfigError("reduce_kernel: partition is not in G_n");
  const std::size_t m = fs.dim();
  const auto& blocks = kappa.partition.blocks;
  std::vector<std::size_t> plus, minus;
  for (std::size_t b = 0; b < blocks.size(); ++b) (kappa.marks[b] == 1 ? plus : minus).push_back(b);

  auto lambda_pow = [&](std::size_t node, std::size_t e) {
    double x = 1.0;
    for (std::size_t q = 0; q < e; ++q) x *= fs.lambda[node];
    return x;
  };
  // weight of a -1 block at u, a +1 block at s
  std::vector<std::vector<double>> minus_w(minus.size(), std::vector<double>(m));
  for (std::size_t q = 0; q < minus.size(); ++q)
    for (std::size_t u = 0; u < m; ++u)
      minus_w[q][u] = fs.weights[u] * lambda_pow(u, blocks[minus[q]].size() - 2);

  const std::size_t r = plus.size();
  const std::size_t out_size = ipow(m, r);
  const std::size_t inner = ipow(m, minus.size());
  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> rep(r), dia(minus.size()), idx(static_cast<std::size_t>(f.order));
  for (std::size_t o = 0; o < out_size; ++o) {
    unflatten(o, m, r, rep);
    double pw = 1.0;
    for (std::size_t q = 0; q < r; ++q) {
      pw *= lambda_pow(rep[q], blocks[plus[q]].size() - 1);
      for (int x : blocks[plus[q]]) idx[static_cast<std::size_t>(x - 1)] = rep[q];
    }
    if (pw == 0.0) continue;
    double acc = 0.0;
    for (std::size_t c = 0; c < inner; ++c) {
      unflatten(c, m, minus.size(), dia);
      double w = 1.0;
      for (std::size_t q = 0; q < minus.size(); ++q) {
        w *= minus_w[q][dia[q]];
        for (int x : blocks[minus[q]]) idx[static_cast<std::size_t>(x - 1)] = dia[q];
      }
      if (w == 0.0) continue;
      std::size_t flat = 0;
      for (std::size_t s : idx) flat = flat * m + s;
      acc += w * f.values[flat];
    }
    out[o] = pw * acc;
  }
  return Kernel{static_cast<int>(r), std::move(out)};
}

/// sum over kappa in G_n of :W(kappa): applied to the vacuum.
inline FockVector wick_rule_expand(const Kernel& f, const fock::SpacePtr& space) {
  const auto omega = FockVector::vacuum(space);
  FockVector out(space);
  ncpart::for_each_gn(f.order, [&](const ncpart::MarkedPartition& kappa) {
    out += wick_apply(reduce_kernel(kappa, f, *space), omega);
  });
  return out;
}

/// True iff every block meets each group {k_1..}, {..} at most once.
inline bool separates_groups(const ncpart::MarkedPartition& kappa, const std::vector<int>& orders) {
  std::vector<int> group(static_cast<std::size_t>(kappa.n()));
  std::size_t pos = 0;
  for (std::size_t g = 0; g < orders.size(); ++g)
    for (int k = 0; k < orders[g]; ++k) group[pos++] = static_cast<int>(g);
  for (const auto& block : kappa.partition.blocks)
    for (std::size_t q = 1; q < block.size(); ++q)
      for (std::size_t p = 0; p < q; ++p)
        if (group[static_cast<std::size_t>(block[p] - 1)] == group[static_cast<std::size_t>(block[q] - 1)])
          return false;
  return true;
}

/// Constrained partition sum for a product of normal-ordered groups.
inline FockVector wick_product_expand(const std::vector<int>& orders, const Kernel& f,
                                      const fock::SpacePtr& space) {
  int n = 0;
  for (int k : orders) n += k;
  if (n != f.order) throw ConfigError("wick_product_expand: group orders do not sum to the kernel order");
  const auto omega = FockVector::vacuum(space);
  FockVector out(space);
  ncpart::for_each_gn(n, [&](const ncpart::MarkedPartition& kappa) {
    if (separates_groups(kappa, orders)) out += wick_apply(reduce_kernel(kappa, f, *space), omega);
  });
  return out;
}

}  // namespace freefock::field
