#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "freefock/ncpart.hpp"
#include "oracles.hpp"

using namespace freefock;
using namespace freefock::ncpart;

namespace {

using Key = std::pair<std::vector<std::vector<int>>, std::vector<int>>;

std::set<Key> keys(const std::vector<MarkedPartition>& ks) {
  std::set<Key> out;
  for (const auto& k : ks) out.insert({k.partition.blocks, k.marks});
  return out;
}

SetPartition part(int n, std::vector<std::vector<int>> blocks) { return SetPartition{n, std::move(blocks)}; }

}  // namespace

TEST_CASE("noncrossing counts follow Catalan and the brute-force filter", "[ncpart]") {
  CHECK(enumerate_nc(1).size() == 1);
  CHECK(enumerate_nc(3).size() == 5);
  CHECK(enumerate_nc(4).size() == 14);
  for (int n = 1; n <= 10; ++n) {
    const auto nc = enumerate_nc(n);
    INFO("n=" << n);
    CHECK(nc.size() == catalan(n));
    CHECK(nc.size() == oracle::nc_by_filter(n).size());
  }
  CHECK(enumerate_nc(12).size() == catalan(12));
}

TEST_CASE("noncrossing enumeration is canonical and duplicate-free", "[ncpart]") {
  for (int n = 1; n <= 8; ++n) {
    const auto nc = enumerate_nc(n);
    for (std::size_t k = 0; k < nc.size(); ++k) {
      REQUIRE(is_well_formed(nc[k]));
      REQUIRE(is_noncrossing(nc[k]));
      if (k > 0) REQUIRE(canonical_less(nc[k - 1], nc[k]));
    }
  }
}

TEST_CASE("crossing test on small cases", "[ncpart]") {
  CHECK(is_noncrossing(part(3, {{1, 2}, {3}})));
  CHECK_FALSE(is_noncrossing(part(4, {{1, 3}, {2, 4}})));
  CHECK(is_noncrossing(part(4, {{1, 4}, {2, 3}})));
  CHECK_FALSE(is_noncrossing(part(6, {{1, 4, 6}, {2, 5}, {3}})));
  for (int n = 1; n <= 7; ++n)
    for (const auto& p : oracle::all_set_partitions(n)) REQUIRE(is_noncrossing(p) == !oracle::crosses(p));
}

TEST_CASE("G_n small cases", "[ncpart]") {
  const auto g1 = enumerate_gn(1);
  REQUIRE(g1.size() == 1);
  CHECK(g1[0].partition.blocks == std::vector<std::vector<int>>{{1}});
  CHECK(g1[0].marks == std::vector<int>{1});

  const auto g2 = enumerate_gn(2);
  REQUIRE(g2.size() == 3);
  CHECK(keys(g2) == std::set<Key>{{{{1}, {2}}, {1, 1}}, {{{1, 2}}, {1}}, {{{1, 2}}, {-1}}});

  const auto g3 = enumerate_gn(3);
  CHECK(g3.size() == 7);
  for (const auto& k : g3) CHECK(k.partition.blocks != std::vector<std::vector<int>>{{1, 3}, {2}});
}

TEST_CASE("G_n agrees with the filter oracle and the recursive construction", "[ncpart]") {
  for (int n = 1; n <= 9; ++n) {
    INFO("n=" << n);
    const auto gn = enumerate_gn(n);
    const auto rec = enumerate_gn_recursive(n);
    const auto brute = oracle::gn_by_filter(n);
    CHECK(gn.size() == brute.size());
    CHECK(rec.size() == brute.size());
    CHECK(keys(gn) == keys(brute));
    CHECK(keys(rec) == keys(brute));
    CHECK(keys(rec).size() == rec.size());
  }
}

TEST_CASE("G_n members satisfy every defining rule", "[ncpart][property]") {
  for (int n = 1; n <= 8; ++n) {
    const auto gn = enumerate_gn(n);
    CHECK(keys(gn).size() == gn.size());
    for (std::size_t q = 0; q < gn.size(); ++q) {
      const auto& k = gn[q];
      REQUIRE(is_noncrossing(k.partition));
      REQUIRE(in_gn(k));
      for (std::size_t b = 0; b < k.marks.size(); ++b) {
        if (k.partition.blocks[b].size() == 1) REQUIRE(k.marks[b] == 1);
        if (k.marks[b] != 1) continue;
        for (std::size_t a = 0; a < k.marks.size(); ++a)
          if (a != b) REQUIRE_FALSE(is_nested_in(k.partition.blocks[b], k.partition.blocks[a]));
      }
      if (q > 0) REQUIRE(canonical_less(gn[q - 1], k));
    }
  }
}

TEST_CASE("G_n sizes satisfy the growth recursion", "[ncpart][property]") {
  for (int n = 2; n <= 10; ++n) {
    std::size_t predicted = 0;
    for_each_gn(n - 1, [&](const MarkedPartition& k) { predicted += 1 + (k.plus_blocks() > 0 ? 2 : 0); });
    std::size_t actual = 0;
    for_each_gn(n, [&](const MarkedPartition&) { ++actual; });
    INFO("n=" << n);
    CHECK(actual == predicted);
  }
}

TEST_CASE("interval partitions form a subset of G_n", "[ncpart]") {
  CHECK(enumerate_interval(1).size() == 1);
  CHECK(enumerate_interval(2).size() == 3);
  CHECK(enumerate_interval(3).size() == oracle::interval_by_filter(3).size());
  CHECK(enumerate_interval(3).size() == 7);
  for (int n = 1; n <= 8; ++n) {
    const auto iv = keys(enumerate_interval(n));
    const auto gn = keys(enumerate_gn(n));
    CHECK(iv == keys(oracle::interval_by_filter(n)));
    CHECK(std::includes(gn.begin(), gn.end(), iv.begin(), iv.end()));
  }
}

TEST_CASE("enumeration bounds raise size errors", "[ncpart]") {
  CHECK_THROWS_AS(enumerate_nc(0), SizeError);
  CHECK_THROWS_AS(enumerate_nc(kMaxNc + 1), SizeError);
  CHECK_THROWS_AS(enumerate_gn(kMaxGn + 1), SizeError);
  CHECK_THROWS_AS(enumerate_interval(0), SizeError);
  CHECK_NOTHROW(enumerate_nc(kMaxNc).size());
}

TEST_CASE("marked membership rejects malformed markings", "[ncpart]") {
  CHECK_FALSE(in_gn(MarkedPartition{part(2, {{1}, {2}}), {1, -1}}));
  CHECK_FALSE(in_gn(MarkedPartition{part(4, {{1, 4}, {2, 3}}), {1, 1}}));
  CHECK(in_gn(MarkedPartition{part(4, {{1, 4}, {2, 3}}), {1, -1}}));
  CHECK_FALSE(in_gn(MarkedPartition{part(4, {{1, 3}, {2, 4}}), {-1, -1}}));
  CHECK_FALSE(is_well_formed(part(3, {{2, 3}, {1}})));
}
