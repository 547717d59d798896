#include <doctest.h>

#include <random>
#include <set>

#include "wordrange/wordops.hpp"

using namespace wordrange;

namespace {

unsigned naive_msb(std::uint64_t x) {
  for (unsigned i = 63;; --i)
    if ((x >> i) & 1u) return i;
}

unsigned naive_common_prefix(Key a, Key b, unsigned w) {
  unsigned d = 0;
  while (d < w && ((a >> (w - 1 - d)) & 1u) == ((b >> (w - 1 - d)) & 1u)) ++d;
  return d;
}

}  // namespace

TEST_CASE("msb") {
  CHECK(msb(1) == 0);
  CHECK(msb(0b1000) == 3);
  CHECK(msb(0b0110) == naive_msb(0b0110));
  CHECK(msb(~0ull) == 63);
  CHECK_THROWS_WITH_AS(msb(0), "msb of zero", std::domain_error);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = rng() >> (rng() % 64);
    if (x == 0) continue;
    const unsigned m = msb(x);
    CHECK(m == naive_msb(x));
    CHECK((std::uint64_t{1} << m) <= x);
    if (m < 63) CHECK(x < (std::uint64_t{1} << (m + 1)));
  }
}

TEST_CASE("bit helpers") {
  CHECK(lsb(0b1000) == 3);
  CHECK(bits_for(0) == 1);
  CHECK(bits_for(255) == 8);
  CHECK(bits_for(256) == 9);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(8) == 3);
  CHECK(low_mask(64) == ~0ull);
}

TEST_CASE("lca_depth") {
  CHECK(lca_depth(10, 12, 8) == 5);
  CHECK(lca_depth(0, 255, 8) == 0);
  CHECK(lca_depth(6, 7, 8) == 7);
  CHECK_THROWS_WITH_AS(lca_depth(3, 3, 8), "identical keys have no proper LCA", std::invalid_argument);

  for (Key a = 0; a < 256; ++a)
    for (Key b = 0; b < 256; ++b)
      if (a != b) REQUIRE(lca_depth(a, b, 8) == naive_common_prefix(a, b, 8));
}

TEST_CASE("word params") {
  CHECK(WordParams::make(64).lgw == 6);
  CHECK(WordParams::make(8).max_key() == 255);
  CHECK_THROWS_AS(WordParams::make(12), std::invalid_argument);
}

TEST_CASE("natural subtree role") {
  CHECK(natural_subtree_role(4, 2) == SubtreeRole::Root);
  CHECK(natural_subtree_role(5, 2) == SubtreeRole::Interior);
  CHECK(natural_subtree_role(7, 4) == SubtreeRole::Interior);
  CHECK(natural_subtree_role(0, 4) == SubtreeRole::Root);
}

TEST_CASE("geometry") {
  const TrieGeometry g8(WordParams::make(8), 2);
  CHECK(g8.top_order() == 3);
  CHECK(g8.chunk(2) == 4);
  CHECK(g8.leaf_depth(0) == 8);
  CHECK(g8.leaf_depth(3) == 1);

  const TrieGeometry g64b4(WordParams::make(64), 4);
  CHECK(g64b4.top_order() == 3);
  CHECK(g64b4.chunk(2) == 16);
  CHECK(g64b4.leaf_depth(2) == 4);

  // chunk 32 does not divide 8 for B=8 at w=8: leaves still at ceil(w/c)
  const TrieGeometry g8b8(WordParams::make(8), 8);
  CHECK(g8b8.top_order() == 1);
  CHECK(g8b8.leaf_depth(1) == 1);

  CHECK_THROWS_AS(TrieGeometry(WordParams::make(8), 3), std::invalid_argument);
  CHECK_THROWS_AS(TrieGeometry(WordParams::make(8), 16), std::invalid_argument);
}

TEST_CASE("map_node") {
  const TrieGeometry g(WordParams::make(8), 2);
  const NodeName v{0, 6, 0b000011};
  CHECK(g.map_node(v, 2) == NodeName{2, 1, 0});
  CHECK(g.map_node(NodeName{0, 4, 0}, 2) == NodeName{2, 1, 0});
  CHECK(g.map_node(NodeName{0, 0, 0}, 3) == NodeName{3, 0, 0});

  // arithmetic oracle over every primary node at w=8
  for (unsigned d = 0; d <= 8; ++d)
    for (Key x = 0; x < 256; ++x) {
      const NodeName v0 = g.t0(d, x);
      for (unsigned t = 0; t <= g.top_order(); ++t) {
        const unsigned c = g.chunk(t);
        const NodeName m = g.map_node(v0, t);
        REQUIRE(m.order == t);
        REQUIRE(m.depth == d / c);
        REQUIRE(m.prefix == key_prefix(x, std::min(8u, (d / c) * c), 8));
        REQUIRE(g.in_subtree(m, v0));
      }
    }
}

TEST_CASE("on_path and ancestry") {
  const TrieGeometry g(WordParams::make(16), 4);
  const Key x = 0xBEEF;
  for (unsigned t = 0; t <= g.top_order(); ++t)
    for (unsigned d = 0; d < g.leaf_depth(t); ++d) {
      const NodeName a = g.on_path(t, d, x);
      const NodeName b = g.on_path(t, d + 1, x);
      CHECK(g.is_strict_ancestor(a, b));
      CHECK_FALSE(g.is_strict_ancestor(b, a));
      CHECK(g.in_subtree(a, a));
      CHECK(g.in_subtree(a, g.leaf(g.representative(b))));
    }
  CHECK(g.leaf(x).prefix == x);
  CHECK(g.representative(g.t0(4, x)) == 0xB000);
}

TEST_CASE("encode is injective and round-trips") {
  const TrieGeometry g(WordParams::make(8), 2);
  std::set<u128> seen;
  for (unsigned t = 0; t <= g.top_order(); ++t)
    for (unsigned d = 0; d <= g.leaf_depth(t); ++d)
      for (Key x = 0; x < 256; ++x) {
        const NodeName n = g.on_path(t, d, x);
        const u128 code = g.encode(n);
        CHECK((code >> g.encoded_bits()) == 0);
        CHECK(g.decode(code) == n);
        seen.insert(code);
      }
  std::size_t expected = 0;
  for (unsigned t = 0; t <= g.top_order(); ++t)
    for (unsigned d = 0; d <= g.leaf_depth(t); ++d)
      expected += std::size_t{1} << std::min(8u, d * g.chunk(t));
  CHECK(seen.size() == expected);
}
