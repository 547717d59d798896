#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "wordrange/rangereport.hpp"

using namespace wordrange;

namespace {

RangeConfig make_config(unsigned w, unsigned B, Variant v, IndexBackend b = IndexBackend::Exact) {
  RangeConfig cfg;
  cfg.w = w;
  cfg.B = B;
  cfg.variant = v;
  cfg.backend = b;
  cfg.audit = true;
  return cfg;
}

// Brute-force branching predicate straight from the trie definition: a node
// branches when at least two of its children hold an element. Roots always
// count as branching, leaves never do.
bool brute_branching(const TrieGeometry& g, const std::set<Key>& s, const NodeName& v) {
  if (v.depth == 0) return true;
  if (g.is_leaf(v)) return false;
  const unsigned w = g.w();
  const unsigned top = std::min(w, unsigned{v.depth} * g.chunk(v.order));
  const unsigned child = std::min(w, (v.depth + 1u) * g.chunk(v.order));
  std::set<Key> children;
  for (Key x : s)
    if (key_prefix(x, top, w) == v.prefix) children.insert(key_prefix(x, child, w));
  return children.size() >= 2;
}

bool active(const TrieGeometry& g, const std::set<Key>& s, const NodeName& v) {
  const unsigned bits = g.prefix_bits(v);
  return std::any_of(s.begin(), s.end(), [&](Key x) { return key_prefix(x, bits, g.w()) == v.prefix; });
}

// Lowest branching strict ancestor in the primary trie, by walking upward.
NodeName brute_lba(const TrieGeometry& g, const std::set<Key>& s, const NodeName& v) {
  const Key x = g.representative(v);
  for (unsigned d = v.depth; d-- > 0;) {
    const NodeName a = g.t0(d, x);
    if (brute_branching(g, s, a)) return a;
  }
  FAIL("no branching ancestor");
  return {};
}

void check_every_node(const RangeReporter& rr, const std::set<Key>& s) {
  const TrieGeometry& g = rr.geometry();
  const Key domain = Key{1} << g.w();
  for (unsigned t = 0; t <= g.top_order(); ++t) {
    for (unsigned d = 0; d <= g.leaf_depth(t); ++d) {
      const unsigned bits = std::min(g.w(), d * g.chunk(t));
      for (Key p = 0; p < (Key{1} << bits); ++p) {
        const NodeName v = g.on_path(t, d, p << (g.w() - bits));
        if (!active(g, s, v)) {
          rr.test_branching(v);  // any answer, but no fault
          continue;
        }
        CAPTURE(to_string(v));
        REQUIRE(rr.test_branching(v) == brute_branching(g, s, v));
      }
    }
  }
  // monotone across orders, and lba of every non-branching active node
  for (Key x : s)
    for (unsigned d = 1; d < g.w(); ++d) {
      const NodeName v = g.t0(d, x);
      bool seen = false;
      for (unsigned t = 0; t <= g.top_order(); ++t) {
        const bool br = rr.test_branching(g.map_node(v, t));
        REQUIRE((!seen || br));
        seen = seen || br;
      }
      if (brute_branching(g, s, v)) continue;
      const BranchingRecord* rec = rr.find_lba(v);
      REQUIRE(rec != nullptr);
      REQUIRE(rec->node == brute_lba(g, s, v));
      REQUIRE(rr.verify_lba(*rec, v));
    }
  (void)domain;
}

void check_queries(const RangeReporter& rr, const std::set<Key>& s) {
  const Key top = rr.geometry().params().max_key();
  for (Key a = 0; a <= top; ++a)
    for (Key b = a; b <= top; ++b) {
      const auto got = rr.findany(a, b);
      const auto it = s.lower_bound(a);
      const bool nonempty = it != s.end() && *it <= b;
      REQUIRE(got.has_value() == nonempty);
      if (got) {
        REQUIRE(*got >= a);
        REQUIRE(*got <= b);
        REQUIRE(s.count(*got));
      }
      REQUIRE(rr.last_query().pred_queries == 0);
    }
  CHECK(rr.report(0, top) == std::vector<Key>(s.begin(), s.end()));
}

void random_run(const RangeConfig& cfg, std::uint64_t seed, int ops, bool every_node) {
  RangeReporter rr(cfg);
  std::set<Key> s;
  std::mt19937_64 rng(seed);
  const Key mask = rr.geometry().params().max_key();
  for (int op = 0; op < ops; ++op) {
    const Key x = rng() & mask;
    if (s.count(x) && rng() % 3 == 0) {
      REQUIRE(rr.erase(x));
      s.erase(x);
    } else if (!s.count(x)) {
      REQUIRE(rr.insert(x));
      s.insert(x);
    } else {
      REQUIRE_FALSE(rr.insert(x));
    }
    if (every_node && op % 4 == 0) check_every_node(rr, s);
    if (op % 25 == 0) check_queries(rr, s);
  }
  check_every_node(rr, s);
  check_queries(rr, s);
  const unsigned T = rr.geometry().top_order();
  CHECK(rr.max_query().test_branching <= ceil_log2(T + 2) + 2);
  CHECK(rr.max_query().navlist_queries <= 4);
  CHECK(rr.max_query().pred_queries == 0);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make_config(8, 4, Variant::Core).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_config(8, 3, Variant::FastQuery5B).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_config(12, 2, Variant::Core).validate(), std::invalid_argument);
  CHECK_NOTHROW(make_config(64, 8, Variant::FastUpdate5A).validate());
  CHECK(parse_variant("5b") == Variant::FastQuery5B);
  CHECK(to_string(Variant::FastUpdate5A) == "5a");
  CHECK(parse_backend("bloomier") == IndexBackend::Bloomier);
  CHECK_THROWS_AS(parse_backend("x"), std::invalid_argument);
}

TEST_CASE("empty and single element") {
  RangeReporter rr(make_config(8, 2, Variant::Core));
  CHECK_FALSE(rr.findany(0, 255).has_value());
  CHECK(rr.report(0, 255).empty());
  CHECK_THROWS_WITH_AS(rr.findany(5, 4), "empty interval", std::invalid_argument);
  CHECK(rr.test_branching(rr.geometry().on_path(2, 0, 0)));

  rr.insert(5);
  CHECK(rr.findany(5, 5) == 5);
  CHECK(rr.findany(0, 10) == 5);
  CHECK_FALSE(rr.findany(6, 255).has_value());
  CHECK(rr.branching_count() == 0);

  CHECK(rr.erase(5));
  CHECK_FALSE(rr.erase(5));
  CHECK(rr.empty());
  CHECK(rr.branching_count() == 0);
  CHECK(rr.ancestor_index().size() == 0);
  CHECK(rr.navlist().empty());
  CHECK_FALSE(rr.findany(0, 255).has_value());
}

TEST_CASE("two keys make one branching node") {
  RangeReporter rr(make_config(8, 2, Variant::Core));
  rr.insert(10);
  rr.insert(12);
  CHECK(rr.branching_count() == 1);
  const BranchingRecord* rec = rr.record(rr.geometry().t0(5, 10));
  REQUIRE(rec != nullptr);
  CHECK(rec->real);

  const auto order = rr.navlist().traverse();
  const auto open = std::find(order.begin(), order.end(), rec->open_h);
  const auto close = std::find(order.begin(), order.end(), rec->close_h);
  REQUIRE(open < close);
  std::vector<Key> inside;
  for (auto it = open; it != close; ++it)
    if (rr.navlist().entry(*it).kind == EntryKind::Element)
      inside.push_back(static_cast<Key>(rr.navlist().entry(*it).owner));
  CHECK(inside == std::vector<Key>{10, 12});

  rr.erase(10);
  CHECK(rr.findany(0, 255) == 12);
  CHECK(rr.branching_count() == 0);
}

TEST_CASE("report") {
  RangeReporter rr(make_config(8, 2, Variant::Core));
  for (Key x : {3, 5, 9}) rr.insert(x);
  CHECK(rr.report(4, 9) == std::vector<Key>{5, 9});
  CHECK(rr.report(0, 255) == std::vector<Key>{3, 5, 9});
  CHECK(rr.report(6, 8).empty());
}

TEST_CASE("verify_lba") {
  RangeReporter rr(make_config(8, 2, Variant::Core));
  for (Key x : {0, 128, 130}) rr.insert(x);
  const TrieGeometry& g = rr.geometry();
  const NodeName v = g.t0(7, 130);
  const BranchingRecord* root = rr.record(g.t0(0, 0));
  const BranchingRecord* low = rr.record(g.t0(6, 128));
  REQUIRE(root != nullptr);
  REQUIRE(low != nullptr);
  CHECK(rr.verify_lba(*low, v));
  // the root's right descendant sits above v
  CHECK_FALSE(rr.verify_lba(*root, v));
  // not an ancestor
  CHECK_FALSE(rr.verify_lba(*low, g.t0(3, 0)));
  CHECK(rr.find_lba(v) == low);
}

TEST_CASE("exhaustive w=8 core") {
  for (std::uint64_t seed : {1, 2, 3}) {
    CAPTURE(seed);
    random_run(make_config(8, 2, Variant::Core), seed, 120, true);
  }
}

TEST_CASE("exhaustive w=8 core with the Bloomier index") {
  random_run(make_config(8, 2, Variant::Core, IndexBackend::Bloomier), 4, 120, true);
}

TEST_CASE("exhaustive w=8 fast variants") {
  for (unsigned B : {4u, 8u}) {
    CAPTURE(B);
    random_run(make_config(8, B, Variant::FastUpdate5A), 5, 120, true);
    random_run(make_config(8, B, Variant::FastQuery5B), 6, 120, true);
    random_run(make_config(8, B, Variant::FastQuery5B, IndexBackend::Bloomier), 7, 80, false);
  }
}

TEST_CASE("dense w=8 fill and drain") {
  RangeReporter rr(make_config(8, 2, Variant::Core));
  std::set<Key> s;
  for (Key x = 0; x < 256; x += 3) {
    rr.insert(x);
    s.insert(x);
  }
  check_every_node(rr, s);
  for (Key x = 0; x < 256; x += 6) {
    rr.erase(x);
    s.erase(x);
  }
  check_every_node(rr, s);
  check_queries(rr, s);
}

TEST_CASE("w=16 random run under audit") {
  RangeConfig cfg = make_config(16, 2, Variant::Core);
  RangeReporter rr(cfg);
  std::set<Key> s;
  std::mt19937_64 rng(11);
  for (int op = 0; op < 400; ++op) {
    const Key x = rng() & 0xffff;
    if (s.count(x)) {
      rr.erase(x);
      s.erase(x);
    } else {
      rr.insert(x);
      s.insert(x);
    }
    const Key a = rng() & 0xffff, b = std::min<Key>(0xffff, a + (rng() & 0xfff));
    const auto got = rr.findany(a, b);
    const auto it = s.lower_bound(a);
    REQUIRE(got.has_value() == (it != s.end() && *it <= b));
  }
  CHECK(rr.report(0, 0xffff) == std::vector<Key>(s.begin(), s.end()));
  CHECK(rr.max_insert().index_writes <= 4 * (4 + 1));
}
