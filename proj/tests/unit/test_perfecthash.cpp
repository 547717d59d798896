#include <doctest.h>

#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordrange/perfecthash.hpp"

using namespace wordrange;

TEST_CASE("derived parameters") {
  PerfectHashConfig cfg;
  cfg.n = 1 << 12;
  const auto p = PerfectHashParams::derive(cfg);
  CHECK(p.buckets == 29);  // ceil(4096 / 144)
  CHECK(p.s_bits == 36);   // 6 * lg 64
  CHECK(p.bucket_capacity == 207);  // ceil(144 + 12^(5/3))
  CHECK(p.spill_capacity == 8 * 64);
  CHECK(p.v_bits == 52);

  cfg.c = 1;
  CHECK(PerfectHashParams::derive(cfg).s_bits == 48);

  cfg.u_bits = 1;
  CHECK_THROWS_AS(PerfectHashParams::derive(cfg), std::invalid_argument);
  cfg.u_bits = 8;
  cfg.n = 1000;
  CHECK_THROWS_AS(PerfectHashParams::derive(cfg), std::invalid_argument);
}

TEST_CASE("first insert lands in a bucket") {
  PerfectHash ph(PerfectHashConfig{});
  const auto r = ph.insert(0xdeadbeef);
  CHECK(r.inserted);
  CHECK_FALSE(r.spilled);
  CHECK(r.value < ph.params().buckets * ph.params().bucket_capacity);
  CHECK(ph.eval(0xdeadbeef) == r.value);
  CHECK(ph.eval(0xdeadbeef) == r.value);
}

TEST_CASE("erase") {
  PerfectHash ph(PerfectHashConfig{});
  ph.insert(5);
  CHECK(ph.erase(5));
  CHECK_FALSE(ph.erase(5));
  CHECK(ph.size() == 0);
  CHECK(ph.insert(5).inserted);
}

TEST_CASE("n random keys get distinct values") {
  PerfectHashConfig cfg;
  cfg.n = 1 << 12;
  PerfectHash ph(cfg);
  std::mt19937_64 rng(77);
  std::unordered_set<Key> keys;
  std::unordered_set<std::uint64_t> values;
  while (keys.size() < cfg.n) {
    const Key k = rng();
    if (!keys.insert(k).second) continue;
    const auto r = ph.insert(k);
    REQUIRE(r.value < ph.range());
    REQUIRE(values.insert(r.value).second);
  }
  CHECK(ph.buckets_consistent());
  CHECK_THROWS_AS(ph.insert(rng()), std::length_error);
}

TEST_CASE("a name collision spills the second key") {
  PerfectHashConfig cfg;
  cfg.n = 16;
  cfg.u_bits = 4;
  cfg.seed = 3;
  bool found = false;
  for (Key a = 0; a < 16 && !found; ++a)
    for (Key b = 0; b < 16 && !found; ++b) {
      if (a == b) continue;
      PerfectHash ph(cfg);
      const auto ra = ph.insert(a);
      const auto rb = ph.insert(b);
      if (!rb.spilled) continue;
      found = true;
      CHECK_FALSE(ra.spilled);
      CHECK(rb.value >= ph.params().buckets * ph.params().bucket_capacity);
      CHECK(ph.eval(b) == rb.value);
      CHECK(ph.eval(a) == ra.value);
      // a spilled key is recognised when inserted again
      CHECK_FALSE(ph.insert(b).inserted);
      CHECK(ph.erase(b));
      CHECK(ph.spill_size() == 0);
    }
  CHECK(found);
}

TEST_CASE("mixed operations against a shadow map") {
  PerfectHashConfig cfg;
  cfg.n = 1 << 10;
  PerfectHash ph(cfg);
  std::mt19937_64 rng(5);
  std::unordered_map<Key, std::uint64_t> shadow;
  std::vector<Key> live;
  for (int op = 0; op < 10000; ++op) {
    if (live.size() < cfg.n && (live.empty() || rng() % 2)) {
      const Key k = rng();
      if (shadow.count(k)) continue;
      const auto r = ph.insert(k);
      shadow[k] = r.value;
      live.push_back(k);
    } else {
      const std::size_t i = rng() % live.size();
      REQUIRE(ph.erase(live[i]));
      shadow.erase(live[i]);
      live[i] = live.back();
      live.pop_back();
    }
  }
  std::unordered_set<std::uint64_t> values;
  for (const auto& [k, v] : shadow) {
    REQUIRE(ph.eval(k) == v);
    REQUIRE(values.insert(v).second);
  }
  CHECK(ph.size() == shadow.size());
  CHECK(ph.buckets_consistent());
}

TEST_CASE("rebuild reinserts the live set") {
  PerfectHashConfig cfg;
  cfg.n = 256;
  PerfectHash ph(cfg);
  std::vector<Key> live;
  for (Key k = 1; k <= 200; ++k) {
    live.push_back(k * 0x9e3779b97f4a7c15ull);
    ph.insert(live.back());
  }
  ph.rebuild(99, live);
  CHECK(ph.size() == 200);
  std::unordered_set<std::uint64_t> values;
  for (Key k : live) CHECK(values.insert(ph.eval(k)).second);
}

TEST_CASE("space grows with the live count") {
  PerfectHashConfig cfg;
  cfg.n = 1 << 12;
  PerfectHash ph(cfg);
  const std::size_t empty = ph.space_bits();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) ph.insert(rng());
  const std::size_t some = ph.space_bits();
  for (int i = 0; i < 1000; ++i) ph.insert(rng());
  CHECK(empty < some);
  CHECK(some < ph.space_bits());
}
