#include <doctest.h>

#include <random>
#include <unordered_map>
#include <vector>

#include "wordrange/bloomier.hpp"

using namespace wordrange;

namespace {

// Two distinct keys with equal h under the filter's seed.
std::pair<Key, Key> colliding_pair(const BloomierFilter& f) {
  std::unordered_map<std::uint64_t, Key> by_hash;
  for (Key x = 1;; ++x) {
    auto [it, fresh] = by_hash.try_emplace(f.hash(x), x);
    if (!fresh) return {it->second, x};
  }
}

BloomierConfig small_config() {
  BloomierConfig cfg;
  cfg.n = 4;
  cfg.epsilon = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("config") {
  BloomierConfig cfg;
  cfg.n = 1 << 12;
  cfg.u_bits = 64;
  cfg.epsilon = 1.0 / 64;
  // lg n + max(lg lg(u/n), lg(1/eps)) = 12 + 6
  CHECK(cfg.hash_bits() == 18);
  CHECK(cfg.hash_bits() < 64);
  cfg.u_bits = 12;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.u_bits = 32;
  cfg.epsilon = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.5;
  cfg.r = 65;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("basic contract") {
  BloomierFilter f(BloomierConfig{});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(f.lookup(rng() & 0xffffffffu) == 0);
  f.insert(42, 7);
  CHECK(f.lookup(42) == 7);
  f.erase(42);
  CHECK(f.lookup(42) == 0);
  CHECK(f.size() == 0);
  CHECK_THROWS_WITH(f.insert(5, 0), "use delete");
  CHECK_THROWS_AS(f.insert(5, 256), std::invalid_argument);
}

TEST_CASE("capacity") {
  BloomierFilter f(small_config());
  for (Key x = 1; x <= 4; ++x) f.insert(x * 1000, 1);
  CHECK_THROWS_AS(f.insert(99, 1), std::length_error);
}

TEST_CASE("hash collision goes under the original key") {
  BloomierFilter f(small_config());
  const auto [a, b] = colliding_pair(f);
  f.insert(a, 3);
  f.insert(b, 5);
  CHECK_FALSE(f.holds_under_original(a));
  CHECK(f.holds_under_original(b));
  CHECK(f.spilled() == 1);
  CHECK(f.lookup(a) == 3);
  CHECK(f.lookup(b) == 5);

  SUBCASE("erase the spilled key") {
    f.erase(b);
    CHECK(f.lookup(a) == 3);
  }
  SUBCASE("erase the hashed key") {
    f.erase(a);
    CHECK(f.lookup(b) == 5);
  }
}

TEST_CASE("oracle replay") {
  BloomierConfig cfg;
  cfg.n = 1 << 12;
  BloomierFilter f(cfg);
  std::mt19937_64 rng(17);
  std::unordered_map<Key, std::uint64_t> live;
  std::vector<Key> keys;
  for (int op = 0; op < 10000; ++op) {
    if (keys.size() < cfg.n && (keys.empty() || rng() % 3)) {
      const Key x = rng() & 0xffffffffu;
      if (live.count(x)) continue;
      const std::uint64_t a = 1 + rng() % 255;
      f.insert(x, a);
      live[x] = a;
      keys.push_back(x);
    } else {
      const std::size_t i = rng() % keys.size();
      f.erase(keys[i]);
      live.erase(keys[i]);
      keys[i] = keys.back();
      keys.pop_back();
    }
    const Key probe = keys.empty() ? 0 : keys[rng() % keys.size()];
    if (!keys.empty()) REQUIRE(f.lookup(probe) == live[probe]);
  }
  for (const auto& [x, a] : live) REQUIRE(f.lookup(x) == a);
  CHECK(f.size() == live.size());
  CHECK(f.hashed() + f.spilled() == live.size());
}

TEST_CASE("false positive rate") {
  BloomierConfig cfg;
  cfg.n = 1 << 12;
  cfg.epsilon = 1.0 / 64;
  BloomierFilter f(cfg);
  std::mt19937_64 rng(23);
  std::unordered_map<Key, int> live;
  while (live.size() < cfg.n) {
    const Key x = rng() & 0xffffffffu;
    if (live.emplace(x, 1).second) f.insert(x, 1);
  }
  int fp = 0, samples = 0;
  while (samples < 1000000) {
    const Key x = rng() & 0xffffffffu;
    if (live.count(x)) continue;
    ++samples;
    if (f.lookup(x) != 0) ++fp;
  }
  CHECK(fp <= 1.5 * cfg.epsilon * samples);
}

TEST_CASE("space") {
  BloomierConfig cfg;
  cfg.n = 1 << 10;
  BloomierFilter f(cfg);
  const std::size_t empty = f.space_bits();
  for (Key x = 1; x <= 500; ++x) f.insert(x * 7919, 1);
  CHECK(f.space_bits() > empty);
}
