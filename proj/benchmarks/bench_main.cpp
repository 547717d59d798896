#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wordrange/bloomier.hpp"
#include "wordrange/gtgame.hpp"
#include "wordrange/perfecthash.hpp"
#include "wordrange/rangereport.hpp"

using namespace wordrange;

namespace {

RangeConfig config_for(const benchmark::State& state) {
  RangeConfig cfg;
  cfg.w = 64;
  cfg.B = static_cast<unsigned>(state.range(1));
  cfg.variant = static_cast<Variant>(state.range(2));
  cfg.backend = IndexBackend::Bloomier;
  return cfg;
}

void BM_Insert(benchmark::State& state) {
  std::mt19937_64 rng(1);
  RangeReporter rr(config_for(state));
  for (auto _ : state) rr.insert(rng());
  state.counters["max_writes"] = rr.max_insert().index_writes;
}

void BM_FindAny(benchmark::State& state) {
  std::mt19937_64 rng(2);
  RangeReporter rr(config_for(state));
  std::vector<Key> keys;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    keys.push_back(rng());
    rr.insert(keys.back());
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const Key x = keys[i++ % keys.size()];
    const Key span = rng() >> (rng() % 64);
    benchmark::DoNotOptimize(rr.findany(x > span ? x - span : 0, x));
  }
  state.counters["max_test_branching"] = rr.max_query().test_branching;
}

void BM_PerfectHashEval(benchmark::State& state) {
  PerfectHashConfig cfg;
  PerfectHash ph(cfg);
  std::mt19937_64 rng(3);
  std::vector<Key> keys;
  while (keys.size() < cfg.n) {
    keys.push_back(rng());
    ph.insert(keys.back());
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ph.eval(keys[i++ % keys.size()]));
}

void BM_BloomierLookup(benchmark::State& state) {
  BloomierConfig cfg;
  cfg.n = 1 << 12;
  cfg.u_bits = 32;
  BloomierFilter f(cfg);
  std::mt19937_64 rng(4);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const Key k = rng() & 0xffffffffu;
    if (!f.lookup(k)) f.insert(k, 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(f.lookup(rng() & 0xffffffffu));
}

void BM_GreaterThanQuery(benchmark::State& state) {
  const auto strategy = static_cast<GtStrategy>(state.range(1));
  const GtScheme scheme(1 << 16, static_cast<std::uint64_t>(state.range(0)), strategy);
  BitMemory m;
  scheme.update(m, 12345);
  std::mt19937_64 rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(scheme.query(m, rng() & 0xffff));
}

}  // namespace

BENCHMARK(BM_Insert)->Args({0, 2, 0})->Args({0, 4, 1})->Args({0, 4, 2})->Iterations(20000);
BENCHMARK(BM_FindAny)->Args({1 << 14, 2, 0})->Args({1 << 14, 4, 1})->Args({1 << 14, 4, 2});
BENCHMARK(BM_PerfectHashEval);
BENCHMARK(BM_BloomierLookup);
BENCHMARK(BM_GreaterThanQuery)->Args({2, 0})->Args({16, 0})->Args({16, 1});
