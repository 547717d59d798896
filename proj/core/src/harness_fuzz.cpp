#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "harness_detail.hpp"
#include "wordrange/harness.hpp"
#include "wordrange/perfecthash.hpp"

namespace wordrange {

using detail::Json;

namespace {

// Sorted-set oracle with O(1) uniform sampling of live keys.
class Oracle {
 public:
  bool insert(Key x) {
    if (!set_.insert(x).second) return false;
    pos_[x] = live_.size();
    live_.push_back(x);
    return true;
  }
  bool erase(Key x) {
    if (!set_.erase(x)) return false;
    const std::size_t i = pos_.at(x);
    live_[i] = live_.back();
    pos_[live_[i]] = i;
    live_.pop_back();
    pos_.erase(x);
    return true;
  }
  bool contains(Key x) const { return set_.count(x) != 0; }
  bool empty() const { return live_.empty(); }
  std::size_t size() const { return live_.size(); }
  const std::vector<Key>& keys() const { return live_; }
  Key sample(std::mt19937_64& rng) const { return live_[rng() % live_.size()]; }
  bool nonempty(Key a, Key b) const {
    auto it = set_.lower_bound(a);
    return it != set_.end() && *it <= b;
  }
  std::vector<Key> range(Key a, Key b) const {
    return {set_.lower_bound(a), set_.upper_bound(b)};
  }
  std::optional<Key> successor_after(Key x) const {
    auto it = set_.upper_bound(x);
    if (it == set_.end()) return std::nullopt;
    return *it;
  }

 private:
  std::set<Key> set_;
  std::vector<Key> live_;
  std::unordered_map<Key, std::size_t> pos_;
};

struct FuzzTotals {
  std::uint64_t inserts = 0, erases = 0, queries = 0, reports = 0;
  std::uint64_t mismatches = 0, audit_failures = 0;
  QueryStats max_query;
  unsigned max_insert_writes = 0, max_erase_writes = 0;
  std::string first_problem;
  std::uint64_t max_size = 0;
};

void note(FuzzTotals& t, const std::string& what) {
  if (t.first_problem.empty()) t.first_problem = what;
}

void run_trial(const RunSpec& spec, std::uint64_t seed, FuzzTotals& tot) {
  RangeConfig cfg;
  cfg.w = spec.w;
  cfg.B = static_cast<unsigned>(spec.B[0]);
  cfg.variant = spec.variant;
  cfg.backend = spec.backend;
  cfg.audit = spec.audit;
  cfg.seed = seed;
  RangeReporter rr(cfg);
  Oracle oracle;
  std::mt19937_64 rng(seed);
  const Key mask = low_mask(spec.w);
  const std::uint64_t ops = spec.ops ? spec.ops : (spec.w <= 8 ? 200 : 100000);
  const unsigned per_op = spec.audit ? 300 : 4;
  const std::uint64_t sweep_every = spec.w <= 8 ? 20 : 0;

  auto fresh_key = [&]() -> Key {
    if (spec.w <= 16 || oracle.empty() || rng() % 2 == 0) return rng() & mask;
    const unsigned spread = 1 + static_cast<unsigned>(rng() % std::min(spec.w, 24u));
    return (oracle.sample(rng) ^ (rng() & low_mask(spread))) & mask;
  };
  auto check = [&](Key a, Key b) {
    ++tot.queries;
    const auto got = rr.findany(a, b);
    const bool expect = oracle.nonempty(a, b);
    if (got.has_value() != expect || (got && (*got < a || *got > b || !oracle.contains(*got)))) {
      ++tot.mismatches;
      note(tot, "findany(" + std::to_string(a) + ", " + std::to_string(b) + ") seed " + std::to_string(seed));
    }
  };
  auto random_query = [&]() {
    const unsigned kind = static_cast<unsigned>(rng() % 5);
    if (oracle.empty() || kind == 0) {
      Key a = rng() & mask, b = rng() & mask;
      if (a > b) std::swap(a, b);
      return check(a, b);
    }
    const Key x = oracle.sample(rng);
    const Key span = rng() & low_mask(static_cast<unsigned>(rng() % (spec.w + 1)));
    switch (kind) {
      case 1: return check(x > span ? x - span : 0, x + std::min(span, mask - x));
      case 2: {
        const auto nx = oracle.successor_after(x);
        const Key hi = nx ? *nx - 1 : mask;
        if (x < hi) return check(x + 1, x + 1 + std::min(span, hi - x - 1));
        return check(x, x);
      }
      case 3: return check(x, x);
      default: {
        const Key a = x > span ? x - span : 0;
        const Key len = rng() & low_mask(static_cast<unsigned>(rng() % (spec.w + 1)));
        return check(a, a + std::min(len, mask - a));
      }
    }
  };

  for (std::uint64_t op = 0; op < ops; ++op) {
    try {
      const unsigned roll = static_cast<unsigned>(rng() % 100);
      if (oracle.empty() || roll < 55) {
        const Key x = roll < 3 && !oracle.empty() ? oracle.sample(rng) : fresh_key();
        ++tot.inserts;
        if (rr.insert(x) != oracle.insert(x)) {
          ++tot.mismatches;
          note(tot, "insert result for " + std::to_string(x));
        }
      } else {
        const Key x = roll < 95 ? oracle.sample(rng) : (rng() & mask);
        ++tot.erases;
        if (rr.erase(x) != oracle.erase(x)) {
          ++tot.mismatches;
          note(tot, "erase result for " + std::to_string(x));
        }
      }
      tot.max_size = std::max<std::uint64_t>(tot.max_size, oracle.size());
      for (unsigned q = 0; q < per_op; ++q) random_query();
      if (sweep_every && (op + 1) % sweep_every == 0)
        for (Key a = 0; a <= mask; ++a)
          for (Key b = a; b <= mask; ++b) check(a, b);
      if (op % 50 == 0 && !oracle.empty()) {
        Key a = rng() & mask, b = rng() & mask;
        if (a > b) std::swap(a, b);
        ++tot.reports;
        if (rr.report(a, b) != oracle.range(a, b)) {
          ++tot.mismatches;
          note(tot, "report(" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
      }
    } catch (const AuditFailure& e) {
      ++tot.audit_failures;
      note(tot, std::string(e.what()) + " (seed " + std::to_string(seed) + ", op " + std::to_string(op) + ")");
      break;
    }
  }
  const QueryStats& q = rr.max_query();
  tot.max_query.test_branching = std::max(tot.max_query.test_branching, q.test_branching);
  tot.max_query.navlist_queries = std::max(tot.max_query.navlist_queries, q.navlist_queries);
  tot.max_query.pred_queries = std::max(tot.max_query.pred_queries, q.pred_queries);
  tot.max_query.filter_reads = std::max(tot.max_query.filter_reads, q.filter_reads);
  tot.max_insert_writes = std::max(tot.max_insert_writes, rr.max_insert().index_writes);
  tot.max_erase_writes = std::max(tot.max_erase_writes, rr.max_erase().index_writes);
}

}  // namespace

RunOutcome run_oracle_fuzz(const RunSpec& spec) {
  FuzzTotals tot;
  const std::uint64_t trials = spec.trials.value_or(1);
  for (std::uint64_t i = 0; i < trials; ++i) run_trial(spec, spec.seed + i, tot);

  const unsigned B = static_cast<unsigned>(spec.B[0]);
  const TrieGeometry geo(WordParams::make(spec.w), B);
  const unsigned top = geo.top_order();
  const unsigned search = ceil_log2(top + 1);
  const unsigned lgw = WordParams::make(spec.w).lgw;
  const unsigned tb_bound = search + 2;
  const unsigned nav_bound = 4;
  const unsigned write_bound = spec.variant == Variant::FastQuery5B ? 4 * B * top : 4 * (lgw + 1);
  const unsigned read_bound = search + B + 2;

  bool within = tot.max_query.test_branching <= tb_bound && tot.max_query.navlist_queries <= nav_bound &&
                tot.max_query.pred_queries == 0 && tot.max_insert_writes <= write_bound;
  if (spec.variant == Variant::FastUpdate5A) within = within && tot.max_query.filter_reads <= read_bound;

  Json j;
  j["command"] = "oracle-fuzz";
  j["w"] = spec.w;
  j["B"] = B;
  j["variant"] = to_string(spec.variant);
  j["backend"] = to_string(spec.backend);
  j["seed"] = spec.seed;
  j["trials"] = trials;
  j["ops_per_trial"] = spec.ops ? spec.ops : (spec.w <= 8 ? 200 : 100000);
  j["audit"] = spec.audit;
  j["inserts"] = tot.inserts;
  j["erases"] = tot.erases;
  j["queries"] = tot.queries;
  j["reports"] = tot.reports;
  j["max_size"] = tot.max_size;
  j["mismatches"] = tot.mismatches;
  j["audit_failures"] = tot.audit_failures;
  j["first_problem"] = tot.first_problem;
  Json maxima;
  maxima["test_branching"] = tot.max_query.test_branching;
  maxima["navlist_queries"] = tot.max_query.navlist_queries;
  maxima["pred_queries"] = tot.max_query.pred_queries;
  maxima["filter_reads"] = tot.max_query.filter_reads;
  maxima["insert_writes"] = tot.max_insert_writes;
  maxima["erase_writes"] = tot.max_erase_writes;
  j["max"] = maxima;
  Json bounds;
  bounds["test_branching"] = tb_bound;
  bounds["navlist_queries"] = nav_bound;
  bounds["pred_queries"] = 0;
  bounds["filter_reads"] = spec.variant == Variant::FastUpdate5A ? Json(read_bound) : Json(nullptr);
  bounds["insert_writes"] = write_bound;
  j["bounds"] = bounds;
  j["within_bounds"] = within;
  const bool ok = within && tot.mismatches == 0 && tot.audit_failures == 0;
  j["ok"] = ok;
  return {ok, detail::render(j, spec.format)};
}

// ---------------------------------------------------------------- perfect hash

RunOutcome run_perfect_hash_demo(const RunSpec& spec) {
  PerfectHashConfig cfg;
  cfg.n = spec.n ? spec.n : 1u << 14;
  cfg.u_bits = spec.u_bits ? spec.u_bits : 64;
  const std::uint64_t ops = spec.ops ? spec.ops : 3 * cfg.n;
  const double lg_n = std::log2(static_cast<double>(cfg.n));
  const std::uint64_t per_lg_u = (cfg.n + cfg.u_bits - 1) / cfg.u_bits;
  const double range_bound = static_cast<double>(cfg.n) * (1.0 + 2.0 / std::cbrt(lg_n)) + 8.0 * per_lg_u;
  const std::uint64_t spill_bound = 4 * per_lg_u;
  const std::uint64_t audit_every = std::max<std::uint64_t>(1, cfg.n / 8);

  Json j;
  for (unsigned attempt = 0; attempt <= kMaxReseeds; ++attempt) {
    cfg.seed = attempt_seed(spec.seed, attempt);
    PerfectHash ph(cfg);
    SeedStream reseed(cfg.seed ^ 0x2545f4914f6cdd1dull);
    std::mt19937_64 rng(cfg.seed);
    Oracle live;
    std::unordered_map<Key, std::uint64_t> value_of;
    std::unordered_map<std::uint64_t, Key> owner;
    std::uint64_t violations = 0, unstable = 0, rebuilds = 0, audits = 0, inserts = 0, erases = 0;

    auto assign = [&](Key k, std::uint64_t v) {
      if (v >= ph.range()) ++violations;
      auto [it, fresh] = owner.emplace(v, k);
      if (!fresh && it->second != k) ++violations;
      value_of[k] = v;
    };
    auto full_audit = [&]() {
      ++audits;
      std::unordered_map<std::uint64_t, Key> seen;
      for (Key k : live.keys()) {
        const std::uint64_t v = ph.eval(k);
        if (v != value_of.at(k)) ++unstable;
        if (!seen.emplace(v, k).second || v >= ph.range()) ++violations;
      }
      if (!ph.buckets_consistent()) ++violations;
    };

    for (std::uint64_t op = 0; op < ops; ++op) {
      const bool fill = op < cfg.n;
      const bool do_insert = live.size() < cfg.n && (fill || live.empty() || rng() % 2 == 0);
      if (do_insert) {
        Key k;
        do k = rng() & low_mask(cfg.u_bits);
        while (live.contains(k));
        live.insert(k);
        ++inserts;
        try {
          assign(k, ph.insert(k).value);
        } catch (const RebuildRequired&) {
          ++rebuilds;
          ph.rebuild(reseed.next(), live.keys());
          value_of.clear();
          owner.clear();
          for (Key x : live.keys()) assign(x, ph.eval(x));
        }
      } else {
        const Key k = live.sample(rng);
        live.erase(k);
        ++erases;
        if (!ph.erase(k)) ++violations;
        owner.erase(value_of.at(k));
        value_of.erase(k);
      }
      if ((op + 1) % audit_every == 0) full_audit();
    }
    full_audit();

    const bool injective = violations == 0 && unstable == 0;
    const bool range_ok = static_cast<double>(ph.range()) <= range_bound;
    const bool spill_ok = ph.spill_peak() <= spill_bound;
    j = Json();
    j["command"] = "perfect-hash-demo";
    j["n"] = cfg.n;
    j["u_bits"] = cfg.u_bits;
    j["ops"] = ops;
    j["inserts"] = inserts;
    j["erases"] = erases;
    j["range"] = ph.range();
    j["range_bound"] = range_bound;
    j["spill_capacity"] = ph.params().spill_capacity;
    j["spill_peak"] = ph.spill_peak();
    j["spill_peak_bound"] = spill_bound;
    j["rebuilds"] = rebuilds;
    j["space_bits"] = ph.space_bits();
    j["audits"] = audits;
    j["injective"] = injective;
    j["seed"] = spec.seed;
    j["seed_used"] = cfg.seed;
    j["attempts"] = attempt + 1;
    const bool ok = injective && range_ok && spill_ok;
    j["ok"] = ok;
    if (ok || !injective || !range_ok) break;
  }
  const bool ok = j["ok"].get<bool>();
  return {ok, detail::render(j, spec.format)};
}

}  // namespace wordrange
