#include "wordrange/harness.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "harness_detail.hpp"
#include "wordrange/bloomier.hpp"
#include "wordrange/gtgame.hpp"
#include "wordrange/perfecthash.hpp"

namespace wordrange {

using detail::Json;

void RunSpec::validate() const {
  static const std::unordered_set<std::string> commands{"oracle-fuzz", "space-report", "probe-bench", "fp-rate",
                                                        "perfect-hash-demo"};
  if (!commands.count(command)) throw std::invalid_argument("unknown command: " + command);
  if (format != "json" && format != "csv") throw std::invalid_argument("format must be json or csv");
  if (B.empty()) throw std::invalid_argument("at least one B is required");
  if (command == "oracle-fuzz") {
    if (B.size() != 1) throw std::invalid_argument("oracle-fuzz takes a single B");
    RangeConfig cfg;
    cfg.w = w;
    cfg.B = static_cast<unsigned>(B[0]);
    cfg.variant = variant;
    cfg.validate();
  }
  if (command != "probe-bench" && trials == std::uint64_t{0}) throw std::invalid_argument("trials must be positive");
  if (command == "probe-bench") {
    for (auto b : B)
      if (b < 2) throw std::invalid_argument("B must be at least 2");
    if (strategy != "both") parse_strategy(strategy);
  }
  if (command == "space-report" && structure != "both" && structure != "bloomier" && structure != "perfecthash")
    throw std::invalid_argument("structure must be bloomier, perfecthash or both");
  if (u_bits > 64 && command != "space-report") throw std::invalid_argument("u-bits must be at most 64");
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in (0, 1]");
}

std::uint64_t attempt_seed(std::uint64_t seed, unsigned attempt) {
  if (attempt == 0) return seed;
  SeedStream s(seed ^ 0xa0761d6478bd642full);
  std::uint64_t out = 0;
  for (unsigned i = 0; i < attempt; ++i) out = s.next();
  return out;
}

RunOutcome run_command(const RunSpec& spec) {
  spec.validate();
  if (spec.command == "oracle-fuzz") return run_oracle_fuzz(spec);
  if (spec.command == "space-report") return run_space_report(spec);
  if (spec.command == "probe-bench") return run_probe_bench(spec);
  if (spec.command == "fp-rate") return run_fp_rate(spec);
  return run_perfect_hash_demo(spec);
}

namespace detail {

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

}  // namespace

std::string render(const Json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(j, "", cells);
  std::ostringstream os;
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].first;
  os << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].second;
  os << '\n';
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------- space report

namespace {

constexpr double kSpaceConstant = 8.0;

Json bloomier_space(const RunSpec& spec) {
  BloomierConfig cfg;
  cfg.n = spec.n ? spec.n : 1u << 12;
  cfg.u_bits = spec.u_bits ? spec.u_bits : 32;
  cfg.r = spec.r;
  cfg.epsilon = spec.epsilon;
  cfg.seed = spec.seed;
  BloomierFilter f(cfg);
  const std::size_t empty_bits = f.space_bits();
  std::mt19937_64 rng(spec.seed);
  std::unordered_set<u128, U128Hash> keys;
  const u128 umask = cfg.u_bits >= 128 ? ~u128{0} : (u128{1} << cfg.u_bits) - 1;
  while (keys.size() < cfg.n) {
    const u128 k = ((u128{rng()} << 64) | rng()) & umask;
    if (keys.insert(k).second) f.insert(k, 1 + rng() % low_mask(cfg.r));
  }
  const double n = static_cast<double>(cfg.n);
  const double lg_u_over_n = cfg.u_bits - std::log2(n);
  const double per_key = std::log2(lg_u_over_n) + std::log2(1.0 / cfg.epsilon) + cfg.r;
  const double bound = n * per_key;
  const double c = static_cast<double>(f.space_bits()) / bound;
  Json j;
  j["n"] = cfg.n;
  j["u_bits"] = cfg.u_bits;
  j["r"] = cfg.r;
  j["epsilon"] = cfg.epsilon;
  j["hash_bits"] = f.hash_bits();
  j["empty_bits"] = empty_bits;
  j["measured_bits"] = f.space_bits();
  j["spilled_keys"] = f.spilled();
  j["bound_expression"] = "n*(lg lg(u/n) + lg(1/eps) + r)";
  j["bound_bits"] = bound;
  j["C_measured"] = c;
  j["C_allowed"] = kSpaceConstant;
  j["ok"] = c <= kSpaceConstant;
  return j;
}

Json perfecthash_space(const RunSpec& spec) {
  PerfectHashConfig cfg;
  cfg.n = spec.n ? spec.n : 1u << 14;
  cfg.u_bits = spec.u_bits ? std::min(spec.u_bits, 64u) : 64;
  cfg.seed = spec.seed;
  for (unsigned attempt = 0;; ++attempt) {
    cfg.seed = attempt_seed(spec.seed, attempt);
    PerfectHash ph(cfg);
    const std::size_t empty_bits = ph.space_bits();
    std::mt19937_64 rng(cfg.seed);
    std::unordered_set<Key> keys;
    try {
      while (keys.size() < cfg.n) {
        const Key k = rng() & low_mask(cfg.u_bits);
        if (keys.insert(k).second) ph.insert(k);
      }
    } catch (const RebuildRequired&) {
      if (attempt < kMaxReseeds) continue;
      throw;
    }
    const double bound = static_cast<double>(cfg.n) * std::log2(static_cast<double>(cfg.u_bits));
    const double c = static_cast<double>(ph.space_bits()) / bound;
    Json j;
    j["n"] = cfg.n;
    j["u_bits"] = cfg.u_bits;
    j["c"] = cfg.c;
    j["v_bits"] = ph.params().v_bits;
    j["buckets"] = ph.params().buckets;
    j["bucket_capacity"] = ph.params().bucket_capacity;
    j["s_bits"] = ph.params().s_bits;
    j["empty_bits"] = empty_bits;
    j["measured_bits"] = ph.space_bits();
    j["bound_expression"] = "n*lg lg u";
    j["bound_bits"] = bound;
    j["C_measured"] = c;
    j["C_allowed"] = kSpaceConstant;
    j["attempts"] = attempt + 1;
    j["ok"] = c <= kSpaceConstant;
    return j;
  }
}

}  // namespace

RunOutcome run_space_report(const RunSpec& spec) {
  Json j;
  j["command"] = "space-report";
  j["seed"] = spec.seed;
  bool ok = true;
  if (spec.structure != "perfecthash") {
    j["bloomier"] = bloomier_space(spec);
    ok = ok && j["bloomier"]["ok"].get<bool>();
  }
  if (spec.structure != "bloomier") {
    j["perfecthash"] = perfecthash_space(spec);
    ok = ok && j["perfecthash"]["ok"].get<bool>();
  }
  j["ok"] = ok;
  return {ok, detail::render(j, spec.format)};
}

// ---------------------------------------------------------------- probe bench

RunOutcome run_probe_bench(const RunSpec& spec) {
  const std::uint64_t n = spec.n ? spec.n : 1u << 16;
  std::vector<GtStrategy> strategies;
  if (spec.strategy == "both")
    strategies = {GtStrategy::QueryHeavy, GtStrategy::UpdateHeavy};
  else
    strategies = {parse_strategy(spec.strategy)};
  const std::uint64_t trials = spec.trials.value_or(n <= 4096 ? 0 : 100000);
  const auto rows = gt_sweep(n, spec.B, strategies, trials, spec.seed);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.correct();

  if (spec.format == "csv") {
    std::ostringstream os;
    os << "B,strategy,Tu_max,Tq_max,correct\n";
    for (const auto& r : rows)
      os << r.B << ',' << to_string(r.strategy) << ',' << r.tu_max << ',' << r.tq_max << ','
         << (r.correct() ? "true" : "false") << '\n';
    return {ok, os.str()};
  }
  Json j;
  j["command"] = "probe-bench";
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = spec.seed;
  Json arr = Json::array();
  for (const auto& r : rows) {
    const GtScheme s(n, r.B, r.strategy);
    Json row;
    row["B"] = r.B;
    row["strategy"] = to_string(r.strategy);
    row["levels"] = r.levels;
    row["Tu_max"] = r.tu_max;
    row["Tq_max"] = r.tq_max;
    row["Tu_mean"] = r.tu_mean;
    row["Tq_mean"] = r.tq_mean;
    row["Tu_bound"] = s.write_bound();
    row["Tq_bound"] = s.read_bound();
    row["pairs"] = r.pairs;
    row["errors"] = r.errors;
    row["correct"] = r.correct();
    arr.push_back(row);
  }
  j["rows"] = arr;
  j["ok"] = ok;
  return {ok, j.dump(2) + "\n"};
}

// ---------------------------------------------------------------- fp rate

RunOutcome run_fp_rate(const RunSpec& spec) {
  BloomierConfig cfg;
  cfg.n = spec.n ? spec.n : 1u << 12;
  cfg.u_bits = spec.u_bits ? spec.u_bits : 32;
  cfg.r = spec.r;
  cfg.epsilon = spec.epsilon;
  const std::uint64_t samples = spec.trials.value_or(1'000'000);
  const double fp_bound = 1.5 * cfg.epsilon;
  const std::uint64_t vmask = cfg.r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cfg.r) - 1;

  Json j;
  for (unsigned attempt = 0; attempt <= kMaxReseeds; ++attempt) {
    cfg.seed = attempt_seed(spec.seed, attempt);
    BloomierFilter f(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::unordered_map<Key, std::uint64_t> stored;
    std::vector<Key> order;
    while (stored.size() < cfg.n) {
      const Key k = rng() & low_mask(cfg.u_bits);
      std::uint64_t v = rng() & vmask;
      if (v == 0) v = 1;
      if (stored.emplace(k, v).second) {
        f.insert(k, v);
        order.push_back(k);
      }
    }
    std::uint64_t stored_errors = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const Key k = order[i % order.size()];
      if (f.lookup(k) != stored[k]) ++stored_errors;
    }
    std::uint64_t fps = 0, probes = 0;
    while (probes < samples) {
      const Key k = rng() & low_mask(cfg.u_bits);
      if (stored.count(k)) continue;
      ++probes;
      if (f.lookup(k) != 0) ++fps;
    }
    const double rate = static_cast<double>(fps) / static_cast<double>(samples);
    const double lg_u_over_n = cfg.u_bits - std::log2(static_cast<double>(cfg.n));
    const double bound_bits =
        static_cast<double>(cfg.n) * (std::log2(lg_u_over_n) + std::log2(1.0 / cfg.epsilon) + cfg.r);
    j = Json();
    j["command"] = "fp-rate";
    j["n"] = cfg.n;
    j["u_bits"] = cfg.u_bits;
    j["r"] = cfg.r;
    j["epsilon"] = cfg.epsilon;
    j["samples"] = samples;
    j["stored_errors"] = stored_errors;
    j["false_positives"] = fps;
    j["fp_rate"] = rate;
    j["fp_bound"] = fp_bound;
    j["space_bits"] = f.space_bits();
    j["C_measured"] = static_cast<double>(f.space_bits()) / bound_bits;
    j["seed"] = spec.seed;
    j["seed_used"] = cfg.seed;
    j["attempts"] = attempt + 1;
    const bool ok = stored_errors == 0 && rate <= fp_bound;
    j["ok"] = ok;
    if (ok || stored_errors != 0) break;
  }
  const bool ok = j["ok"].get<bool>();
  return {ok, detail::render(j, spec.format)};
}

}  // namespace wordrange
