#pragma once

// Reproducible experiment runs behind the command-line tool. Each command
// takes a RunSpec, is fully determined by it (including the seed) and
// renders a JSON object or CSV table. Wall-clock time is deliberately not
// part of the rendered output.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordrange/rangereport.hpp"

namespace wordrange {

struct RunSpec {
  std::string command;  // oracle-fuzz, space-report, probe-bench, fp-rate, perfect-hash-demo
  unsigned w = 64;
  std::vector<std::uint64_t> B{2};
  Variant variant = Variant::Core;
  IndexBackend backend = IndexBackend::Exact;
  std::uint64_t n = 0;   // 0: command default
  unsigned u_bits = 0;   // 0: command default
  unsigned r = 8;
  double epsilon = 1.0 / 64;
  std::uint64_t ops = 0;     // 0: command default
  // oracle-fuzz: seeds (1); fp-rate: samples (10^6); probe-bench: random pairs,
  // 0 = all pairs (all pairs up to n = 4096, else 10^5)
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 1;
  bool audit = false;
  std::string strategy = "both";    // probe-bench
  std::string structure = "both";   // space-report
  std::string format = "json";

  /// Throws std::invalid_argument for an invalid combination.
  void validate() const;
};

struct RunOutcome {
  bool ok = false;
  std::string output;
};

/// Throws std::invalid_argument for an invalid RunSpec.
RunOutcome run_command(const RunSpec& spec);

RunOutcome run_oracle_fuzz(const RunSpec& spec);
RunOutcome run_space_report(const RunSpec& spec);
RunOutcome run_probe_bench(const RunSpec& spec);
RunOutcome run_fp_rate(const RunSpec& spec);
RunOutcome run_perfect_hash_demo(const RunSpec& spec);

/// Seed of the i-th attempt under the reseed-retry policy (attempt 0 is the
/// requested seed itself).
std::uint64_t attempt_seed(std::uint64_t seed, unsigned attempt);
inline constexpr unsigned kMaxReseeds = 3;

}  // namespace wordrange
