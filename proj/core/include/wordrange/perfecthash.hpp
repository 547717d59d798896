#pragma once

// Data-stream dynamic perfect hashing.
//
// Keys of S (|S| <= n) from [2^u_bits] are mapped one-to-one into
// [0, r*j + spill_capacity). A universal hash rho shrinks keys to v bits, a
// tabulation hash phi picks one of r buckets and a per-bucket universal hash
// h_i shrinks the reduced key to s bits. Bucket i hands out slots in
// [(i-1)*j, i*j). A key goes to the spill dictionary (indexed by the original
// key) when its bucket is full or its s-bit name is already taken in that
// bucket. The structure never stores original keys outside the spill
// dictionary, so inserting a key that is already live is a caller error that
// can only be detected when that key was spilled.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wordrange/compactdict.hpp"
#include "wordrange/hashing.hpp"

namespace wordrange {

struct PerfectHashConfig {
  std::size_t n = 1 << 14;
  unsigned u_bits = 64;
  /// Exponent constant in s = ceil((6 + 2c) lg lg u).
  unsigned c = 0;
  /// Spill capacity = kappa * ceil(n / lg u).
  unsigned kappa = 8;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Derived widths and sizes, with clamps for small n applied.
struct PerfectHashParams {
  unsigned v_bits = 0;
  std::uint64_t buckets = 0;  // r
  unsigned s_bits = 0;
  std::size_t bucket_capacity = 0;  // j
  std::size_t spill_capacity = 0;

  static PerfectHashParams derive(const PerfectHashConfig& cfg);
  std::uint64_t range() const { return buckets * bucket_capacity + spill_capacity; }
};

class RebuildRequired : public std::runtime_error {
 public:
  RebuildRequired() : std::runtime_error("rebuild required: spill dictionary is full") {}
};

class PerfectHash {
 public:
  struct InsertResult {
    std::uint64_t value = 0;
    bool inserted = false;
    bool spilled = false;
  };

  explicit PerfectHash(const PerfectHashConfig& cfg);

  /// Throws RebuildRequired when the key would spill into a full spill
  /// dictionary and std::length_error when n keys are live.
  InsertResult insert(Key k);
  /// Returns false when the key is known not to be live.
  bool erase(Key k);
  /// Stable value of a live key; some in-range value for other keys.
  std::uint64_t eval(Key k) const;

  /// Reseed and reinsert `live` (the caller's record of live keys). Values
  /// assigned before the rebuild are not preserved.
  void rebuild(std::uint64_t seed, std::span<const Key> live);

  std::size_t size() const { return live_; }
  std::size_t spill_size() const { return spill_.size(); }
  std::size_t spill_peak() const { return spill_peak_; }
  std::uint64_t range() const { return params_.range(); }
  const PerfectHashParams& params() const { return params_; }
  const PerfectHashConfig& config() const { return cfg_; }
  std::size_t space_bits() const;
  /// Audit helper: every bucket's slots and values agree.
  bool buckets_consistent() const;

 private:
  std::uint64_t reduce(Key k) const { return rho_(k); }
  std::uint64_t spill_alloc();
  void reset(std::uint64_t seed);

  PerfectHashConfig cfg_;
  PerfectHashParams params_;
  UniversalHash rho_;
  BucketHashFamily family_;
  std::vector<SmallDict> buckets_;
  PackedTable spill_;
  std::vector<std::uint32_t> spill_free_;
  std::uint64_t spill_high_water_ = 0;
  std::size_t spill_peak_ = 0;
  std::size_t live_ = 0;
};

}  // namespace wordrange
