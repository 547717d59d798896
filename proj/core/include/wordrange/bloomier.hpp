#pragma once

// Dynamic Bloomier filter: a sparse vector V over [u] with at most n nonzero
// r-bit entries, answered exactly on nonzero positions and with one-sided
// error at most epsilon elsewhere.
//
// One universal hash h: [u] -> [v], v = max(n lg(u/n), n/eps) rounded up to a
// power of two, splits the keys. Keys whose hash is unique go into a
// dictionary over hashed keys (lg v bits each); keys that hash onto an
// occupied value go into a dictionary over original keys. Lookups consult the
// original-key dictionary first.

#include <cstddef>
#include <cstdint>

#include "wordrange/compactdict.hpp"
#include "wordrange/hashing.hpp"

namespace wordrange {

struct BloomierConfig {
  std::size_t n = 1024;
  unsigned u_bits = 32;
  unsigned r = 8;
  double epsilon = 1.0 / 64;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when u < 2n, eps outside (0, 1], r outside
  /// [1, 64] or u_bits outside [1, 128].
  void validate() const;
  /// lg v, the width of hashed keys.
  unsigned hash_bits() const;
};

class BloomierFilter final : public ValueStore {
 public:
  explicit BloomierFilter(const BloomierConfig& cfg);

  /// Pre: V[x] == 0. Throws std::invalid_argument("use delete") for a == 0
  /// and std::length_error when n entries are live.
  void insert(u128 x, std::uint64_t a) override;
  /// Pre: V[x] != 0.
  void erase(u128 x) override;
  std::uint64_t lookup(u128 x) const override;
  std::size_t size() const override { return live_; }
  std::size_t space_bits() const override;

  const BloomierConfig& config() const { return cfg_; }
  unsigned hash_bits() const { return hash_.out_bits(); }
  std::uint64_t hash(u128 x) const { return hash_(x); }
  /// |S'|: keys held under their original name.
  std::size_t spilled() const { return exact_.size(); }
  std::size_t hashed() const { return by_hash_.size(); }
  /// Audit helper: every stored key lives in exactly one dictionary.
  bool holds_under_original(u128 x) const { return exact_.find(x).has_value(); }

 private:
  BloomierConfig cfg_;
  UniversalHash hash_;
  PackedTable exact_;
  PackedTable by_hash_;
  std::size_t live_ = 0;
};

}  // namespace wordrange
