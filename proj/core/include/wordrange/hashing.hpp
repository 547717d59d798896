#pragma once

// Seeded hash families.
//
// UniversalHash is multiply-shift: for inputs of at most 64 bits it is the
// classic h(x) = (a*x mod 2^64) >> (64 - out) with a random odd multiplier
// (collision probability <= 2^(1-out)); wider inputs are split into two
// 64-bit halves and hashed with vector multiply-add-shift over 128-bit
// arithmetic, which is strongly universal for out <= 64.
//
// TabulationHash is simple tabulation over 4-bit characters. It stands in
// for a highly independent family wherever only concentration of bucket
// loads matters.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "wordrange/wordops.hpp"

namespace wordrange {

/// Deterministic 64-bit stream for seeding (std::mt19937_64 raw output).
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed);
  std::uint64_t next();
  u128 next128();

 private:
  std::mt19937_64 engine_;
};

class UniversalHash {
 public:
  UniversalHash() = default;
  /// Requires 1 <= out_bits <= min(in_bits, 64) and in_bits <= 128.
  UniversalHash(std::uint64_t seed, unsigned in_bits, unsigned out_bits);

  std::uint64_t operator()(u128 x) const {
    if (in_bits_ <= 64) {
      const std::uint64_t prod = mul_ * static_cast<std::uint64_t>(x);
      return out_bits_ == 64 ? prod : prod >> (64 - out_bits_);
    }
    const u128 lo = static_cast<std::uint64_t>(x);
    const u128 hi = static_cast<std::uint64_t>(x >> 64);
    const u128 acc = a0_ * lo + a1_ * hi + b_;
    return static_cast<std::uint64_t>(acc >> (128 - out_bits_));
  }

  unsigned in_bits() const { return in_bits_; }
  unsigned out_bits() const { return out_bits_; }
  /// Bits needed to store the function's seed material.
  std::size_t representation_bits() const { return in_bits_ <= 64 ? 64 : 3 * 128; }

 private:
  unsigned in_bits_ = 64;
  unsigned out_bits_ = 64;
  std::uint64_t mul_ = 1;
  u128 a0_ = 0, a1_ = 0, b_ = 0;
};

class TabulationHash {
 public:
  static constexpr unsigned kCharBits = 4;

  TabulationHash() = default;
  TabulationHash(std::uint64_t seed, unsigned in_bits);

  std::uint32_t operator()(std::uint64_t x) const {
    std::uint32_t h = 0;
    for (unsigned c = 0; c < chars_; ++c, x >>= kCharBits)
      h ^= table_[(c << kCharBits) | (x & ((1u << kCharBits) - 1))];
    return h;
  }

  std::size_t representation_bits() const { return table_.size() * 32; }

 private:
  unsigned chars_ = 0;
  std::vector<std::uint32_t> table_;
};

/// Bucket selector phi: {0,1}^v -> {1..r} plus per-bucket hashes
/// h_1..h_r: {0,1}^v -> {0,1}^s.
class BucketHashFamily {
 public:
  BucketHashFamily() = default;
  BucketHashFamily(std::uint64_t seed, unsigned v_bits, std::uint64_t buckets, unsigned s_bits);

  /// 1-based bucket index.
  std::uint64_t bucket(std::uint64_t reduced) const {
    return ((static_cast<std::uint64_t>(phi_(reduced)) * buckets_) >> 32) + 1;
  }
  std::uint64_t key_hash(std::uint64_t bucket_index, std::uint64_t reduced) const {
    return per_bucket_[bucket_index - 1](reduced);
  }

  std::uint64_t buckets() const { return buckets_; }
  unsigned s_bits() const { return s_bits_; }
  std::size_t representation_bits() const;

 private:
  std::uint64_t buckets_ = 1;
  unsigned s_bits_ = 1;
  TabulationHash phi_;
  std::vector<UniversalHash> per_bucket_;
};

}  // namespace wordrange
