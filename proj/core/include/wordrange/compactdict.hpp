#pragma once

// Small-key dictionaries with bit-level space accounting.
//
// PackedBits    fixed-width fields packed into 64-bit words.
// VacancyTracker  occupancy bits for j slots plus one summary bit per 64-slot
//                 block (set while the block still has a vacant slot); hands
//                 out the lowest vacant slot.
// SmallDict     capacity-j dictionary from s-bit keys to distinct slot values
//               in [0, j), stored as a sorted packed array.
// PackedTable   open-addressing (linear probing) map with packed keys of up to
//               128 bits and values of up to 64 bits.
// ValueStore    the key -> nonzero value interface shared by the exact store
//               and the Bloomier filter.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wordrange/wordops.hpp"

namespace wordrange {

class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void resize_bits(std::size_t bits) { words_.resize((bits + 63) / 64, 0); }
  void clear() { words_.clear(); }
  std::size_t capacity_bits() const { return words_.size() * 64; }

  std::uint64_t get(std::size_t pos, unsigned width) const {
    const std::size_t word = pos >> 6;
    const unsigned off = pos & 63;
    std::uint64_t v = words_[word] >> off;
    if (off + width > 64) v |= words_[word + 1] << (64 - off);
    return v & low_mask(width);
  }

  void set(std::size_t pos, unsigned width, std::uint64_t value) {
    const std::uint64_t mask = low_mask(width);
    value &= mask;
    const std::size_t word = pos >> 6;
    const unsigned off = pos & 63;
    words_[word] = (words_[word] & ~(mask << off)) | (value << off);
    if (off + width > 64) {
      const unsigned spill = off + width - 64;
      const std::uint64_t hi_mask = low_mask(spill);
      words_[word + 1] = (words_[word + 1] & ~hi_mask) | (value >> (64 - off));
    }
  }

  bool bit(std::size_t pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1u; }
  void set_bit(std::size_t pos, bool on) {
    const std::uint64_t m = std::uint64_t{1} << (pos & 63);
    if (on)
      words_[pos >> 6] |= m;
    else
      words_[pos >> 6] &= ~m;
  }
  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::size_t word_count() const { return words_.size(); }

 private:
  std::vector<std::uint64_t> words_;
};

class VacancyTracker {
 public:
  static constexpr unsigned kBlock = 64;

  VacancyTracker() = default;
  explicit VacancyTracker(std::size_t slots);

  /// Lowest vacant slot, now marked allocated. Throws std::length_error when full.
  std::size_t alloc();
  /// Throws std::logic_error if the slot is not allocated.
  void free(std::size_t slot);
  bool allocated(std::size_t slot) const { return occupied_.bit(slot); }

  std::size_t slots() const { return slots_; }
  std::size_t used() const { return used_; }
  bool summary_bit(std::size_t block) const { return (summary_[block >> 6] >> (block & 63)) & 1u; }
  std::size_t blocks() const { return (slots_ + kBlock - 1) / kBlock; }
  /// j occupancy bits plus one summary bit per block.
  std::size_t space_bits() const { return slots_ + blocks(); }

 private:
  std::size_t slots_ = 0;
  std::size_t used_ = 0;
  PackedBits occupied_;
  std::vector<std::uint64_t> summary_;
};

class SmallDict {
 public:
  SmallDict() = default;
  /// capacity clamped to >= 4 and key_bits to >= 4.
  SmallDict(std::size_t capacity, unsigned key_bits);

  /// Throws std::invalid_argument("duplicate") or std::length_error("bucket full").
  std::size_t insert(std::uint64_t key);
  std::optional<std::size_t> lookup(std::uint64_t key) const;
  /// Throws std::out_of_range when absent.
  void erase(std::uint64_t key);

  bool contains(std::uint64_t key) const { return lookup(key).has_value(); }
  bool full() const { return count_ == capacity_; }
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return capacity_; }
  unsigned key_bits() const { return key_bits_; }
  unsigned value_bits() const { return value_bits_; }

  /// Occupied fields plus vacancy tracker (once materialized) plus the count.
  std::size_t space_bits() const;
  /// Audit helper: the set of stored values equals the tracker's allocated set.
  bool consistent() const;

 private:
  std::size_t lower_bound(std::uint64_t key) const;
  std::uint64_t key_at(std::size_t i) const { return keys_.get(i * key_bits_, key_bits_); }
  std::uint64_t value_at(std::size_t i) const { return values_.get(i * value_bits_, value_bits_); }

  std::size_t capacity_ = 4;
  unsigned key_bits_ = 4;
  unsigned value_bits_ = 2;
  std::size_t count_ = 0;
  PackedBits keys_;
  PackedBits values_;
  std::optional<VacancyTracker> vacancy_;
};

class PackedTable {
 public:
  PackedTable() = default;
  PackedTable(unsigned key_bits, unsigned value_bits, std::uint64_t seed = 0);

  std::optional<std::uint64_t> find(u128 key) const;
  /// Returns false (no change) if the key is present.
  bool insert(u128 key, std::uint64_t value);
  /// Overwrites or inserts.
  void assign(u128 key, std::uint64_t value);
  bool erase(u128 key);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  unsigned key_bits() const { return key_bits_; }
  unsigned value_bits() const { return value_bits_; }
  /// Slots * (key + value + occupancy bit) plus a one-word header.
  std::size_t space_bits() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < capacity_; ++i)
      if (occupied_.bit(i)) fn(load_key(i), load_value(i));
  }

 private:
  std::size_t home(u128 key) const;
  u128 load_key(std::size_t slot) const;
  std::uint64_t load_value(std::size_t slot) const;
  void store(std::size_t slot, u128 key, std::uint64_t value);
  void grow();
  std::size_t slot_bits() const { return std::size_t{key_bits_} + value_bits_; }

  unsigned key_bits_ = 64;
  unsigned value_bits_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t capacity_ = 0;
  std::size_t size_ = 0;
  PackedBits slots_;
  PackedBits occupied_;
};

/// Key -> value map where 0 means "absent". Implementations may answer
/// arbitrarily for keys never inserted (the Bloomier filter does).
class ValueStore {
 public:
  virtual ~ValueStore() = default;
  /// Pre: key absent, value != 0.
  virtual void insert(u128 key, std::uint64_t value) = 0;
  /// Pre: key present.
  virtual void erase(u128 key) = 0;
  virtual std::uint64_t lookup(u128 key) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t space_bits() const = 0;
};

class ExactStore final : public ValueStore {
 public:
  ExactStore(unsigned key_bits, unsigned value_bits, std::uint64_t seed = 0)
      : table_(key_bits, value_bits, seed) {}

  void insert(u128 key, std::uint64_t value) override;
  void erase(u128 key) override;
  std::uint64_t lookup(u128 key) const override { return table_.find(key).value_or(0); }
  std::size_t size() const override { return table_.size(); }
  std::size_t space_bits() const override { return table_.space_bits(); }

  const PackedTable& table() const { return table_; }

 private:
  PackedTable table_;
};

}  // namespace wordrange
