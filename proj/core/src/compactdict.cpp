#include "wordrange/compactdict.hpp"

#include <algorithm>
#include <stdexcept>

namespace wordrange {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

// ---------------------------------------------------------------- Vacancy

VacancyTracker::VacancyTracker(std::size_t slots)
    : slots_(slots), occupied_(slots), summary_((blocks() + 63) / 64, 0) {
  for (std::size_t b = 0; b < blocks(); ++b) summary_[b >> 6] |= std::uint64_t{1} << (b & 63);
}

std::size_t VacancyTracker::alloc() {
  for (std::size_t sw = 0; sw < summary_.size(); ++sw) {
    if (summary_[sw] == 0) continue;
    const std::size_t block = sw * 64 + lsb(summary_[sw]);
    const std::uint64_t free_bits = ~occupied_.word(block);
    const std::size_t slot = block * kBlock + lsb(free_bits);
    occupied_.set_bit(slot, true);
    ++used_;
    const std::size_t block_end = std::min(slots_, (block + 1) * kBlock);
    const std::uint64_t full = low_mask(static_cast<unsigned>(block_end - block * kBlock));
    if ((occupied_.word(block) & full) == full) summary_[sw] &= ~(std::uint64_t{1} << (block & 63));
    return slot;
  }
  throw std::length_error("no vacant slot");
}

void VacancyTracker::free(std::size_t slot) {
  if (slot >= slots_ || !occupied_.bit(slot)) throw std::logic_error("freeing a vacant slot");
  occupied_.set_bit(slot, false);
  --used_;
  const std::size_t block = slot / kBlock;
  summary_[block >> 6] |= std::uint64_t{1} << (block & 63);
}

// ---------------------------------------------------------------- SmallDict

SmallDict::SmallDict(std::size_t capacity, unsigned key_bits)
    : capacity_(std::max<std::size_t>(capacity, 4)),
      key_bits_(std::max(key_bits, 4u)),
      value_bits_(ceil_log2(capacity_)) {
  if (key_bits_ > 64) throw std::invalid_argument("small dictionary keys are at most 64 bits");
}

std::size_t SmallDict::lower_bound(std::uint64_t key) const {
  std::size_t lo = 0, hi = count_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (key_at(mid) < key)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

std::size_t SmallDict::insert(std::uint64_t key) {
  key &= low_mask(key_bits_);
  const std::size_t pos = lower_bound(key);
  if (pos < count_ && key_at(pos) == key) throw std::invalid_argument("duplicate");
  if (full()) throw std::length_error("bucket full");
  if (!vacancy_) vacancy_.emplace(capacity_);
  const std::size_t slot = vacancy_->alloc();
  keys_.resize_bits((count_ + 1) * key_bits_);
  values_.resize_bits((count_ + 1) * value_bits_);
  for (std::size_t i = count_; i > pos; --i) {
    keys_.set(i * key_bits_, key_bits_, key_at(i - 1));
    values_.set(i * value_bits_, value_bits_, value_at(i - 1));
  }
  keys_.set(pos * key_bits_, key_bits_, key);
  values_.set(pos * value_bits_, value_bits_, slot);
  ++count_;
  return slot;
}

std::optional<std::size_t> SmallDict::lookup(std::uint64_t key) const {
  key &= low_mask(key_bits_);
  const std::size_t pos = lower_bound(key);
  if (pos < count_ && key_at(pos) == key) return static_cast<std::size_t>(value_at(pos));
  return std::nullopt;
}

void SmallDict::erase(std::uint64_t key) {
  key &= low_mask(key_bits_);
  const std::size_t pos = lower_bound(key);
  if (pos >= count_ || key_at(pos) != key) throw std::out_of_range("key not in dictionary");
  vacancy_->free(value_at(pos));
  for (std::size_t i = pos + 1; i < count_; ++i) {
    keys_.set((i - 1) * key_bits_, key_bits_, key_at(i));
    values_.set((i - 1) * value_bits_, value_bits_, value_at(i));
  }
  --count_;
  keys_.resize_bits(count_ * key_bits_);
  values_.resize_bits(count_ * value_bits_);
}

std::size_t SmallDict::space_bits() const {
  std::size_t bits = count_ * (std::size_t{key_bits_} + value_bits_) + bits_for(capacity_);
  if (vacancy_) bits += vacancy_->space_bits();
  return bits;
}

bool SmallDict::consistent() const {
  if (!vacancy_) return count_ == 0;
  if (vacancy_->used() != count_) return false;
  std::vector<bool> seen(capacity_, false);
  for (std::size_t i = 0; i < count_; ++i) {
    const auto v = value_at(i);
    if (v >= capacity_ || seen[v] || !vacancy_->allocated(v)) return false;
    seen[v] = true;
    if (i > 0 && key_at(i - 1) >= key_at(i)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- PackedTable

PackedTable::PackedTable(unsigned key_bits, unsigned value_bits, std::uint64_t seed)
    : key_bits_(key_bits), value_bits_(value_bits), seed_(seed) {
  if (key_bits == 0 || key_bits > 128) throw std::invalid_argument("table keys must be 1..128 bits");
  if (value_bits > 64) throw std::invalid_argument("table values are at most 64 bits");
}

std::size_t PackedTable::home(u128 key) const {
  const auto lo = static_cast<std::uint64_t>(key);
  const auto hi = static_cast<std::uint64_t>(key >> 64);
  return mix64(lo ^ mix64(hi ^ seed_)) & (capacity_ - 1);
}

u128 PackedTable::load_key(std::size_t slot) const {
  const std::size_t base = slot * slot_bits();
  if (key_bits_ <= 64) return slots_.get(base, key_bits_);
  const u128 lo = slots_.get(base, 64);
  const u128 hi = slots_.get(base + 64, key_bits_ - 64);
  return (hi << 64) | lo;
}

std::uint64_t PackedTable::load_value(std::size_t slot) const {
  if (value_bits_ == 0) return 0;
  return slots_.get(slot * slot_bits() + key_bits_, value_bits_);
}

void PackedTable::store(std::size_t slot, u128 key, std::uint64_t value) {
  const std::size_t base = slot * slot_bits();
  if (key_bits_ <= 64) {
    slots_.set(base, key_bits_, static_cast<std::uint64_t>(key));
  } else {
    slots_.set(base, 64, static_cast<std::uint64_t>(key));
    slots_.set(base + 64, key_bits_ - 64, static_cast<std::uint64_t>(key >> 64));
  }
  if (value_bits_ > 0) slots_.set(base + key_bits_, value_bits_, value);
  occupied_.set_bit(slot, true);
}

std::optional<std::uint64_t> PackedTable::find(u128 key) const {
  if (capacity_ == 0) return std::nullopt;
  for (std::size_t i = home(key);; i = (i + 1) & (capacity_ - 1)) {
    if (!occupied_.bit(i)) return std::nullopt;
    if (load_key(i) == key) return load_value(i);
  }
}

void PackedTable::grow() {
  const std::size_t old_cap = capacity_;
  PackedBits old_slots = std::move(slots_);
  PackedBits old_occ = std::move(occupied_);
  capacity_ = old_cap == 0 ? 8 : old_cap * 2;
  slots_ = PackedBits(capacity_ * slot_bits());
  occupied_ = PackedBits(capacity_);
  const std::size_t width = slot_bits();
  for (std::size_t s = 0; s < old_cap; ++s) {
    if (!old_occ.bit(s)) continue;
    u128 key;
    if (key_bits_ <= 64) {
      key = old_slots.get(s * width, key_bits_);
    } else {
      key = (static_cast<u128>(old_slots.get(s * width + 64, key_bits_ - 64)) << 64) |
            old_slots.get(s * width, 64);
    }
    const std::uint64_t value = value_bits_ ? old_slots.get(s * width + key_bits_, value_bits_) : 0;
    std::size_t i = home(key);
    while (occupied_.bit(i)) i = (i + 1) & (capacity_ - 1);
    store(i, key, value);
  }
}

bool PackedTable::insert(u128 key, std::uint64_t value) {
  if (key_bits_ < 128 && (key >> key_bits_) != 0) throw std::invalid_argument("key wider than table");
  if (find(key)) return false;
  if (2 * (size_ + 1) > capacity_) grow();
  std::size_t i = home(key);
  while (occupied_.bit(i)) i = (i + 1) & (capacity_ - 1);
  store(i, key, value);
  ++size_;
  return true;
}

void PackedTable::assign(u128 key, std::uint64_t value) {
  if (capacity_ != 0) {
    for (std::size_t i = home(key);; i = (i + 1) & (capacity_ - 1)) {
      if (!occupied_.bit(i)) break;
      if (load_key(i) == key) {
        store(i, key, value);
        return;
      }
    }
  }
  insert(key, value);
}

bool PackedTable::erase(u128 key) {
  if (capacity_ == 0) return false;
  const std::size_t mask = capacity_ - 1;
  std::size_t i = home(key);
  for (;; i = (i + 1) & mask) {
    if (!occupied_.bit(i)) return false;
    if (load_key(i) == key) break;
  }
  // Backward-shift deletion keeps every probe run contiguous.
  std::size_t hole = i;
  for (std::size_t j = (hole + 1) & mask; occupied_.bit(j); j = (j + 1) & mask) {
    const u128 k = load_key(j);
    const std::size_t h = home(k);
    const bool movable = (hole <= j) ? (h <= hole || h > j) : (h <= hole && h > j);
    if (movable) {
      store(hole, k, load_value(j));
      occupied_.set_bit(j, false);
      hole = j;
    }
  }
  occupied_.set_bit(hole, false);
  --size_;
  return true;
}

std::size_t PackedTable::space_bits() const { return capacity_ * (slot_bits() + 1) + 64; }

// ---------------------------------------------------------------- ExactStore

void ExactStore::insert(u128 key, std::uint64_t value) {
  if (value == 0) throw std::invalid_argument("value 0 is reserved for absent keys");
  if (!table_.insert(key, value)) throw std::logic_error("duplicate key in exact store");
}

void ExactStore::erase(u128 key) {
  if (!table_.erase(key)) throw std::logic_error("erasing an absent key from exact store");
}

}  // namespace wordrange
