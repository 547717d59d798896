#pragma once

// Ordered list over S-bar: the elements of S interleaved with the open and
// close extreme points of every branching node of the binary trie.
//
// Entries are grouped into buckets of between ceil(sqrt w) and 2 ceil(sqrt w)
// consecutive entries and buckets into superbuckets of the same fan-out. A
// bucket keeps its entries in the next free physical slot and the list order
// as a permutation packed into one word, together with a summary word that
// has one bit per entry (set for elements of S). A superbucket has one
// summary bit per bucket (set if the bucket holds an element). Finding the
// nearest element of S from any entry then walks O(1) summary words, since no
// run of parentheses is longer than 2w.
//
// Handles are stable across splits and merges.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordrange/wordops.hpp"

namespace wordrange {

using NavHandle = std::uint32_t;
inline constexpr NavHandle kNoNav = 0xffffffffu;

enum class EntryKind : std::uint8_t { Element, Open, Close };

struct SBarEntry {
  EntryKind kind = EntryKind::Element;
  /// Totally ordered position: 4x+2 for an element x, 4lo+1 / 4hi+3 for the
  /// extreme points of a node spanning [lo, hi], shifted left by 8 bits with
  /// a depth tiebreak so that nested parentheses sharing an endpoint order
  /// outermost-open-first and innermost-close-first.
  u128 coord = 0;
  /// Element value, or the encoded name of the owning node.
  u128 owner = 0;

  static SBarEntry element(Key x);
  static SBarEntry open(Key lo, unsigned depth, u128 owner);
  static SBarEntry close(Key hi, unsigned depth, u128 owner);
};

class NavList {
 public:
  explicit NavList(unsigned w, bool check_order = false);

  NavHandle push_front(const SBarEntry& e);
  NavHandle push_back(const SBarEntry& e);
  NavHandle insert_before(NavHandle at, const SBarEntry& e);
  NavHandle insert_after(NavHandle at, const SBarEntry& e);
  /// Throws std::invalid_argument for a dead handle.
  void erase(NavHandle h);

  /// Nearest element at or before h (at or after for the right variant).
  NavHandle nearest_element_left(NavHandle h) const;
  NavHandle nearest_element_right(NavHandle h) const;

  NavHandle first() const;
  NavHandle last() const;
  NavHandle next(NavHandle h) const;
  NavHandle prev(NavHandle h) const;
  const SBarEntry& entry(NavHandle h) const;
  bool live(NavHandle h) const { return h < slots_.size() && slots_[h].live; }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  unsigned bucket_min() const { return bucket_min_; }
  unsigned bucket_max() const { return 2 * bucket_min_; }

  /// Summary words read by the last nearest_* call, and the maximum so far.
  unsigned last_examined() const { return last_examined_; }
  unsigned max_examined() const { return max_examined_; }
  std::uint64_t query_count() const { return queries_; }

  std::vector<NavHandle> traverse() const;
  /// Structural audit; returns a description of the first violation.
  std::optional<std::string> audit() const;

 private:
  struct Slot {
    SBarEntry e;
    std::uint32_t bucket = 0;
    std::uint8_t phys = 0;
    bool live = false;
  };
  struct Bucket {
    std::array<NavHandle, 16> phys{};
    std::uint64_t perm = 0;
    std::uint64_t summary = 0;
    std::uint32_t used = 0;
    std::uint32_t size = 0;
    std::uint32_t super = 0;
    bool live = false;
  };
  struct Super {
    std::vector<std::uint32_t> buckets;
    std::uint64_t summary = 0;
    std::uint32_t prev = kNoNav;
    std::uint32_t next = kNoNav;
    bool live = false;
  };

  unsigned perm_at(const Bucket& b, unsigned rank) const {
    return static_cast<unsigned>((b.perm >> (rank * perm_bits_)) & low_mask(perm_bits_));
  }
  NavHandle handle_at(std::uint32_t b, unsigned rank) const { return buckets_[b].phys[perm_at(buckets_[b], rank)]; }
  unsigned rank_of(NavHandle h) const;
  unsigned rank_in_super(std::uint32_t b) const;

  NavHandle new_slot(const SBarEntry& e);
  std::uint32_t new_bucket(std::uint32_t super);
  std::uint32_t new_super();
  void bucket_put(std::uint32_t b, unsigned rank, NavHandle h);
  void bucket_take(std::uint32_t b, unsigned rank);
  void rebuild_bucket(std::uint32_t b, const std::vector<NavHandle>& ordered);
  std::vector<NavHandle> bucket_handles(std::uint32_t b) const;
  void refresh_super(std::uint32_t s);
  void split_bucket(std::uint32_t b);
  void split_super(std::uint32_t s);
  void rebalance_after_erase(std::uint32_t b);
  void merge_supers(std::uint32_t left, std::uint32_t right);
  NavHandle insert_at(std::uint32_t b, unsigned rank, const SBarEntry& e);
  NavHandle first_of_bucket(std::uint32_t b) const { return handle_at(b, 0); }
  NavHandle last_of_bucket(std::uint32_t b) const { return handle_at(b, buckets_[b].size - 1); }
  void check_order(NavHandle h) const;

  unsigned w_;
  unsigned bucket_min_;
  unsigned perm_bits_;
  bool check_order_;
  std::vector<Slot> slots_;
  std::vector<NavHandle> free_slots_;
  std::vector<Bucket> buckets_;
  std::vector<std::uint32_t> free_buckets_;
  std::vector<Super> supers_;
  std::vector<std::uint32_t> free_supers_;
  std::uint32_t head_ = kNoNav;
  std::uint32_t tail_ = kNoNav;
  std::size_t size_ = 0;
  mutable unsigned last_examined_ = 0;
  mutable unsigned max_examined_ = 0;
  mutable std::uint64_t queries_ = 0;
};

}  // namespace wordrange
