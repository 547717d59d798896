#include "wordrange/navlist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace wordrange {

namespace {

std::uint64_t insert_field(std::uint64_t word, unsigned rank, unsigned width, std::uint64_t value) {
  const unsigned at = rank * width;
  const u128 wide = word;
  const u128 low = wide & ((u128{1} << at) - 1);
  const u128 high = wide >> at;
  return static_cast<std::uint64_t>(low | (u128{value} << at) | (high << (at + width)));
}

std::uint64_t remove_field(std::uint64_t word, unsigned rank, unsigned width) {
  const unsigned at = rank * width;
  const u128 wide = word;
  const u128 low = wide & ((u128{1} << at) - 1);
  const u128 high = wide >> (at + width);
  return static_cast<std::uint64_t>(low | (high << at));
}

}  // namespace

SBarEntry SBarEntry::element(Key x) {
  return {EntryKind::Element, (u128{x} * 4 + 2) << 8, x};
}

SBarEntry SBarEntry::open(Key lo, unsigned depth, u128 owner) {
  return {EntryKind::Open, ((u128{lo} * 4 + 1) << 8) | depth, owner};
}

SBarEntry SBarEntry::close(Key hi, unsigned depth, u128 owner) {
  return {EntryKind::Close, ((u128{hi} * 4 + 3) << 8) | (255u - depth), owner};
}

NavList::NavList(unsigned w, bool check_order)
    : w_(w),
      bucket_min_(static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(w))))),
      perm_bits_(ceil_log2(2 * bucket_min_)),
      check_order_(check_order) {
  if (2 * bucket_min_ * perm_bits_ > 64 || 2 * bucket_min_ > 16)
    throw std::invalid_argument("bucket permutation does not fit in a word");
}

// ---------------------------------------------------------------- storage

NavHandle NavList::new_slot(const SBarEntry& e) {
  NavHandle h;
  if (!free_slots_.empty()) {
    h = free_slots_.back();
    free_slots_.pop_back();
  } else {
    h = static_cast<NavHandle>(slots_.size());
    slots_.emplace_back();
  }
  slots_[h] = Slot{e, 0, 0, true};
  return h;
}

std::uint32_t NavList::new_bucket(std::uint32_t super) {
  std::uint32_t b;
  if (!free_buckets_.empty()) {
    b = free_buckets_.back();
    free_buckets_.pop_back();
  } else {
    b = static_cast<std::uint32_t>(buckets_.size());
    buckets_.emplace_back();
  }
  buckets_[b] = Bucket{};
  buckets_[b].super = super;
  buckets_[b].live = true;
  return b;
}

std::uint32_t NavList::new_super() {
  std::uint32_t s;
  if (!free_supers_.empty()) {
    s = free_supers_.back();
    free_supers_.pop_back();
  } else {
    s = static_cast<std::uint32_t>(supers_.size());
    supers_.emplace_back();
  }
  supers_[s] = Super{};
  supers_[s].live = true;
  return s;
}

unsigned NavList::rank_of(NavHandle h) const {
  const Slot& slot = slots_[h];
  const Bucket& b = buckets_[slot.bucket];
  for (unsigned r = 0; r < b.size; ++r)
    if (perm_at(b, r) == slot.phys) return r;
  throw std::logic_error("navlist slot missing from its bucket");
}

unsigned NavList::rank_in_super(std::uint32_t b) const {
  const auto& v = supers_[buckets_[b].super].buckets;
  return static_cast<unsigned>(std::find(v.begin(), v.end(), b) - v.begin());
}

void NavList::bucket_put(std::uint32_t bi, unsigned rank, NavHandle h) {
  Bucket& b = buckets_[bi];
  const unsigned p = lsb(~std::uint64_t{b.used});
  b.used |= 1u << p;
  b.phys[p] = h;
  b.perm = insert_field(b.perm, rank, perm_bits_, p);
  b.summary = insert_field(b.summary, rank, 1, slots_[h].e.kind == EntryKind::Element ? 1 : 0);
  ++b.size;
  slots_[h].bucket = bi;
  slots_[h].phys = static_cast<std::uint8_t>(p);
}

void NavList::bucket_take(std::uint32_t bi, unsigned rank) {
  Bucket& b = buckets_[bi];
  const unsigned p = perm_at(b, rank);
  b.used &= ~(1u << p);
  b.perm = remove_field(b.perm, rank, perm_bits_);
  b.summary = remove_field(b.summary, rank, 1);
  --b.size;
}

std::vector<NavHandle> NavList::bucket_handles(std::uint32_t b) const {
  std::vector<NavHandle> out(buckets_[b].size);
  for (unsigned r = 0; r < out.size(); ++r) out[r] = handle_at(b, r);
  return out;
}

void NavList::rebuild_bucket(std::uint32_t bi, const std::vector<NavHandle>& ordered) {
  Bucket& b = buckets_[bi];
  b.used = 0;
  b.perm = 0;
  b.summary = 0;
  b.size = 0;
  for (unsigned r = 0; r < ordered.size(); ++r) bucket_put(bi, r, ordered[r]);
}

void NavList::refresh_super(std::uint32_t s) {
  Super& sup = supers_[s];
  sup.summary = 0;
  for (unsigned i = 0; i < sup.buckets.size(); ++i) {
    buckets_[sup.buckets[i]].super = s;
    if (buckets_[sup.buckets[i]].summary != 0) sup.summary |= std::uint64_t{1} << i;
  }
}

// ---------------------------------------------------------------- splits

void NavList::split_bucket(std::uint32_t b) {
  const auto all = bucket_handles(b);
  const std::size_t half = all.size() / 2;
  const std::uint32_t s = buckets_[b].super;
  const std::uint32_t nb = new_bucket(s);
  rebuild_bucket(b, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half)});
  rebuild_bucket(nb, {all.begin() + static_cast<std::ptrdiff_t>(half), all.end()});
  auto& v = supers_[s].buckets;
  v.insert(v.begin() + rank_in_super(b) + 1, nb);
  refresh_super(s);
  if (v.size() > bucket_max()) split_super(s);
}

void NavList::split_super(std::uint32_t s) {
  const std::uint32_t ns = new_super();
  Super& sup = supers_[s];
  const std::size_t half = sup.buckets.size() / 2;
  supers_[ns].buckets.assign(sup.buckets.begin() + static_cast<std::ptrdiff_t>(half), sup.buckets.end());
  sup.buckets.resize(half);
  supers_[ns].prev = s;
  supers_[ns].next = sup.next;
  if (sup.next != kNoNav)
    supers_[sup.next].prev = ns;
  else
    tail_ = ns;
  sup.next = ns;
  refresh_super(s);
  refresh_super(ns);
}

NavHandle NavList::insert_at(std::uint32_t b, unsigned rank, const SBarEntry& e) {
  if (buckets_[b].size == bucket_max()) {
    split_bucket(b);
    const unsigned left_size = buckets_[b].size;
    if (rank > left_size) {
      const auto& v = supers_[buckets_[b].super].buckets;
      const std::uint32_t right = v[rank_in_super(b) + 1];
      rank -= left_size;
      b = right;
    }
  }
  const NavHandle h = new_slot(e);
  bucket_put(b, rank, h);
  ++size_;
  refresh_super(buckets_[b].super);
  if (check_order_) check_order(h);
  return h;
}

void NavList::check_order(NavHandle h) const {
  const NavHandle p = prev(h);
  const NavHandle n = next(h);
  const u128 c = slots_[h].e.coord;
  if ((p != kNoNav && slots_[p].e.coord >= c) || (n != kNoNav && slots_[n].e.coord <= c))
    throw std::logic_error("navlist ordering violation");
}

NavHandle NavList::push_front(const SBarEntry& e) {
  if (empty()) return push_back(e);
  return insert_at(supers_[head_].buckets.front(), 0, e);
}

NavHandle NavList::push_back(const SBarEntry& e) {
  if (empty()) {
    const std::uint32_t s = new_super();
    head_ = tail_ = s;
    const std::uint32_t b = new_bucket(s);
    supers_[s].buckets.push_back(b);
    return insert_at(b, 0, e);
  }
  const std::uint32_t b = supers_[tail_].buckets.back();
  return insert_at(b, buckets_[b].size, e);
}

NavHandle NavList::insert_before(NavHandle at, const SBarEntry& e) {
  if (!live(at)) throw std::invalid_argument("invalid navlist handle");
  return insert_at(slots_[at].bucket, rank_of(at), e);
}

NavHandle NavList::insert_after(NavHandle at, const SBarEntry& e) {
  if (!live(at)) throw std::invalid_argument("invalid navlist handle");
  return insert_at(slots_[at].bucket, rank_of(at) + 1, e);
}

// ---------------------------------------------------------------- erase

void NavList::erase(NavHandle h) {
  if (!live(h)) throw std::invalid_argument("invalid navlist handle");
  const std::uint32_t b = slots_[h].bucket;
  bucket_take(b, rank_of(h));
  slots_[h].live = false;
  free_slots_.push_back(h);
  --size_;
  rebalance_after_erase(b);
}

void NavList::merge_supers(std::uint32_t left, std::uint32_t right) {
  Super& l = supers_[left];
  Super& r = supers_[right];
  l.buckets.insert(l.buckets.end(), r.buckets.begin(), r.buckets.end());
  l.next = r.next;
  if (r.next != kNoNav)
    supers_[r.next].prev = left;
  else
    tail_ = left;
  r.live = false;
  r.buckets.clear();
  free_supers_.push_back(right);
  refresh_super(left);
  if (l.buckets.size() > bucket_max()) split_super(left);
}

void NavList::rebalance_after_erase(std::uint32_t b) {
  const std::uint32_t s = buckets_[b].super;
  Super& sup = supers_[s];
  if (buckets_[b].size == 0) {
    sup.buckets.erase(sup.buckets.begin() + rank_in_super(b));
    buckets_[b].live = false;
    free_buckets_.push_back(b);
    if (sup.buckets.empty()) {
      if (sup.prev != kNoNav)
        supers_[sup.prev].next = sup.next;
      else
        head_ = sup.next;
      if (sup.next != kNoNav)
        supers_[sup.next].prev = sup.prev;
      else
        tail_ = sup.prev;
      sup.live = false;
      free_supers_.push_back(s);
      return;
    }
  } else if (buckets_[b].size < bucket_min_ && sup.buckets.size() > 1) {
    const unsigned r = rank_in_super(b);
    const unsigned left_rank = r + 1 < sup.buckets.size() ? r : r - 1;
    const std::uint32_t left = sup.buckets[left_rank];
    const std::uint32_t right = sup.buckets[left_rank + 1];
    auto all = bucket_handles(left);
    const auto tail = bucket_handles(right);
    all.insert(all.end(), tail.begin(), tail.end());
    if (all.size() <= bucket_max()) {
      rebuild_bucket(left, all);
      sup.buckets.erase(sup.buckets.begin() + left_rank + 1);
      buckets_[right].live = false;
      free_buckets_.push_back(right);
    } else {
      const std::size_t half = all.size() / 2;
      rebuild_bucket(left, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half)});
      rebuild_bucket(right, {all.begin() + static_cast<std::ptrdiff_t>(half), all.end()});
    }
  }
  refresh_super(s);
  if (supers_[s].buckets.size() < bucket_min_) {
    if (supers_[s].next != kNoNav)
      merge_supers(s, supers_[s].next);
    else if (supers_[s].prev != kNoNav)
      merge_supers(supers_[s].prev, s);
  }
}

// ---------------------------------------------------------------- traversal

NavHandle NavList::first() const {
  if (empty()) return kNoNav;
  return first_of_bucket(supers_[head_].buckets.front());
}

NavHandle NavList::last() const {
  if (empty()) return kNoNav;
  return last_of_bucket(supers_[tail_].buckets.back());
}

NavHandle NavList::next(NavHandle h) const {
  const std::uint32_t b = slots_[h].bucket;
  const unsigned r = rank_of(h);
  if (r + 1 < buckets_[b].size) return handle_at(b, r + 1);
  const Super& sup = supers_[buckets_[b].super];
  const unsigned bi = rank_in_super(b);
  if (bi + 1 < sup.buckets.size()) return first_of_bucket(sup.buckets[bi + 1]);
  if (sup.next == kNoNav) return kNoNav;
  return first_of_bucket(supers_[sup.next].buckets.front());
}

NavHandle NavList::prev(NavHandle h) const {
  const std::uint32_t b = slots_[h].bucket;
  const unsigned r = rank_of(h);
  if (r > 0) return handle_at(b, r - 1);
  const Super& sup = supers_[buckets_[b].super];
  const unsigned bi = rank_in_super(b);
  if (bi > 0) return last_of_bucket(sup.buckets[bi - 1]);
  if (sup.prev == kNoNav) return kNoNav;
  return last_of_bucket(supers_[sup.prev].buckets.back());
}

const SBarEntry& NavList::entry(NavHandle h) const {
  if (!live(h)) throw std::invalid_argument("invalid navlist handle");
  return slots_[h].e;
}

NavHandle NavList::nearest_element_left(NavHandle h) const {
  if (!live(h)) throw std::invalid_argument("invalid navlist handle");
  ++queries_;
  unsigned examined = 1;
  auto finish = [&](NavHandle out) {
    last_examined_ = examined;
    max_examined_ = std::max(max_examined_, examined);
    return out;
  };
  const std::uint32_t b = slots_[h].bucket;
  const unsigned r = rank_of(h);
  const std::uint64_t here = buckets_[b].summary & low_mask(r + 1);
  if (here) return finish(handle_at(b, msb(here)));

  std::uint32_t s = buckets_[b].super;
  ++examined;
  const std::uint64_t before = supers_[s].summary & low_mask(rank_in_super(b));
  if (before) {
    const std::uint32_t nb = supers_[s].buckets[msb(before)];
    ++examined;
    return finish(handle_at(nb, msb(buckets_[nb].summary)));
  }
  for (s = supers_[s].prev; s != kNoNav; s = supers_[s].prev) {
    ++examined;
    if (supers_[s].summary == 0) continue;
    const std::uint32_t nb = supers_[s].buckets[msb(supers_[s].summary)];
    ++examined;
    return finish(handle_at(nb, msb(buckets_[nb].summary)));
  }
  return finish(kNoNav);
}

NavHandle NavList::nearest_element_right(NavHandle h) const {
  if (!live(h)) throw std::invalid_argument("invalid navlist handle");
  ++queries_;
  unsigned examined = 1;
  auto finish = [&](NavHandle out) {
    last_examined_ = examined;
    max_examined_ = std::max(max_examined_, examined);
    return out;
  };
  const std::uint32_t b = slots_[h].bucket;
  const unsigned r = rank_of(h);
  const std::uint64_t here = buckets_[b].summary & ~low_mask(r);
  if (here) return finish(handle_at(b, lsb(here)));

  std::uint32_t s = buckets_[b].super;
  ++examined;
  const std::uint64_t after = supers_[s].summary & ~low_mask(rank_in_super(b) + 1);
  if (after) {
    const std::uint32_t nb = supers_[s].buckets[lsb(after)];
    ++examined;
    return finish(handle_at(nb, lsb(buckets_[nb].summary)));
  }
  for (s = supers_[s].next; s != kNoNav; s = supers_[s].next) {
    ++examined;
    if (supers_[s].summary == 0) continue;
    const std::uint32_t nb = supers_[s].buckets[lsb(supers_[s].summary)];
    ++examined;
    return finish(handle_at(nb, lsb(buckets_[nb].summary)));
  }
  return finish(kNoNav);
}

std::vector<NavHandle> NavList::traverse() const {
  std::vector<NavHandle> out;
  out.reserve(size_);
  for (std::uint32_t s = head_; s != kNoNav; s = supers_[s].next)
    for (std::uint32_t b : supers_[s].buckets)
      for (unsigned r = 0; r < buckets_[b].size; ++r) out.push_back(handle_at(b, r));
  return out;
}

std::optional<std::string> NavList::audit() const {
  const auto order = traverse();
  if (order.size() != size_) return "traversal length differs from size";

  std::size_t bucket_count = 0, super_count = 0;
  for (std::uint32_t s = head_; s != kNoNav; s = supers_[s].next) {
    const Super& sup = supers_[s];
    if (!sup.live) return "dead superbucket linked";
    if (sup.next != kNoNav && supers_[sup.next].prev != s) return "superbucket links broken";
    ++super_count;
    bucket_count += sup.buckets.size();
    std::uint64_t summary = 0;
    for (unsigned i = 0; i < sup.buckets.size(); ++i) {
      const Bucket& b = buckets_[sup.buckets[i]];
      if (!b.live || b.super != s) return "bucket/superbucket back link broken";
      if (std::popcount(b.used) != static_cast<int>(b.size)) return "bucket slot mask mismatch";
      std::uint64_t bs = 0;
      for (unsigned r = 0; r < b.size; ++r) {
        const NavHandle h = b.phys[perm_at(b, r)];
        if (!live(h) || slots_[h].bucket != sup.buckets[i] || slots_[h].phys != perm_at(b, r))
          return "slot/bucket back link broken";
        if (slots_[h].e.kind == EntryKind::Element) bs |= std::uint64_t{1} << r;
      }
      if (bs != b.summary) return "bucket summary word stale";
      if (b.summary) summary |= std::uint64_t{1} << i;
    }
    if (summary != sup.summary) return "superbucket summary word stale";
  }
  for (std::uint32_t s = head_; s != kNoNav; s = supers_[s].next) {
    for (std::uint32_t b : supers_[s].buckets) {
      const unsigned sz = buckets_[b].size;
      if (sz > bucket_max() || (bucket_count > 1 && sz < bucket_min_) || sz == 0)
        return "bucket size out of bounds";
    }
    const std::size_t nb = supers_[s].buckets.size();
    if (nb > bucket_max() || (super_count > 1 && nb < bucket_min_))
      return "superbucket size out of bounds";
  }

  struct Open {
    u128 owner;
    std::size_t elements_at_open;
  };
  std::vector<Open> stack;
  std::size_t elements = 0, run = 0, longest = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SBarEntry& e = slots_[order[i]].e;
    if (i > 0 && slots_[order[i - 1]].e.coord >= e.coord) return "coordinates not increasing";
    switch (e.kind) {
      case EntryKind::Element:
        ++elements;
        run = 0;
        break;
      case EntryKind::Open:
        stack.push_back({e.owner, elements});
        longest = std::max(longest, ++run);
        break;
      case EntryKind::Close:
        if (stack.empty() || stack.back().owner != e.owner) return "unbalanced parentheses";
        if (stack.back().elements_at_open == elements) return "parenthesis pair encloses no element";
        stack.pop_back();
        longest = std::max(longest, ++run);
        break;
    }
  }
  if (!stack.empty()) return "unclosed parenthesis";
  if (longest > 2 * std::size_t{w_}) return "parenthesis run longer than 2w";
  return std::nullopt;
}

}  // namespace wordrange
