#include "wordrange/perfecthash.hpp"

#include <algorithm>
#include <cmath>

namespace wordrange {

void PerfectHashConfig::validate() const {
  if (n < 2) throw std::invalid_argument("perfect hash capacity must be at least 2");
  if (u_bits < 2 || u_bits > 64) throw std::invalid_argument("u-bits must be in [2, 64]");
  if (kappa == 0) throw std::invalid_argument("kappa must be positive");
  if (u_bits < 64 && static_cast<double>(n) > std::ldexp(1.0, static_cast<int>(u_bits)))
    throw std::invalid_argument("capacity exceeds universe size");
}

PerfectHashParams PerfectHashParams::derive(const PerfectHashConfig& cfg) {
  cfg.validate();
  PerfectHashParams p;
  const double lg_n = std::log2(static_cast<double>(cfg.n));
  const double lg_lg_u = std::log2(static_cast<double>(cfg.u_bits));
  const unsigned ceil_lg_n = ceil_log2(cfg.n);

  p.v_bits = std::min(3 * ceil_lg_n + 16, cfg.u_bits);
  p.buckets = static_cast<std::uint64_t>(std::ceil(static_cast<double>(cfg.n) / (lg_n * lg_n)));
  p.s_bits = static_cast<unsigned>(std::ceil((6.0 + 2.0 * cfg.c) * lg_lg_u - 1e-9));
  p.bucket_capacity =
      static_cast<std::size_t>(std::ceil(lg_n * lg_n + std::pow(lg_n, 5.0 / 3.0) - 1e-9));

  p.buckets = std::max<std::uint64_t>(p.buckets, 1);
  p.s_bits = std::clamp(p.s_bits, 4u, std::max(4u, p.v_bits));
  p.s_bits = std::min(p.s_bits, 64u);
  p.bucket_capacity = std::max<std::size_t>(p.bucket_capacity, cfg.n < 256 ? 16 : 4);
  p.spill_capacity = std::size_t{cfg.kappa} * ((cfg.n + cfg.u_bits - 1) / cfg.u_bits);
  return p;
}

PerfectHash::PerfectHash(const PerfectHashConfig& cfg)
    : cfg_(cfg), params_(PerfectHashParams::derive(cfg)) {
  reset(cfg.seed);
}

void PerfectHash::reset(std::uint64_t seed) {
  SeedStream rng(seed);
  rho_ = UniversalHash(rng.next(), cfg_.u_bits, params_.v_bits);
  family_ = BucketHashFamily(rng.next(), params_.v_bits, params_.buckets, params_.s_bits);
  buckets_.assign(params_.buckets, SmallDict(params_.bucket_capacity, params_.s_bits));
  spill_ = PackedTable(cfg_.u_bits, bits_for(params_.spill_capacity), rng.next());
  spill_free_.clear();
  spill_high_water_ = 0;
  live_ = 0;
}

std::uint64_t PerfectHash::spill_alloc() {
  if (!spill_free_.empty()) {
    const std::uint64_t slot = spill_free_.back();
    spill_free_.pop_back();
    return slot;
  }
  return spill_high_water_++;
}

PerfectHash::InsertResult PerfectHash::insert(Key k) {
  if (auto v = spill_.find(k)) return {params_.buckets * params_.bucket_capacity + *v, false, true};
  if (live_ >= cfg_.n) throw std::length_error("perfect hash capacity exceeded");

  const std::uint64_t reduced = reduce(k);
  const std::uint64_t i = family_.bucket(reduced);
  const std::uint64_t name = family_.key_hash(i, reduced);
  SmallDict& bucket = buckets_[i - 1];

  if (!bucket.full() && !bucket.contains(name)) {
    const std::size_t delta = bucket.insert(name);
    ++live_;
    return {(i - 1) * params_.bucket_capacity + delta, true, false};
  }

  if (spill_.size() >= params_.spill_capacity) throw RebuildRequired();
  const std::uint64_t slot = spill_alloc();
  spill_.insert(k, slot);
  spill_peak_ = std::max(spill_peak_, spill_.size());
  ++live_;
  return {params_.buckets * params_.bucket_capacity + slot, true, true};
}

bool PerfectHash::erase(Key k) {
  if (auto slot = spill_.find(k)) {
    spill_.erase(k);
    spill_free_.push_back(static_cast<std::uint32_t>(*slot));
    --live_;
    return true;
  }
  const std::uint64_t reduced = reduce(k);
  const std::uint64_t i = family_.bucket(reduced);
  const std::uint64_t name = family_.key_hash(i, reduced);
  SmallDict& bucket = buckets_[i - 1];
  if (!bucket.contains(name)) return false;
  bucket.erase(name);
  --live_;
  return true;
}

std::uint64_t PerfectHash::eval(Key k) const {
  if (auto slot = spill_.find(k)) return params_.buckets * params_.bucket_capacity + *slot;
  const std::uint64_t reduced = reduce(k);
  const std::uint64_t i = family_.bucket(reduced);
  const auto delta = buckets_[i - 1].lookup(family_.key_hash(i, reduced));
  return (i - 1) * params_.bucket_capacity + delta.value_or(0);
}

void PerfectHash::rebuild(std::uint64_t seed, std::span<const Key> live) {
  reset(seed);
  for (Key k : live) insert(k);
}

std::size_t PerfectHash::space_bits() const {
  // Configuration header: n, u_bits, v, r, s, j, spill capacity, live count.
  std::size_t bits = 8 * 64;
  bits += rho_.representation_bits();
  bits += family_.representation_bits();
  for (const auto& b : buckets_) bits += b.space_bits();
  const unsigned slot_bits = bits_for(params_.spill_capacity);
  if (spill_.capacity() > 0) bits += spill_.space_bits();
  bits += spill_free_.size() * slot_bits + slot_bits;  // free list + high-water mark
  return bits;
}

bool PerfectHash::buckets_consistent() const {
  return std::all_of(buckets_.begin(), buckets_.end(),
                     [](const SmallDict& d) { return d.consistent(); });
}

}  // namespace wordrange
