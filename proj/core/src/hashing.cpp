#include "wordrange/hashing.hpp"

#include <stdexcept>

namespace wordrange {

SeedStream::SeedStream(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SeedStream::next() { return engine_(); }

u128 SeedStream::next128() {
  const u128 hi = engine_();
  return (hi << 64) | engine_();
}

UniversalHash::UniversalHash(std::uint64_t seed, unsigned in_bits, unsigned out_bits)
    : in_bits_(in_bits), out_bits_(out_bits) {
  if (out_bits == 0 || in_bits == 0) throw std::invalid_argument("hash widths must be positive");
  if (out_bits > in_bits) throw std::invalid_argument("hash output wider than input");
  if (in_bits > 128 || out_bits > 64) throw std::invalid_argument("hash widths exceed 128/64 bits");
  SeedStream rng(seed);
  mul_ = rng.next() | 1u;
  a0_ = rng.next128();
  a1_ = rng.next128();
  b_ = rng.next128();
}

TabulationHash::TabulationHash(std::uint64_t seed, unsigned in_bits)
    : chars_((in_bits + kCharBits - 1) / kCharBits), table_(std::size_t{chars_} << kCharBits) {
  SeedStream rng(seed);
  for (auto& cell : table_) cell = static_cast<std::uint32_t>(rng.next() >> 32);
}

BucketHashFamily::BucketHashFamily(std::uint64_t seed, unsigned v_bits, std::uint64_t buckets,
                                   unsigned s_bits)
    : buckets_(buckets), s_bits_(s_bits) {
  if (buckets == 0 || buckets > (std::uint64_t{1} << 32))
    throw std::invalid_argument("bucket count must be in [1, 2^32]");
  SeedStream rng(seed);
  phi_ = TabulationHash(rng.next(), v_bits);
  per_bucket_.reserve(buckets);
  for (std::uint64_t i = 0; i < buckets; ++i) per_bucket_.emplace_back(rng.next(), v_bits, s_bits);
}

std::size_t BucketHashFamily::representation_bits() const {
  std::size_t bits = phi_.representation_bits();
  for (const auto& h : per_bucket_) bits += h.representation_bits();
  return bits;
}

}  // namespace wordrange
