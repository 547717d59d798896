#include "wordrange/bloomier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wordrange {

void BloomierConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (u_bits == 0 || u_bits > 128) throw std::invalid_argument("u-bits must be in [1, 128]");
  if (r == 0 || r > 64) throw std::invalid_argument("value width r must be in [1, 64]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (u_bits < 128 && std::log2(static_cast<double>(n)) + 1.0 > u_bits)
    throw std::invalid_argument("universe must hold at least 2n keys");
}

unsigned BloomierConfig::hash_bits() const {
  const double lg_n = std::log2(static_cast<double>(n));
  const double lg_u_over_n = static_cast<double>(u_bits) - lg_n;
  const double spread = static_cast<double>(n) * lg_u_over_n;
  const double accuracy = static_cast<double>(n) / epsilon;
  const double v = std::max({spread, accuracy, static_cast<double>(n)});
  auto bits = static_cast<unsigned>(std::ceil(std::log2(v) - 1e-9));
  bits = std::min({bits, u_bits, 64u});
  return std::max(bits, 1u);
}

BloomierFilter::BloomierFilter(const BloomierConfig& cfg)
    : cfg_(cfg),
      hash_((cfg.validate(), cfg.seed), cfg.u_bits, cfg.hash_bits()),
      exact_(cfg.u_bits, cfg.r, cfg.seed ^ 0x5bd1e995u),
      by_hash_(cfg.hash_bits(), cfg.r, cfg.seed ^ 0x1b873593u) {}

void BloomierFilter::insert(u128 x, std::uint64_t a) {
  if (a == 0) throw std::invalid_argument("use delete");
  if (cfg_.r < 64 && (a >> cfg_.r) != 0) throw std::invalid_argument("value wider than r bits");
  if (live_ >= cfg_.n) throw std::length_error("Bloomier filter capacity exceeded");
  const std::uint64_t hx = hash_(x);
  if (by_hash_.find(hx))
    exact_.insert(x, a);
  else
    by_hash_.insert(hx, a);
  ++live_;
}

void BloomierFilter::erase(u128 x) {
  if (exact_.erase(x) || by_hash_.erase(hash_(x))) --live_;
}

std::uint64_t BloomierFilter::lookup(u128 x) const {
  if (auto v = exact_.find(x)) return *v;
  return by_hash_.find(hash_(x)).value_or(0);
}

std::size_t BloomierFilter::space_bits() const {
  return exact_.space_bits() + by_hash_.space_bits() + hash_.representation_bits() + 64;
}

}  // namespace wordrange
