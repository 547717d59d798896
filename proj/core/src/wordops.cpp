#include "wordrange/wordops.hpp"

#include <algorithm>

namespace wordrange {

WordParams WordParams::make(unsigned w) {
  if (w != 8 && w != 16 && w != 32 && w != 64)
    throw std::invalid_argument("word width must be one of 8, 16, 32, 64");
  return WordParams{w, static_cast<unsigned>(std::countr_zero(w))};
}

unsigned lca_depth(Key a, Key b, unsigned w) {
  if (a == b) throw std::invalid_argument("identical keys have no proper LCA");
  if (w < 64 && ((a | b) >> w) != 0) throw std::invalid_argument("key exceeds word width");
  return w - 1 - msb(a ^ b);
}

std::string to_string(const NodeName& n) {
  return "(t=" + std::to_string(n.order) + ",d=" + std::to_string(n.depth) +
         ",p=" + std::to_string(n.prefix) + ")";
}

TrieGeometry::TrieGeometry(WordParams params, unsigned branch)
    : params_(params), branch_(branch) {
  if (branch < 2 || !std::has_single_bit(branch) || branch > params.w)
    throw std::invalid_argument("chunk base B must be a power of two in [2, w]");
  unsigned c = 1;
  unsigned t = 0;
  for (;;) {
    chunk_[t] = c;
    leaf_[t] = (params.w + c - 1) / c;
    if (c >= params.w) break;
    c *= branch;
    ++t;
  }
  top_ = t;
  depth_bits_ = ceil_log2(params.w + 1);
  order_bits_ = std::max(1u, ceil_log2(params.lgw + 1));
}

unsigned TrieGeometry::t0_depth(const NodeName& n) const {
  return std::min<unsigned>(n.depth * chunk_[n.order], params_.w);
}

NodeName TrieGeometry::on_path(unsigned t, unsigned d, Key x) const {
  NodeName n{static_cast<std::uint8_t>(t), static_cast<std::uint16_t>(d), 0};
  n.prefix = key_prefix(x, t0_depth(n), params_.w);
  return n;
}

NodeName TrieGeometry::map_node(const NodeName& v, unsigned t) const {
  const unsigned depth0 = t0_depth(v);
  const unsigned d = depth0 == params_.w ? leaf_[t] : depth0 / chunk_[t];
  NodeName out{static_cast<std::uint8_t>(t), static_cast<std::uint16_t>(d), 0};
  const unsigned bits = t0_depth(out);
  out.prefix = bits == 0 ? 0 : v.prefix >> (depth0 - bits);
  return out;
}

Key TrieGeometry::representative(const NodeName& n) const {
  const unsigned bits = t0_depth(n);
  if (bits == 0) return 0;
  if (bits == params_.w) return n.prefix;
  return n.prefix << (params_.w - bits);
}

bool TrieGeometry::is_strict_ancestor(const NodeName& a, const NodeName& b) const {
  const unsigned da = t0_depth(a);
  const unsigned db = t0_depth(b);
  if (da >= db) return false;
  return (da == 0 ? 0 : b.prefix >> (db - da)) == a.prefix;
}

bool TrieGeometry::in_subtree(const NodeName& a, const NodeName& b) const {
  const unsigned da = t0_depth(a);
  const unsigned db = t0_depth(b);
  if (da > db) return false;
  return (da == 0 ? 0 : b.prefix >> (db - da)) == a.prefix;
}

u128 TrieGeometry::encode(const NodeName& n) const {
  const unsigned bits = t0_depth(n);
  const u128 aligned = bits == 0 ? 0 : static_cast<u128>(n.prefix) << (params_.w - bits);
  u128 code = aligned;
  code = (code << depth_bits_) | n.depth;
  code = (code << order_bits_) | n.order;
  return code;
}

NodeName TrieGeometry::decode(u128 code) const {
  NodeName n;
  n.order = static_cast<std::uint8_t>(code & low_mask(order_bits_));
  if (n.order > top_) throw std::invalid_argument("encoded order out of range");
  code >>= order_bits_;
  n.depth = static_cast<std::uint16_t>(code & low_mask(depth_bits_));
  code >>= depth_bits_;
  const unsigned bits = t0_depth(n);
  n.prefix = bits == 0 ? 0 : static_cast<Key>(code >> (params_.w - bits));
  return n;
}

}  // namespace wordrange
