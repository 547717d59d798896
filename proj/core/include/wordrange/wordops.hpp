#pragma once

// Word-level primitives and trie-coordinate arithmetic.
//
// Every trie in this library is a trie over w-bit keys. A trie of order t
// cuts each root-to-leaf path of the binary ("primary") trie into chunks of
// B^t bits; one edge of the order-t trie spans one chunk. Depths are counted
// in edges from the root (root depth 0). A node is named by (order, depth,
// prefix), where the prefix holds the leading bits shared by every key in the
// node's subtree, right-aligned.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wordrange {

using Key = std::uint64_t;
using u128 = unsigned __int128;

struct U128Hash {
  std::size_t operator()(u128 x) const noexcept {
    const auto lo = static_cast<std::uint64_t>(x);
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    std::uint64_t h = lo ^ (hi * 0x9e3779b97f4a7c15ull);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ull;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Position of the highest set bit, 0 = least significant.
inline unsigned msb(std::uint64_t x) {
  if (x == 0) throw std::domain_error("msb of zero");
  return 63u - static_cast<unsigned>(std::countl_zero(x));
}

/// Position of the lowest set bit.
inline unsigned lsb(std::uint64_t x) {
  if (x == 0) throw std::domain_error("lsb of zero");
  return static_cast<unsigned>(std::countr_zero(x));
}

/// Number of bits needed to write values in [0, x].
inline unsigned bits_for(std::uint64_t x) { return x == 0 ? 1u : msb(x) + 1; }

/// ceil(log2(x)) for x >= 1.
inline unsigned ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return msb(x - 1) + 1;
}

inline std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

struct WordParams {
  unsigned w = 64;
  unsigned lgw = 6;

  /// Throws std::invalid_argument unless w is one of 8, 16, 32, 64.
  static WordParams make(unsigned w);

  Key max_key() const { return low_mask(w); }
};

/// Leading `bits` bits of a w-bit key, right-aligned.
inline Key key_prefix(Key x, unsigned bits, unsigned w) {
  if (bits == 0) return 0;
  return x >> (w - bits);
}

/// Depth (in the binary trie) of the lowest common ancestor of two distinct
/// leaves: the number of leading bits they share.
unsigned lca_depth(Key a, Key b, unsigned w);

struct NodeName {
  std::uint8_t order = 0;
  std::uint16_t depth = 0;
  Key prefix = 0;

  friend bool operator==(const NodeName&, const NodeName&) = default;
  friend auto operator<=>(const NodeName&, const NodeName&) = default;
};

std::string to_string(const NodeName& n);

enum class SubtreeRole { Root, Interior };

/// Role of a depth-`depth` node inside the natural depth-`branch` subtree of
/// its trie that contains it.
inline SubtreeRole natural_subtree_role(unsigned depth, unsigned branch) {
  return depth % branch == 0 ? SubtreeRole::Root : SubtreeRole::Interior;
}

/// Chunk lengths and leaf depths of the tries of every order for given w, B.
///
/// Chunk length of order t is B^t. When the chunk length does not divide w
/// the bottom chunk of each path is shorter; leaves always sit at
/// leaf_depth(t) = ceil(w / B^t), and a non-leaf node at depth d has its
/// primary-trie root at depth d * B^t.
class TrieGeometry {
 public:
  /// Throws std::invalid_argument unless B is a power of two in [2, w].
  TrieGeometry(WordParams params, unsigned branch);

  unsigned w() const { return params_.w; }
  const WordParams& params() const { return params_; }
  unsigned branch() const { return branch_; }
  /// Smallest order whose chunk covers the whole key; its trie is a root
  /// with leaf children.
  unsigned top_order() const { return top_; }
  unsigned chunk(unsigned t) const { return chunk_[t]; }
  unsigned leaf_depth(unsigned t) const { return leaf_[t]; }

  /// Primary-trie depth of r_0(node).
  unsigned t0_depth(const NodeName& n) const;
  /// Number of prefix bits carried by a node.
  unsigned prefix_bits(const NodeName& n) const { return t0_depth(n); }
  bool is_leaf(const NodeName& n) const { return n.depth == leaf_[n.order]; }

  /// The order-t node at depth d on the path of key x.
  NodeName on_path(unsigned t, unsigned d, Key x) const;
  /// Primary-trie node at depth d on the path of x.
  NodeName t0(unsigned d, Key x) const { return on_path(0, d, x); }
  NodeName leaf(Key x) const { return on_path(0, params_.w, x); }

  /// The order-t node whose chunk contains the primary-trie position of v.
  NodeName map_node(const NodeName& v, unsigned t) const;

  /// Some key whose path passes through n (n's prefix padded with zeros).
  Key representative(const NodeName& n) const;

  /// Bit of the key path leaving primary-trie depth d (0 = left).
  unsigned branch_bit(Key x, unsigned d) const { return static_cast<unsigned>((x >> (params_.w - 1 - d)) & 1u); }

  /// a is a proper ancestor of b, both compared by their primary-trie roots.
  bool is_strict_ancestor(const NodeName& a, const NodeName& b) const;
  /// b lies in the subtree rooted at a (a itself included).
  bool in_subtree(const NodeName& a, const NodeName& b) const;

  /// Distinct integer of at most w + ceil(lg(w+1)) + ceil(lg(lgw+1)) bits.
  u128 encode(const NodeName& n) const;
  NodeName decode(u128 code) const;
  unsigned encoded_bits() const { return params_.w + depth_bits_ + order_bits_; }

 private:
  WordParams params_;
  unsigned branch_;
  unsigned top_ = 0;
  unsigned chunk_[65]{};
  unsigned leaf_[65]{};
  unsigned depth_bits_;
  unsigned order_bits_;
};

}  // namespace wordrange
