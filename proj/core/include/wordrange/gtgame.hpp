#pragma once

// The greater-than game in the bit-probe model: an updater sees a and flips
// bits of a zeroed memory; a querier sees b and must decide b > a by reading
// bits. Both schemes here mark a's root-to-leaf path in a B-ary tree over
// [0, n) and find the level where b's path leaves it by binary search.
//
//   QueryHeavy  writes one bit per level; the query then reads the on-path
//               bits of the left siblings of b's node below the divergence.
//   UpdateHeavy also marks every left sibling of a's node at each level; the
//               query then reads one sibling bit below the divergence.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace wordrange {

class BitMemory {
 public:
  bool read(std::uint64_t addr);
  void write(std::uint64_t addr, bool value);

  std::uint64_t reads() const { return reads_; }
  std::uint64_t writes() const { return writes_; }
  bool fresh() const { return writes_ == 0; }
  void reset_read_counter() { reads_ = 0; }

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> words_;
  std::uint64_t reads_ = 0;
  std::uint64_t writes_ = 0;
};

enum class GtStrategy { QueryHeavy, UpdateHeavy };

std::string to_string(GtStrategy s);
GtStrategy parse_strategy(const std::string& s);

struct GtAnswer {
  bool greater = false;
  unsigned probes = 0;
};

class GtScheme {
 public:
  /// Throws std::invalid_argument unless n >= 2 and B >= 2.
  GtScheme(std::uint64_t n, std::uint64_t B, GtStrategy strategy);

  std::uint64_t n() const { return n_; }
  std::uint64_t branch() const { return B_; }
  unsigned levels() const { return L_; }
  GtStrategy strategy() const { return strategy_; }

  /// Marks a into a fresh memory; returns the number of bits written.
  /// Throws std::out_of_range for a >= n, std::logic_error for used memory.
  unsigned update(BitMemory& m, std::uint64_t a) const;
  /// Decides b > a from the memory written by update(a).
  GtAnswer query(BitMemory& m, std::uint64_t b) const;

  /// Probe bounds the construction guarantees.
  unsigned write_bound() const;
  unsigned read_bound() const;

  /// Address of the on-path bit of node `node` at level 1..L, and of its
  /// sibling bit (UpdateHeavy only).
  std::uint64_t path_bit(unsigned level, std::uint64_t node) const { return path_off_[level] + node; }
  std::uint64_t sibling_bit(unsigned level, std::uint64_t node) const { return sib_off_[level] + node; }
  std::uint64_t node_at(unsigned level, std::uint64_t x) const { return x / pow_[L_ - level]; }

 private:
  std::uint64_t n_;
  std::uint64_t B_;
  GtStrategy strategy_;
  unsigned L_ = 0;
  std::vector<std::uint64_t> pow_;
  std::vector<std::uint64_t> path_off_;
  std::vector<std::uint64_t> sib_off_;
};

struct GtRow {
  std::uint64_t B = 0;
  GtStrategy strategy = GtStrategy::QueryHeavy;
  unsigned levels = 0;
  unsigned tu_max = 0;
  unsigned tq_max = 0;
  double tu_mean = 0;
  double tq_mean = 0;
  std::uint64_t pairs = 0;
  std::uint64_t errors = 0;
  bool within_bounds = true;
  bool correct() const { return errors == 0 && within_bounds; }
};

/// Plays the game for every B and strategy. trials == 0 means every pair
/// (a, b) in [0, n)^2; otherwise `trials` random pairs drawn from seed.
std::vector<GtRow> gt_sweep(std::uint64_t n, const std::vector<std::uint64_t>& Bs,
                            const std::vector<GtStrategy>& strategies, std::uint64_t trials,
                            std::uint64_t seed);

}  // namespace wordrange
