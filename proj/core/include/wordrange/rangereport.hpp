#pragma once

// Dynamic one-dimensional range reporting in O(lg lg w) query time.
//
// The set S lives in four places: a predecessor structure (used only by
// updates), a table of branching records keyed by primary-trie node, the
// navigation list over S-bar, and the ancestor index, a map from nodes of the
// tries of every order to the primary-trie depth of their lowest branching
// strict ancestor. Queries never touch the predecessor structure.
//
// A primary-trie node is branching when both its children lie on paths of
// elements; a node of the order-t trie is branching when its chunk contains a
// branching primary-trie node. Roots are branching by convention. The root
// record exists whenever S is nonempty and is "virtual" (no parentheses in
// the navigation list) unless the root really branches.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordrange/compactdict.hpp"
#include "wordrange/navlist.hpp"
#include "wordrange/predecessor.hpp"
#include "wordrange/wordops.hpp"

namespace wordrange {

enum class Variant { Core, FastUpdate5A, FastQuery5B };
enum class IndexBackend { Exact, Bloomier };

std::string to_string(Variant v);
std::string to_string(IndexBackend b);
/// Accepts "core", "5a", "5b" / "exact", "bloomier"; throws std::invalid_argument.
Variant parse_variant(const std::string& s);
IndexBackend parse_backend(const std::string& s);

struct RangeConfig {
  unsigned w = 64;
  unsigned B = 2;
  Variant variant = Variant::Core;
  IndexBackend backend = IndexBackend::Exact;
  bool audit = false;
  std::uint64_t seed = 1;
  /// Largest |S| the Bloomier-backed index is sized for; 0 picks
  /// min(2^w, 2^17).
  std::size_t capacity = 0;
  PredBackend pred = PredBackend::YFast;

  /// Throws std::invalid_argument on an unsupported combination.
  void validate() const;
};

struct BranchingRecord {
  NodeName node;
  std::optional<NodeName> ancestor;
  /// Highest branching node (or leaf) in the left / right subtree.
  std::array<std::optional<NodeName>, 2> desc;
  NavHandle open_h = kNoNav;
  NavHandle close_h = kNoNav;
  bool real = false;
};

struct LeafRecord {
  NodeName ancestor;
  NavHandle elem_h = kNoNav;
};

struct QueryStats {
  unsigned test_branching = 0;
  unsigned navlist_queries = 0;
  unsigned pred_queries = 0;
  unsigned filter_reads = 0;
};

struct UpdateStats {
  unsigned index_writes = 0;
};

class AuditFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RangeReporter {
 public:
  explicit RangeReporter(const RangeConfig& cfg);
  ~RangeReporter();
  RangeReporter(const RangeReporter&) = delete;
  RangeReporter& operator=(const RangeReporter&) = delete;

  /// Returns false (and changes nothing) if x is already present.
  bool insert(Key x);
  /// Returns false if x is absent.
  bool erase(Key x);
  bool contains(Key x) const { return leaves_.count(x) != 0; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }

  /// Some element of S in [a, b]. Throws std::invalid_argument("empty
  /// interval") when a > b.
  std::optional<Key> findany(Key a, Key b) const;
  /// S intersected with [a, b], ascending.
  std::vector<Key> report(Key a, Key b) const;

  bool test_branching(const NodeName& v) const;
  bool verify_lba(const BranchingRecord& candidate, const NodeName& v) const;
  /// Record of the lowest branching strict ancestor of a non-branching,
  /// non-root primary-trie node, or null when v is not on an element path.
  const BranchingRecord* find_lba(const NodeName& v) const;

  const RangeConfig& config() const { return cfg_; }
  const TrieGeometry& geometry() const { return geo_; }
  const NavList& navlist() const { return nav_; }
  const PredSet& predecessor() const { return pred_; }
  const ValueStore& ancestor_index() const { return *index_; }
  const BranchingRecord* record(const NodeName& t0_node) const;
  const LeafRecord* leaf_record(Key x) const;
  std::size_t branching_count() const;

  const QueryStats& last_query() const { return last_query_; }
  const QueryStats& max_query() const { return max_query_; }
  const UpdateStats& last_update() const { return last_update_; }
  const UpdateStats& max_insert() const { return max_insert_; }
  const UpdateStats& max_erase() const { return max_erase_; }
  void reset_stats();

  std::size_t space_bits() const;

  /// Recomputes every invariant from S by brute force; throws AuditFailure
  /// describing the first violation. Runs after each update when
  /// config().audit is set.
  void audit() const;
  /// One line per branching record: name, ancestor depth, descendants.
  std::string dump() const;

 private:
  struct Transition {
    NodeName node;
    std::uint64_t without = 0;  // stored value (depth + 1) or 0 when absent
    std::uint64_t with = 0;
  };
  struct Change {
    unsigned dv;
    Key x;
    Key old_key;
    bool has_old;
    unsigned da;
    bool anc_real;
    unsigned dy;
    bool y_real;
  };

  BranchingRecord* mut_record(const NodeName& n);
  std::uint64_t read_index(const NodeName& n) const;
  const BranchingRecord* candidate_from(const NodeName& key, const NodeName& v) const;
  std::vector<Transition> transitions(const Change& c) const;
  void apply(const std::vector<Transition>& ts, bool inserting);
  Key min_under(const NodeName& u) const;
  Key max_under(const NodeName& u) const;
  std::pair<NavHandle, NavHandle> group_of(const NodeName& u) const;
  void set_ancestor(const NodeName& u, const NodeName& anc);
  void finish_query() const;

  RangeConfig cfg_;
  TrieGeometry geo_;
  PredSet pred_;
  NavList nav_;
  std::unique_ptr<ValueStore> index_;
  std::unordered_map<u128, BranchingRecord, U128Hash> records_;
  std::unordered_map<Key, LeafRecord> leaves_;

  mutable QueryStats cur_query_;
  mutable QueryStats last_query_;
  mutable QueryStats max_query_;
  UpdateStats last_update_;
  UpdateStats max_insert_;
  UpdateStats max_erase_;
};

}  // namespace wordrange
