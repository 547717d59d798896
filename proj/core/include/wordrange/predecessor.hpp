#pragma once

// Dynamic predecessor over w-bit keys with the sorted doubly-linked list of
// elements. The default backend is a y-fast trie: an x-fast trie (one hash
// table of prefixes per level, each prefix node holding the min and max
// representative below it) over bucket representatives, and small sorted
// buckets of Theta(w) keys. The ordered-set backend exists to isolate
// range-reporting bugs from predecessor bugs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "wordrange/wordops.hpp"

namespace wordrange {

class YFastTrie {
 public:
  explicit YFastTrie(unsigned w);

  bool insert(Key x);
  bool erase(Key x);
  bool contains(Key x) const;
  std::optional<Key> pred(Key x) const;  // largest <= x
  std::optional<Key> succ(Key x) const;  // smallest >= x
  std::size_t size() const { return size_; }

  /// Audit helper: every structural invariant of both levels holds.
  bool check() const;

 private:
  struct XNode {
    Key min_rep;
    Key max_rep;
  };
  struct RepLinks {
    std::optional<Key> prev, next;
  };

  Key pred_rep(Key x) const;
  void xfast_insert(Key rep);
  void xfast_erase(Key rep);
  Key prefix(Key x, unsigned len) const { return key_prefix(x, len, w_); }
  void maybe_split(Key rep);
  void maybe_merge(Key rep);

  unsigned w_;
  std::size_t max_bucket_;
  std::size_t min_bucket_;
  std::vector<std::unordered_map<Key, XNode>> levels_;
  std::unordered_map<Key, RepLinks> reps_;
  std::unordered_map<Key, std::vector<Key>> buckets_;
  std::size_t size_ = 0;
};

enum class PredBackend { YFast, OrderedSet };

class PredSet {
 public:
  struct InsertResult {
    bool inserted = false;
    std::optional<Key> prev;
    std::optional<Key> next;
  };

  PredSet(unsigned w, PredBackend backend = PredBackend::YFast);

  InsertResult insert(Key x);
  bool erase(Key x);
  /// Largest key <= x. Counted.
  std::optional<Key> pred(Key x) const;
  /// Smallest key >= x. Counted.
  std::optional<Key> succ(Key x) const;

  bool contains(Key x) const { return links_.count(x) != 0; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  std::optional<Key> list_prev(Key x) const;
  std::optional<Key> list_next(Key x) const;
  std::optional<Key> min() const { return head_; }
  std::optional<Key> max() const { return tail_; }

  std::uint64_t query_count() const { return queries_; }
  /// Audit helper: list order, backend and links agree.
  bool check() const;

 private:
  struct Links {
    std::optional<Key> prev, next;
  };
  std::optional<Key> backend_pred(Key x) const;
  std::optional<Key> backend_succ(Key x) const;

  unsigned w_;
  PredBackend backend_;
  std::unique_ptr<YFastTrie> yfast_;
  std::set<Key> ordered_;
  std::unordered_map<Key, Links> links_;
  std::optional<Key> head_, tail_;
  mutable std::uint64_t queries_ = 0;
};

}  // namespace wordrange
