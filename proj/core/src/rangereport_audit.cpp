#include <algorithm>
#include <unordered_set>

#include "wordrange/rangereport.hpp"

namespace wordrange {

namespace {

[[noreturn]] void fail(const std::string& what) { throw AuditFailure("audit: " + what); }

}  // namespace

void RangeReporter::audit() const {
  const unsigned w = cfg_.w;
  if (!pred_.check()) fail("predecessor structure inconsistent");

  std::vector<Key> keys;
  for (auto k = pred_.min(); k; k = pred_.list_next(*k)) keys.push_back(*k);
  if (keys.size() != leaves_.size()) fail("leaf table and predecessor list differ in size");
  for (Key k : keys)
    if (!leaves_.count(k)) fail("element " + std::to_string(k) + " has no leaf record");

  // Branching nodes of the primary trie are exactly the LCAs of neighbours.
  std::unordered_set<u128, U128Hash> z;
  std::vector<NodeName> zs;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const NodeName n = geo_.t0(lca_depth(keys[i - 1], keys[i], w), keys[i]);
    if (z.insert(geo_.encode(n)).second) zs.push_back(n);
  }
  const NodeName root = geo_.t0(0, 0);
  auto branching0 = [&](unsigned d, Key x) { return d == 0 || z.count(geo_.encode(geo_.t0(d, x))) != 0; };
  // Depth of the deepest branching node strictly above primary depth d on x's path.
  auto lba_depth = [&](unsigned d, Key x) {
    for (unsigned e = d; e-- > 1;)
      if (branching0(e, x)) return e;
    return 0u;
  };
  auto expected_desc = [&](const NodeName& n, unsigned side) -> std::optional<NodeName> {
    const Key base = geo_.representative(n);
    const unsigned below = w - n.depth - 1;
    const Key lo = base | (Key{side} << below);
    const Key hi = lo | low_mask(below);
    auto first = std::lower_bound(keys.begin(), keys.end(), lo);
    auto last = std::upper_bound(keys.begin(), keys.end(), hi);
    if (first == last) return std::nullopt;
    if (last - first == 1) return geo_.leaf(*first);
    return geo_.t0(lca_depth(*first, *(last - 1), w), *first);
  };

  if (keys.empty()) {
    if (!records_.empty()) fail("records left in an empty structure");
    if (!nav_.empty()) fail("navigation list not empty");
    if (index_->size() != 0) fail("ancestor index not empty");
    return;
  }
  const bool root_real = z.count(geo_.encode(root)) != 0;
  if (records_.size() != zs.size() + (root_real ? 0 : 1)) fail("record count differs from branching count");

  auto check_record = [&](const NodeName& n, bool real) {
    const BranchingRecord* r = record(n);
    if (!r) fail("missing record for " + to_string(n));
    if (r->node != n || r->real != real) fail("record identity wrong at " + to_string(n));
    if (n.depth == 0) {
      if (r->ancestor) fail("root record has an ancestor");
    } else {
      const NodeName anc = geo_.t0(lba_depth(n.depth, geo_.representative(n)), geo_.representative(n));
      if (!r->ancestor || *r->ancestor != anc) fail("wrong ancestor at " + to_string(n));
    }
    for (unsigned s = 0; s < 2; ++s)
      if (r->desc[s] != expected_desc(n, s)) fail("wrong descendant " + std::to_string(s) + " at " + to_string(n));
    if (real) {
      const u128 owner = geo_.encode(n);
      if (!nav_.live(r->open_h) || nav_.entry(r->open_h).kind != EntryKind::Open || nav_.entry(r->open_h).owner != owner)
        fail("open handle wrong at " + to_string(n));
      if (!nav_.live(r->close_h) || nav_.entry(r->close_h).kind != EntryKind::Close ||
          nav_.entry(r->close_h).owner != owner)
        fail("close handle wrong at " + to_string(n));
    }
  };
  for (const auto& n : zs) check_record(n, true);
  if (!root_real) check_record(root, false);

  for (Key k : keys) {
    const LeafRecord& lr = leaves_.at(k);
    if (lr.ancestor != geo_.t0(lba_depth(w, k), k)) fail("wrong leaf ancestor for " + std::to_string(k));
    if (!nav_.live(lr.elem_h) || nav_.entry(lr.elem_h).kind != EntryKind::Element ||
        nav_.entry(lr.elem_h).owner != k)
      fail("element handle wrong for " + std::to_string(k));
  }

  if (auto err = nav_.audit()) fail("navigation list: " + *err);
  std::vector<u128> coords;
  for (Key k : keys) coords.push_back(SBarEntry::element(k).coord);
  for (const auto& n : zs) {
    const Key lo = geo_.representative(n);
    coords.push_back(SBarEntry::open(lo, n.depth, 0).coord);
    coords.push_back(SBarEntry::close(lo | low_mask(w - n.depth), n.depth, 0).coord);
  }
  std::sort(coords.begin(), coords.end());
  const auto order = nav_.traverse();
  if (order.size() != coords.size()) fail("navigation list has the wrong number of entries");
  for (std::size_t i = 0; i < order.size(); ++i)
    if (nav_.entry(order[i]).coord != coords[i]) fail("navigation list out of order at position " + std::to_string(i));

  // Every mandated ancestor-index key must hold its exact value; nothing else
  // may be stored.
  const bool wide = cfg_.variant == Variant::FastQuery5B;
  std::size_t mandated = 0;
  for (unsigned t = 0; t < geo_.top_order(); ++t) {
    const unsigned c = geo_.chunk(t);
    std::unordered_set<u128, U128Hash> branching_t;
    for (const auto& n : zs) branching_t.insert(geo_.encode(geo_.map_node(n, t)));
    std::unordered_set<u128, U128Hash> seen;
    for (Key k : keys) {
      for (unsigned d = 1; d < geo_.leaf_depth(t); ++d) {
        const NodeName node = geo_.on_path(t, d, k);
        const u128 code = geo_.encode(node);
        if (!seen.insert(code).second) continue;
        const unsigned da = lba_depth(geo_.t0_depth(node), k);
        const unsigned pa = da / c;
        const bool br = branching_t.count(code) != 0;
        if (!(br || d == pa + 1 || (wide && pa >= (d / cfg_.B) * cfg_.B))) continue;
        ++mandated;
        const std::uint64_t got = index_->lookup(code);
        if (got != da + 1)
          fail("ancestor index at " + to_string(node) + " holds " + std::to_string(got) + ", expected " +
               std::to_string(da + 1));
      }
    }
  }
  if (index_->size() != mandated)
    fail("ancestor index holds " + std::to_string(index_->size()) + " keys, expected " + std::to_string(mandated));
}

}  // namespace wordrange
