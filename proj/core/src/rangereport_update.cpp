#include <stdexcept>

#include "wordrange/rangereport.hpp"

namespace wordrange {

// Index keys whose membership or value can change when the branching node v
// (primary-trie depth dv) appears or disappears. For each order t with chunk
// c, m = map_t(v) sits at depth dv / c:
//   - m gains branching status unless another branching node already shares
//     its chunk (only v's ancestor or v's old-side descendant can);
//   - nodes on x's path below m are new, with v as lowest branching ancestor;
//   - nodes on the old path strictly below v and not below map_t(y) switch
//     their ancestor from v's ancestor to v.
// Everything else keeps its ancestor and branching status.
std::vector<RangeReporter::Transition> RangeReporter::transitions(const Change& ch) const {
  std::vector<Transition> out;
  const unsigned B = cfg_.B;
  const bool wide = cfg_.variant == Variant::FastQuery5B;
  auto mandated = [&](unsigned d, unsigned pa, bool branching) {
    return branching || d == pa + 1 || (wide && pa >= (d / B) * B);
  };

  for (unsigned t = 0; t < geo_.top_order(); ++t) {
    const unsigned c = geo_.chunk(t);
    const unsigned leaf = geo_.leaf_depth(t);
    const unsigned dm = ch.dv / c;

    if (ch.has_old && dm > 0) {
      const bool shared = (ch.anc_real && ch.da / c == dm) || (ch.y_real && ch.dy / c == dm);
      if (!shared) {
        const std::uint64_t val = ch.da + 1;
        const NodeName m = geo_.on_path(t, dm, ch.x);
        out.push_back({m, mandated(dm, ch.da / c, false) ? val : 0, val});
      }
    }

    for (unsigned d = dm + 1; d < leaf && (d == dm + 1 || (wide && (d / B) * B <= dm)); ++d)
      out.push_back({geo_.on_path(t, d, ch.x), 0, ch.dv + std::uint64_t{1}});

    if (!ch.has_old) continue;
    const unsigned dy = ch.y_real ? ch.dy / c : leaf - 1;
    auto old_node = [&](unsigned d) {
      const bool br = ch.y_real && d == dy;
      const std::uint64_t before = mandated(d, ch.da / c, br) ? ch.da + 1 : 0;
      const std::uint64_t after = mandated(d, dm, br) ? ch.dv + 1 : 0;
      out.push_back({geo_.on_path(t, d, ch.old_key), before, after});
    };
    unsigned d = dm + 1;
    for (; d <= dy && (d == dm + 1 || (wide && (d / B) * B <= dm)); ++d) old_node(d);
    if (ch.y_real && dy >= d) old_node(dy);
  }
  return out;
}

void RangeReporter::apply(const std::vector<Transition>& ts, bool inserting) {
  unsigned writes = 0;
  for (const auto& tr : ts) {
    const std::uint64_t from = inserting ? tr.without : tr.with;
    const std::uint64_t to = inserting ? tr.with : tr.without;
    if (from == to) continue;
    const u128 key = geo_.encode(tr.node);
    if (from != 0) index_->erase(key);
    if (to != 0) index_->insert(key, to);
    ++writes;
  }
  last_update_.index_writes = writes;
  UpdateStats& worst = inserting ? max_insert_ : max_erase_;
  worst.index_writes = std::max(worst.index_writes, writes);
}

std::pair<NavHandle, NavHandle> RangeReporter::group_of(const NodeName& u) const {
  if (geo_.is_leaf(u)) {
    const NavHandle h = leaves_.at(u.prefix).elem_h;
    return {h, h};
  }
  const BranchingRecord* r = record(u);
  return {r->open_h, r->close_h};
}

void RangeReporter::set_ancestor(const NodeName& u, const NodeName& anc) {
  if (geo_.is_leaf(u))
    leaves_.at(u.prefix).ancestor = anc;
  else
    mut_record(u)->ancestor = anc;
}

bool RangeReporter::insert(Key x) {
  if (x > geo_.params().max_key()) throw std::invalid_argument("key exceeds word width");
  if (contains(x)) return false;
  const NodeName root = geo_.t0(0, 0);
  const auto nb = pred_.insert(x);

  if (!nb.prev && !nb.next) {
    BranchingRecord r;
    r.node = root;
    r.desc[geo_.branch_bit(x, 0)] = geo_.leaf(x);
    records_.emplace(geo_.encode(root), r);
    leaves_.emplace(x, LeafRecord{root, nav_.push_back(SBarEntry::element(x))});
    apply(transitions(Change{0, x, 0, false, 0, false, 0, false}), true);
    if (cfg_.audit) audit();
    return true;
  }

  const unsigned lp = nb.prev ? lca_depth(x, *nb.prev, cfg_.w) : 0;
  const unsigned ln = nb.next ? lca_depth(x, *nb.next, cfg_.w) : 0;
  const Key e = (nb.prev && (!nb.next || lp >= ln)) ? *nb.prev : *nb.next;
  const unsigned dv = std::max(lp, ln);
  const NodeName v = geo_.t0(dv, x);
  const unsigned side_x = geo_.branch_bit(x, dv);

  BranchingRecord* anc = nullptr;
  if (dv > 0) {
    anc = const_cast<BranchingRecord*>(find_lba(v));
    if (!anc) throw std::logic_error("no lowest branching ancestor for an active node");
  }
  const BranchingRecord* host = dv > 0 ? anc : record(root);
  const NodeName y = *host->desc[geo_.branch_bit(e, host->node.depth)];

  const Change ch{dv, x, e, true, anc ? anc->node.depth : 0u, anc && anc->real,
                  y.depth, !geo_.is_leaf(y)};
  const auto ts = transitions(ch);

  const auto [first, last] = group_of(y);
  const Key lo = geo_.representative(v);
  const Key hi = lo | low_mask(cfg_.w - dv);
  const u128 owner = geo_.encode(v);
  NavHandle hx, open, close;
  if (side_x == 0) {
    hx = nav_.insert_before(first, SBarEntry::element(x));
    open = nav_.insert_before(hx, SBarEntry::open(lo, dv, owner));
    close = nav_.insert_after(last, SBarEntry::close(hi, dv, owner));
  } else {
    hx = nav_.insert_after(last, SBarEntry::element(x));
    open = nav_.insert_before(first, SBarEntry::open(lo, dv, owner));
    close = nav_.insert_after(hx, SBarEntry::close(hi, dv, owner));
  }

  if (dv == 0) {
    BranchingRecord* r = mut_record(root);
    r->real = true;
    r->desc[side_x] = geo_.leaf(x);
    r->open_h = open;
    r->close_h = close;
  } else {
    BranchingRecord r;
    r.node = v;
    r.ancestor = anc->node;
    r.desc[side_x] = geo_.leaf(x);
    r.desc[1 - side_x] = y;
    r.open_h = open;
    r.close_h = close;
    r.real = true;
    anc->desc[geo_.branch_bit(x, anc->node.depth)] = v;
    records_.emplace(owner, r);
    set_ancestor(y, v);
  }
  leaves_.emplace(x, LeafRecord{v, hx});
  apply(ts, true);
  if (cfg_.audit) audit();
  return true;
}

bool RangeReporter::erase(Key x) {
  auto it = leaves_.find(x);
  if (it == leaves_.end()) return false;
  const LeafRecord leaf = it->second;

  if (leaves_.size() == 1) {
    apply(transitions(Change{0, x, 0, false, 0, false, 0, false}), false);
    nav_.erase(leaf.elem_h);
    leaves_.clear();
    records_.clear();
    pred_.erase(x);
    if (cfg_.audit) audit();
    return true;
  }

  const NodeName v = leaf.ancestor;
  BranchingRecord* rv = mut_record(v);
  const unsigned dv = v.depth;
  const unsigned side_x = geo_.branch_bit(x, dv);
  const NodeName y = *rv->desc[1 - side_x];
  const std::optional<NodeName> anc_name = rv->ancestor;
  BranchingRecord* anc = anc_name ? mut_record(*anc_name) : nullptr;

  const Change ch{dv, x, geo_.representative(y), true, anc ? anc->node.depth : 0u,
                  anc && anc->real, y.depth, !geo_.is_leaf(y)};
  apply(transitions(ch), false);

  nav_.erase(leaf.elem_h);
  nav_.erase(rv->open_h);
  nav_.erase(rv->close_h);
  if (dv == 0) {
    rv->real = false;
    rv->desc[side_x].reset();
    rv->open_h = rv->close_h = kNoNav;
  } else {
    anc->desc[geo_.branch_bit(x, anc->node.depth)] = y;
    set_ancestor(y, anc->node);
    records_.erase(geo_.encode(v));
  }
  leaves_.erase(x);
  pred_.erase(x);
  if (cfg_.audit) audit();
  return true;
}

}  // namespace wordrange
