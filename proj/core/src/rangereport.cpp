#include "wordrange/rangereport.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "wordrange/bloomier.hpp"

namespace wordrange {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Core: return "core";
    case Variant::FastUpdate5A: return "5a";
    case Variant::FastQuery5B: return "5b";
  }
  return "?";
}

std::string to_string(IndexBackend b) { return b == IndexBackend::Exact ? "exact" : "bloomier"; }

Variant parse_variant(const std::string& s) {
  if (s == "core") return Variant::Core;
  if (s == "5a" || s == "5A") return Variant::FastUpdate5A;
  if (s == "5b" || s == "5B") return Variant::FastQuery5B;
  throw std::invalid_argument("unknown variant: " + s);
}

IndexBackend parse_backend(const std::string& s) {
  if (s == "exact") return IndexBackend::Exact;
  if (s == "bloomier") return IndexBackend::Bloomier;
  throw std::invalid_argument("unknown backend: " + s);
}

void RangeConfig::validate() const {
  const WordParams p = WordParams::make(w);
  if (variant == Variant::Core && B != 2) throw std::invalid_argument("the core variant needs B = 2");
  TrieGeometry check(p, B);
  (void)check;
}

namespace {

RangeConfig checked(RangeConfig cfg) {
  cfg.validate();
  if (cfg.capacity == 0) cfg.capacity = cfg.w >= 17 ? std::size_t{1} << 17 : std::size_t{1} << cfg.w;
  return cfg;
}

std::unique_ptr<ValueStore> make_index(const RangeConfig& cfg, const TrieGeometry& geo) {
  const unsigned key_bits = geo.encoded_bits();
  const unsigned value_bits = bits_for(cfg.w);
  if (cfg.backend == IndexBackend::Exact)
    return std::make_unique<ExactStore>(key_bits, value_bits, cfg.seed);
  const std::size_t per_node = cfg.variant == Variant::FastQuery5B ? 2 * std::size_t{cfg.B} : 4;
  std::size_t n = per_node * cfg.capacity * (geo.top_order() + 2);
  if (key_bits < 64) n = std::min<std::size_t>(n, std::size_t{1} << (key_bits - 1));
  BloomierConfig bc;
  bc.n = n;
  bc.u_bits = key_bits;
  bc.r = value_bits;
  bc.epsilon = 0.25;
  bc.seed = cfg.seed;
  return std::make_unique<BloomierFilter>(bc);
}

}  // namespace

RangeReporter::RangeReporter(const RangeConfig& cfg)
    : cfg_(checked(cfg)),
      geo_(WordParams::make(cfg_.w), cfg_.B),
      pred_(cfg_.w, cfg_.pred),
      nav_(cfg_.w, cfg_.audit),
      index_(make_index(cfg_, geo_)) {}

RangeReporter::~RangeReporter() = default;

const BranchingRecord* RangeReporter::record(const NodeName& n) const {
  auto it = records_.find(geo_.encode(n));
  return it == records_.end() ? nullptr : &it->second;
}

BranchingRecord* RangeReporter::mut_record(const NodeName& n) {
  auto it = records_.find(geo_.encode(n));
  return it == records_.end() ? nullptr : &it->second;
}

const LeafRecord* RangeReporter::leaf_record(Key x) const {
  auto it = leaves_.find(x);
  return it == leaves_.end() ? nullptr : &it->second;
}

std::size_t RangeReporter::branching_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& kv) { return kv.second.real; }));
}

void RangeReporter::reset_stats() {
  cur_query_ = last_query_ = max_query_ = {};
  last_update_ = max_insert_ = max_erase_ = {};
}

std::size_t RangeReporter::space_bits() const {
  const std::size_t name = geo_.encoded_bits();
  const std::size_t rec = 4 * name + 2 * 32 + 1;
  const std::size_t leaf = cfg_.w + name + 32;
  return index_->space_bits() + records_.size() * rec + leaves_.size() * leaf;
}

// ---------------------------------------------------------------- queries

std::uint64_t RangeReporter::read_index(const NodeName& n) const {
  ++cur_query_.filter_reads;
  return index_->lookup(geo_.encode(n));
}

bool RangeReporter::test_branching(const NodeName& y) const {
  ++cur_query_.test_branching;
  if (y.depth == 0) return true;
  if (geo_.is_leaf(y)) return false;
  const std::uint64_t val = read_index(y);
  if (val == 0) return false;
  const unsigned da = static_cast<unsigned>(val - 1);
  if (da >= geo_.t0_depth(y)) return false;
  const BranchingRecord* rec = record(geo_.t0(da, geo_.representative(y)));
  if (!rec) return false;
  for (const auto& d : rec->desc)
    if (d && geo_.map_node(*d, y.order) == y) return true;
  return false;
}

bool RangeReporter::verify_lba(const BranchingRecord& cand, const NodeName& v) const {
  if (!geo_.is_strict_ancestor(cand.node, v)) return false;
  const unsigned side = geo_.branch_bit(geo_.representative(v), cand.node.depth);
  const auto& d = cand.desc[side];
  return d && geo_.in_subtree(v, *d);
}

const BranchingRecord* RangeReporter::candidate_from(const NodeName& key, const NodeName& v) const {
  const std::uint64_t val = read_index(key);
  if (val == 0 || val - 1 >= v.depth) return nullptr;
  const BranchingRecord* rec = record(geo_.t0(static_cast<unsigned>(val - 1), geo_.representative(v)));
  return rec && verify_lba(*rec, v) ? rec : nullptr;
}

const BranchingRecord* RangeReporter::find_lba(const NodeName& v) const {
  unsigned lo = 1, hi = geo_.top_order();
  while (lo < hi) {
    const unsigned mid = (lo + hi) / 2;
    if (test_branching(geo_.map_node(v, mid)))
      hi = mid;
    else
      lo = mid + 1;
  }
  const NodeName y = geo_.map_node(v, lo);
  const NodeName z = lo == 1 ? v : geo_.map_node(v, lo - 1);
  const SubtreeRole role = natural_subtree_role(z.depth, cfg_.B);

  if (cfg_.variant == Variant::Core) {
    if (role == SubtreeRole::Interior) return candidate_from(z, v);
    return y.depth == 0 ? nullptr : candidate_from(y, v);
  }
  if (y.depth != 0)
    if (const BranchingRecord* rec = candidate_from(y, v)) return rec;
  if (role == SubtreeRole::Root) return nullptr;
  if (cfg_.variant == Variant::FastQuery5B) return candidate_from(z, v);
  const Key rep = geo_.representative(v);
  for (unsigned d = z.depth; d > cfg_.B * y.depth; --d)
    if (const BranchingRecord* rec = candidate_from(geo_.on_path(z.order, d, rep), v)) return rec;
  return nullptr;
}

Key RangeReporter::min_under(const NodeName& u) const {
  if (geo_.is_leaf(u)) return u.prefix;
  ++cur_query_.navlist_queries;
  return static_cast<Key>(nav_.entry(nav_.nearest_element_right(record(u)->open_h)).owner);
}

Key RangeReporter::max_under(const NodeName& u) const {
  if (geo_.is_leaf(u)) return u.prefix;
  ++cur_query_.navlist_queries;
  return static_cast<Key>(nav_.entry(nav_.nearest_element_left(record(u)->close_h)).owner);
}

void RangeReporter::finish_query() const {
  last_query_ = cur_query_;
  max_query_.test_branching = std::max(max_query_.test_branching, cur_query_.test_branching);
  max_query_.navlist_queries = std::max(max_query_.navlist_queries, cur_query_.navlist_queries);
  max_query_.pred_queries = std::max(max_query_.pred_queries, cur_query_.pred_queries);
  max_query_.filter_reads = std::max(max_query_.filter_reads, cur_query_.filter_reads);
}

std::optional<Key> RangeReporter::findany(Key a, Key b) const {
  if (a > b) throw std::invalid_argument("empty interval");
  if (b > geo_.params().max_key()) throw std::invalid_argument("key exceeds word width");
  cur_query_ = {};
  const std::uint64_t pred_before = pred_.query_count();

  auto pick = [&](std::optional<Key> lo_side, std::optional<Key> hi_side) -> std::optional<Key> {
    for (const auto& c : {lo_side, hi_side})
      if (c && *c >= a && *c <= b) return c;
    return std::nullopt;
  };
  auto answer = [&]() -> std::optional<Key> {
    if (empty()) return std::nullopt;
    if (a == b) return contains(a) ? std::optional<Key>(a) : std::nullopt;
    const unsigned dv = lca_depth(a, b, cfg_.w);
    const NodeName v = geo_.t0(dv, a);
    const BranchingRecord* rec = record(v);
    if (rec && rec->real) return pick(max_under(*rec->desc[0]), min_under(*rec->desc[1]));
    if (dv == 0) {
      const auto& u = rec->desc[0] ? *rec->desc[0] : *rec->desc[1];
      return pick(max_under(u), min_under(u));
    }
    const BranchingRecord* lba = find_lba(v);
    if (!lba) return std::nullopt;
    const NodeName& u = *lba->desc[geo_.branch_bit(a, lba->node.depth)];
    return pick(max_under(u), min_under(u));
  };

  const auto out = answer();
  cur_query_.pred_queries = static_cast<unsigned>(pred_.query_count() - pred_before);
  finish_query();
  return out;
}

std::vector<Key> RangeReporter::report(Key a, Key b) const {
  std::vector<Key> out;
  const auto seed = findany(a, b);
  if (!seed) return out;
  for (auto k = pred_.list_prev(*seed); k && *k >= a; k = pred_.list_prev(*k)) out.push_back(*k);
  std::reverse(out.begin(), out.end());
  for (std::optional<Key> k = *seed; k && *k <= b; k = pred_.list_next(*k)) out.push_back(*k);
  return out;
}

std::string RangeReporter::dump() const {
  std::vector<const BranchingRecord*> recs;
  for (const auto& kv : records_) recs.push_back(&kv.second);
  std::sort(recs.begin(), recs.end(), [](auto* l, auto* r) { return l->node < r->node; });
  auto name = [](const std::optional<NodeName>& n) { return n ? to_string(*n) : std::string("-"); };
  std::ostringstream os;
  for (const auto* r : recs) {
    os << to_string(r->node) << (r->real ? "" : " virtual") << " anc="
       << (r->ancestor ? std::to_string(r->ancestor->depth) : std::string("-")) << " L=" << name(r->desc[0])
       << " R=" << name(r->desc[1]) << '\n';
  }
  return os.str();
}

}  // namespace wordrange
