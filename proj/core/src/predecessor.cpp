#include "wordrange/predecessor.hpp"

#include <algorithm>
#include <stdexcept>

namespace wordrange {

// ---------------------------------------------------------------- YFastTrie

YFastTrie::YFastTrie(unsigned w)
    : w_(w), max_bucket_(2 * std::size_t{w}), min_bucket_(std::max<std::size_t>(1, w / 4)),
      levels_(w + 1) {
  // Representative 0 is a permanent sentinel; its bucket may be empty.
  for (unsigned l = 0; l <= w_; ++l) levels_[l].emplace(0, XNode{0, 0});
  reps_.emplace(0, RepLinks{});
  buckets_.emplace(0, std::vector<Key>{});
}

Key YFastTrie::pred_rep(Key x) const {
  if (levels_[w_].count(x)) return x;
  unsigned lo = 0, hi = w_;  // prefix of length lo present, length hi absent
  while (hi - lo > 1) {
    const unsigned mid = (lo + hi) / 2;
    if (levels_[mid].count(prefix(x, mid)))
      lo = mid;
    else
      hi = mid;
  }
  const XNode& node = levels_[lo].at(prefix(x, lo));
  const unsigned bit = static_cast<unsigned>((x >> (w_ - 1 - lo)) & 1u);
  if (bit == 1) return node.max_rep;
  return *reps_.at(node.min_rep).prev;
}

void YFastTrie::xfast_insert(Key rep) {
  const Key p = pred_rep(rep);
  RepLinks links{p, reps_.at(p).next};
  if (links.next) reps_.at(*links.next).prev = rep;
  reps_.at(p).next = rep;
  reps_.emplace(rep, links);
  for (unsigned l = 0; l <= w_; ++l) {
    auto [it, fresh] = levels_[l].try_emplace(prefix(rep, l), XNode{rep, rep});
    if (!fresh) {
      it->second.min_rep = std::min(it->second.min_rep, rep);
      it->second.max_rep = std::max(it->second.max_rep, rep);
    }
  }
}

void YFastTrie::xfast_erase(Key rep) {
  const RepLinks links = reps_.at(rep);
  for (unsigned l = 0; l <= w_; ++l) {
    auto it = levels_[l].find(prefix(rep, l));
    XNode& node = it->second;
    if (node.min_rep == rep && node.max_rep == rep) {
      levels_[l].erase(it);
      continue;
    }
    if (node.min_rep == rep) node.min_rep = *links.next;
    if (node.max_rep == rep) node.max_rep = *links.prev;
  }
  reps_.at(*links.prev).next = links.next;
  if (links.next) reps_.at(*links.next).prev = links.prev;
  reps_.erase(rep);
}

void YFastTrie::maybe_split(Key rep) {
  auto& bucket = buckets_.at(rep);
  if (bucket.size() <= max_bucket_) return;
  const std::size_t mid = bucket.size() / 2;
  std::vector<Key> upper(bucket.begin() + static_cast<std::ptrdiff_t>(mid), bucket.end());
  bucket.resize(mid);
  const Key new_rep = upper.front();
  buckets_.emplace(new_rep, std::move(upper));
  xfast_insert(new_rep);
}

void YFastTrie::maybe_merge(Key rep) {
  if (rep == 0) return;
  auto it = buckets_.find(rep);
  if (it->second.size() >= min_bucket_) return;
  const Key prev = *reps_.at(rep).prev;
  auto& target = buckets_.at(prev);
  target.insert(target.end(), it->second.begin(), it->second.end());
  buckets_.erase(it);
  xfast_erase(rep);
  maybe_split(prev);
}

bool YFastTrie::insert(Key x) {
  const Key r = pred_rep(x);
  auto& bucket = buckets_.at(r);
  auto pos = std::lower_bound(bucket.begin(), bucket.end(), x);
  if (pos != bucket.end() && *pos == x) return false;
  bucket.insert(pos, x);
  ++size_;
  maybe_split(r);
  return true;
}

bool YFastTrie::erase(Key x) {
  const Key r = pred_rep(x);
  auto& bucket = buckets_.at(r);
  auto pos = std::lower_bound(bucket.begin(), bucket.end(), x);
  if (pos == bucket.end() || *pos != x) return false;
  bucket.erase(pos);
  --size_;
  maybe_merge(r);
  return true;
}

bool YFastTrie::contains(Key x) const {
  const auto& bucket = buckets_.at(pred_rep(x));
  return std::binary_search(bucket.begin(), bucket.end(), x);
}

std::optional<Key> YFastTrie::pred(Key x) const {
  const Key r = pred_rep(x);
  const auto& bucket = buckets_.at(r);
  auto it = std::upper_bound(bucket.begin(), bucket.end(), x);
  if (it != bucket.begin()) return *(it - 1);
  const auto prev = reps_.at(r).prev;
  if (!prev) return std::nullopt;
  const auto& pb = buckets_.at(*prev);
  if (pb.empty()) return std::nullopt;
  return pb.back();
}

std::optional<Key> YFastTrie::succ(Key x) const {
  const Key r = pred_rep(x);
  const auto& bucket = buckets_.at(r);
  auto it = std::lower_bound(bucket.begin(), bucket.end(), x);
  if (it != bucket.end()) return *it;
  const auto next = reps_.at(r).next;
  if (!next) return std::nullopt;
  return buckets_.at(*next).front();
}

bool YFastTrie::check() const {
  std::size_t total = 0;
  std::optional<Key> rep = Key{0};
  std::optional<Key> prev_rep;
  while (rep) {
    const auto& links = reps_.at(*rep);
    if (links.prev != prev_rep) return false;
    const auto& bucket = buckets_.at(*rep);
    if (*rep != 0 && (bucket.empty() || bucket.size() > max_bucket_)) return false;
    if (!std::is_sorted(bucket.begin(), bucket.end())) return false;
    if (!bucket.empty() && bucket.front() < *rep) return false;
    if (links.next && !bucket.empty() && bucket.back() >= *links.next) return false;
    for (unsigned l = 0; l <= w_; ++l) {
      auto it = levels_[l].find(prefix(*rep, l));
      if (it == levels_[l].end() || it->second.min_rep > *rep || it->second.max_rep < *rep)
        return false;
    }
    total += bucket.size();
    prev_rep = rep;
    rep = links.next;
  }
  return total == size_ && reps_.size() == buckets_.size();
}

// ---------------------------------------------------------------- PredSet

PredSet::PredSet(unsigned w, PredBackend backend) : w_(w), backend_(backend) {
  if (backend == PredBackend::YFast) yfast_ = std::make_unique<YFastTrie>(w);
}

std::optional<Key> PredSet::backend_pred(Key x) const {
  if (yfast_) return yfast_->pred(x);
  auto it = ordered_.upper_bound(x);
  if (it == ordered_.begin()) return std::nullopt;
  return *std::prev(it);
}

std::optional<Key> PredSet::backend_succ(Key x) const {
  if (yfast_) return yfast_->succ(x);
  auto it = ordered_.lower_bound(x);
  if (it == ordered_.end()) return std::nullopt;
  return *it;
}

PredSet::InsertResult PredSet::insert(Key x) {
  if (w_ < 64 && (x >> w_) != 0) throw std::invalid_argument("key exceeds word width");
  if (contains(x)) return {false, std::nullopt, std::nullopt};
  InsertResult r{true, backend_pred(x), std::nullopt};
  r.next = r.prev ? links_.at(*r.prev).next : head_;
  if (yfast_)
    yfast_->insert(x);
  else
    ordered_.insert(x);
  links_.emplace(x, Links{r.prev, r.next});
  if (r.prev)
    links_.at(*r.prev).next = x;
  else
    head_ = x;
  if (r.next)
    links_.at(*r.next).prev = x;
  else
    tail_ = x;
  return r;
}

bool PredSet::erase(Key x) {
  auto it = links_.find(x);
  if (it == links_.end()) return false;
  const Links l = it->second;
  if (l.prev)
    links_.at(*l.prev).next = l.next;
  else
    head_ = l.next;
  if (l.next)
    links_.at(*l.next).prev = l.prev;
  else
    tail_ = l.prev;
  links_.erase(it);
  if (yfast_)
    yfast_->erase(x);
  else
    ordered_.erase(x);
  return true;
}

std::optional<Key> PredSet::pred(Key x) const {
  ++queries_;
  return backend_pred(x);
}

std::optional<Key> PredSet::succ(Key x) const {
  ++queries_;
  return backend_succ(x);
}

std::optional<Key> PredSet::list_prev(Key x) const {
  auto it = links_.find(x);
  return it == links_.end() ? std::nullopt : it->second.prev;
}

std::optional<Key> PredSet::list_next(Key x) const {
  auto it = links_.find(x);
  return it == links_.end() ? std::nullopt : it->second.next;
}

bool PredSet::check() const {
  if (yfast_ && (!yfast_->check() || yfast_->size() != links_.size())) return false;
  if (!yfast_ && ordered_.size() != links_.size()) return false;
  std::optional<Key> cur = head_, prev;
  std::size_t n = 0;
  while (cur) {
    const auto& l = links_.at(*cur);
    if (l.prev != prev) return false;
    if (prev && *prev >= *cur) return false;
    if (backend_pred(*cur) != cur) return false;
    prev = cur;
    cur = l.next;
    ++n;
  }
  return prev == tail_ && n == links_.size();
}

}  // namespace wordrange
