#include "wordrange/gtgame.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace wordrange {

bool BitMemory::read(std::uint64_t addr) {
  ++reads_;
  auto it = words_.find(addr >> 6);
  return it != words_.end() && ((it->second >> (addr & 63)) & 1u);
}

void BitMemory::write(std::uint64_t addr, bool value) {
  ++writes_;
  std::uint64_t& word = words_[addr >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (addr & 63);
  word = value ? (word | bit) : (word & ~bit);
}

std::string to_string(GtStrategy s) { return s == GtStrategy::QueryHeavy ? "query-heavy" : "update-heavy"; }

GtStrategy parse_strategy(const std::string& s) {
  if (s == "query-heavy" || s == "1") return GtStrategy::QueryHeavy;
  if (s == "update-heavy" || s == "2") return GtStrategy::UpdateHeavy;
  throw std::invalid_argument("unknown strategy: " + s);
}

namespace {

unsigned ceil_lg(std::uint64_t x) {
  unsigned r = 0;
  while ((std::uint64_t{1} << r) < x) ++r;
  return r;
}

}  // namespace

GtScheme::GtScheme(std::uint64_t n, std::uint64_t B, GtStrategy strategy)
    : n_(n), B_(B), strategy_(strategy) {
  if (n < 2) throw std::invalid_argument("domain size must be at least 2");
  if (B < 2) throw std::invalid_argument("branching factor must be at least 2");
  pow_.push_back(1);
  while (pow_.back() < n) {
    pow_.push_back(pow_.back() * B);
    ++L_;
  }
  path_off_.assign(L_ + 1, 0);
  sib_off_.assign(L_ + 1, 0);
  std::uint64_t off = 0;
  for (unsigned l = 1; l <= L_; ++l) {
    path_off_[l] = off;
    off += (n - 1) / pow_[L_ - l] + 1;
  }
  for (unsigned l = 1; l <= L_; ++l) {
    sib_off_[l] = off;
    off += (n - 1) / pow_[L_ - l] + 1;
  }
}

unsigned GtScheme::update(BitMemory& m, std::uint64_t a) const {
  if (a >= n_) throw std::out_of_range("update value outside the domain");
  if (!m.fresh()) throw std::logic_error("memory already holds an update");
  const std::uint64_t before = m.writes();
  for (unsigned l = 1; l <= L_; ++l) {
    const std::uint64_t node = node_at(l, a);
    m.write(path_bit(l, node), true);
    if (strategy_ == GtStrategy::UpdateHeavy)
      for (std::uint64_t s = node - node % B_; s < node; ++s) m.write(sibling_bit(l, s), true);
  }
  return static_cast<unsigned>(m.writes() - before);
}

GtAnswer GtScheme::query(BitMemory& m, std::uint64_t b) const {
  if (b >= n_) throw std::out_of_range("query value outside the domain");
  const std::uint64_t before = m.reads();
  // b's path is marked on levels [1, lo) and unmarked on [hi, L].
  unsigned lo = 1, hi = L_ + 1;
  while (lo < hi) {
    const unsigned mid = (lo + hi) / 2;
    if (m.read(path_bit(mid, node_at(mid, b))))
      lo = mid + 1;
    else
      hi = mid;
  }
  GtAnswer ans;
  if (lo <= L_) {
    const std::uint64_t node = node_at(lo, b);
    if (strategy_ == GtStrategy::QueryHeavy) {
      for (std::uint64_t s = node - node % B_; s < node && !ans.greater; ++s)
        ans.greater = m.read(path_bit(lo, s));
    } else {
      ans.greater = !m.read(sibling_bit(lo, node));
    }
  }
  ans.probes = static_cast<unsigned>(m.reads() - before);
  return ans;
}

unsigned GtScheme::write_bound() const {
  return strategy_ == GtStrategy::QueryHeavy ? L_ : L_ + static_cast<unsigned>(B_ - 1) * L_;
}

unsigned GtScheme::read_bound() const {
  const unsigned search = ceil_lg(L_ + 1);
  return strategy_ == GtStrategy::QueryHeavy ? search + static_cast<unsigned>(B_ - 1) : search + 1;
}

std::vector<GtRow> gt_sweep(std::uint64_t n, const std::vector<std::uint64_t>& Bs,
                            const std::vector<GtStrategy>& strategies, std::uint64_t trials,
                            std::uint64_t seed) {
  std::vector<GtRow> rows;
  for (std::uint64_t B : Bs) {
    for (GtStrategy st : strategies) {
      const GtScheme scheme(n, B, st);
      GtRow row;
      row.B = B;
      row.strategy = st;
      row.levels = scheme.levels();
      double tu_sum = 0, tq_sum = 0;
      std::uint64_t updates = 0;
      auto play_query = [&](BitMemory& m, std::uint64_t a, std::uint64_t b) {
        const GtAnswer ans = scheme.query(m, b);
        row.tq_max = std::max(row.tq_max, ans.probes);
        tq_sum += ans.probes;
        ++row.pairs;
        if (ans.greater != (b > a)) ++row.errors;
      };
      auto play_update = [&](BitMemory& m, std::uint64_t a) {
        const unsigned tu = scheme.update(m, a);
        row.tu_max = std::max(row.tu_max, tu);
        tu_sum += tu;
        ++updates;
      };
      if (trials == 0) {
        for (std::uint64_t a = 0; a < n; ++a) {
          BitMemory m;
          play_update(m, a);
          for (std::uint64_t b = 0; b < n; ++b) play_query(m, a, b);
        }
      } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
        for (std::uint64_t i = 0; i < trials; ++i) {
          const std::uint64_t a = pick(rng), b = pick(rng);
          BitMemory m;
          play_update(m, a);
          play_query(m, a, b);
        }
      }
      row.tu_mean = updates ? tu_sum / static_cast<double>(updates) : 0;
      row.tq_mean = row.pairs ? tq_sum / static_cast<double>(row.pairs) : 0;
      row.within_bounds = row.tu_max <= scheme.write_bound() && row.tq_max <= scheme.read_bound();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace wordrange
