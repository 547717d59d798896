#include <doctest.h>

#include <iterator>
#include <map>
#include <random>
#include <vector>

#include "wordrange/navlist.hpp"

using namespace wordrange;

namespace {

// Naive mirror: entries keyed by coordinate. Each element x is wrapped in up
// to three nested parenthesis pairs spanning [x, x], which keeps every pair
// non-empty and every run of parentheses short.
struct Mirror {
  NavList nav;
  std::map<u128, NavHandle> by_coord;
  std::map<Key, std::vector<NavHandle>> groups;

  explicit Mirror(unsigned w) : nav(w, true) {}

  NavHandle place(const SBarEntry& e) {
    auto next = by_coord.upper_bound(e.coord);
    const NavHandle h = next == by_coord.end() ? nav.push_back(e) : nav.insert_before(next->second, e);
    by_coord[e.coord] = h;
    return h;
  }

  void add(Key x, unsigned wraps) {
    auto& g = groups[x];
    g.push_back(place(SBarEntry::element(x)));
    for (unsigned d = 0; d < wraps; ++d) {
      g.push_back(place(SBarEntry::open(x, d, x * 4 + d)));
      g.push_back(place(SBarEntry::close(x, d, x * 4 + d)));
    }
  }

  void remove(Key x) {
    for (NavHandle h : groups[x]) {
      by_coord.erase(nav.entry(h).coord);
      nav.erase(h);
    }
    groups.erase(x);
  }

  std::vector<NavHandle> order() const {
    std::vector<NavHandle> out;
    for (const auto& [_, h] : by_coord) out.push_back(h);
    return out;
  }

  NavHandle naive_left(NavHandle h) const {
    for (auto it = by_coord.find(nav.entry(h).coord);; --it) {
      if (nav.entry(it->second).kind == EntryKind::Element) return it->second;
      if (it == by_coord.begin()) return kNoNav;
    }
  }

  NavHandle naive_right(NavHandle h) const {
    for (auto it = by_coord.find(nav.entry(h).coord); it != by_coord.end(); ++it)
      if (nav.entry(it->second).kind == EntryKind::Element) return it->second;
    return kNoNav;
  }
};

}  // namespace

TEST_CASE("coordinates order nested parentheses") {
  const auto e = SBarEntry::element(5);
  const auto outer_open = SBarEntry::open(5, 1, 0);
  const auto inner_open = SBarEntry::open(5, 2, 0);
  const auto inner_close = SBarEntry::close(5, 2, 0);
  const auto outer_close = SBarEntry::close(5, 1, 0);
  CHECK(outer_open.coord < inner_open.coord);
  CHECK(inner_open.coord < e.coord);
  CHECK(e.coord < inner_close.coord);
  CHECK(inner_close.coord < outer_close.coord);
  CHECK(outer_close.coord < SBarEntry::open(6, 0, 0).coord);
}

TEST_CASE("single element") {
  NavList nav(64);
  const NavHandle h = nav.push_back(SBarEntry::element(5));
  CHECK(nav.size() == 1);
  CHECK(nav.nearest_element_left(h) == h);
  CHECK(nav.nearest_element_right(h) == h);
  CHECK_FALSE(nav.audit().has_value());
  nav.erase(h);
  CHECK(nav.empty());
  CHECK(nav.first() == kNoNav);
  CHECK_THROWS_AS(nav.erase(h), std::invalid_argument);
}

TEST_CASE("open close element") {
  NavList nav(8, true);
  const NavHandle e = nav.push_back(SBarEntry::element(5));
  const NavHandle o = nav.insert_before(e, SBarEntry::open(4, 3, 77));
  const NavHandle c = nav.insert_after(e, SBarEntry::close(6, 3, 77));
  CHECK(nav.traverse() == std::vector<NavHandle>{o, e, c});
  CHECK(nav.nearest_element_left(c) == e);
  CHECK(nav.nearest_element_right(o) == e);
  CHECK(nav.nearest_element_left(o) == kNoNav);
  CHECK(nav.nearest_element_right(c) == kNoNav);
  CHECK_FALSE(nav.audit().has_value());
  CHECK_THROWS_AS(nav.insert_before(o, SBarEntry::element(9)), std::logic_error);
}

TEST_CASE("random valid insertions and deletions match a naive list") {
  for (unsigned w : {8u, 16u, 64u}) {
    CAPTURE(w);
    Mirror m(w);
    std::mt19937_64 rng(w);
    const Key mask = low_mask(w);
    std::vector<Key> live;
    const int ops = w == 8 ? 4000 : 100000;
    for (int op = 0; op < ops; ++op) {
      const bool grow = live.empty() || rng() % 100 < (op < ops / 2 ? 70 : 30);
      if (grow) {
        const Key x = rng() & mask;
        if (m.groups.count(x)) continue;
        m.add(x, static_cast<unsigned>(rng() % 4));
        live.push_back(x);
      } else {
        const std::size_t i = rng() % live.size();
        m.remove(live[i]);
        live[i] = live.back();
        live.pop_back();
      }
      if (m.by_coord.empty()) continue;
      for (int q = 0; q < 4; ++q) {
        auto it = m.by_coord.begin();
        std::advance(it, rng() % std::min<std::size_t>(m.by_coord.size(), 64));
        REQUIRE(m.nav.nearest_element_left(it->second) == m.naive_left(it->second));
        REQUIRE(m.nav.nearest_element_right(it->second) == m.naive_right(it->second));
      }
      if (w == 8 || op % 5000 == 0) {
        const auto bad = m.nav.audit();
        REQUIRE_MESSAGE(!bad, *bad);
        REQUIRE(m.nav.traverse() == m.order());
      }
    }
    CHECK(m.nav.traverse() == m.order());
    CHECK(m.nav.max_examined() <= 6);
    while (!live.empty()) {
      m.remove(live.back());
      live.pop_back();
    }
    CHECK(m.nav.empty());
    CHECK_FALSE(m.nav.audit().has_value());
  }
}

TEST_CASE("queries at uniformly spread positions") {
  Mirror m(64);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20000; ++i) {
    const Key x = rng();
    if (!m.groups.count(x)) m.add(x, static_cast<unsigned>(rng() % 4));
  }
  const auto order = m.order();
  for (int q = 0; q < 20000; ++q) {
    const NavHandle h = order[rng() % order.size()];
    REQUIRE(m.nav.nearest_element_left(h) == m.naive_left(h));
    REQUIRE(m.nav.nearest_element_right(h) == m.naive_right(h));
    REQUIRE(m.nav.last_examined() <= 6);
  }
  CHECK_FALSE(m.nav.audit().has_value());
}
