#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "doctest.h"
#include "kitchen/tasks.hpp"

using namespace kitchen;

namespace {

// reach[a][b]: b is reachable from a along edges.
std::vector<std::vector<bool>> closure(const TaskGraph& g) {
  const auto n = g.steps.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t root, std::size_t u) {
    for (auto [a, b] : g.edges) {
      if (static_cast<std::size_t>(a) != u || reach[root][static_cast<std::size_t>(b)]) continue;
      reach[root][static_cast<std::size_t>(b)] = true;
      dfs(root, static_cast<std::size_t>(b));
    }
  };
  for (std::size_t i = 0; i < n; ++i) dfs(i, i);
  return reach;
}

int max_antichain_brute_force(const TaskGraph& g) {
  const auto reach = closure(g);
  const auto n = g.steps.size();
  int best = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (i != j && (mask >> i & 1u) && (mask >> j & 1u) && reach[i][j]) ok = false;
    if (ok) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

bool acyclic(const TaskGraph& g) {
  const auto reach = closure(g);
  for (std::size_t i = 0; i < g.steps.size(); ++i)
    if (reach[i][i]) return false;
  return true;
}

std::vector<StepKind> kinds(const TaskGraph& g, std::initializer_list<StepId> ids) {
  std::vector<StepKind> out;
  for (auto id : ids) out.push_back(g.steps[static_cast<std::size_t>(id)].kind);
  return out;
}

std::set<StepId> ready_oracle(const MealInstance& m) {
  std::set<StepId> out;
  for (const auto& s : m.graph.steps) {
    if (m.state(s.id).status != StepStatus::Unclaimed) continue;
    bool all_done = true;
    for (auto [a, b] : m.graph.edges)
      if (b == s.id && m.state(a).status != StepStatus::Done) all_done = false;
    if (all_done) out.insert(s.id);
  }
  return out;
}

std::set<StepId> as_set(const std::vector<StepId>& v) { return {v.begin(), v.end()}; }

void finish(MealInstance& m, StepId s, Tick t = 0) {
  assign_step(m, s, 0);
  mark_done(m, s, 0, t);
}

}  // namespace

TEST_CASE("steak graph is the serial chain") {
  auto g = steak_graph();
  REQUIRE(g.steps.size() == 4);
  CHECK(kinds(g, {0, 1, 2, 3}) ==
        std::vector{StepKind::GetMeat, StepKind::GrillMeat, StepKind::PlateSteak, StepKind::ServeSteak});
  CHECK(g.edges.size() == 3);
  CHECK(max_antichain_brute_force(g) == 1);
  CHECK(acyclic(g));
}

TEST_CASE("soup graph has three parallel onion chains") {
  auto g = soup_graph();
  REQUIRE(g.steps.size() == 12);
  for (int c = 0; c < 3; ++c) {
    CHECK(kinds(g, {3 * c, 3 * c + 1, 3 * c + 2}) ==
          std::vector{StepKind::GetOnion, StepKind::ChopOnion, StepKind::PotOnion});
    CHECK(onion_chain(3 * c + 1) == c);
  }
  CHECK(max_antichain_brute_force(g) == 3);
  CHECK(acyclic(g));
  const auto cook = std::find_if(g.steps.begin(), g.steps.end(), [](auto& s) { return s.kind == StepKind::CookSoup; });
  REQUIRE(cook != g.steps.end());
  CHECK(g.predecessors[static_cast<std::size_t>(cook->id)].size() == 3);
  CHECK(kinds(g, {9, 10, 11}) == std::vector{StepKind::CookSoup, StepKind::PlateSoup, StepKind::ServeSoup});
}

TEST_CASE("step to specialty and station mapping") {
  CHECK(specialty_of(StepKind::GetMeat) == Specialty::Fetch);
  CHECK(specialty_of(StepKind::GetOnion) == Specialty::Fetch);
  CHECK(specialty_of(StepKind::ChopOnion) == Specialty::Chop);
  CHECK(specialty_of(StepKind::GrillMeat) == Specialty::Cook);
  CHECK(specialty_of(StepKind::PotOnion) == Specialty::Cook);
  CHECK(specialty_of(StepKind::CookSoup) == Specialty::Cook);
  CHECK(specialty_of(StepKind::PlateSteak) == Specialty::Serve);
  CHECK(specialty_of(StepKind::ServeSoup) == Specialty::Serve);
  CHECK(hands_on_duration(StepKind::ChopOnion) == 10);
  CHECK(hands_on_duration(StepKind::PlateSoup) == 5);
  CHECK(hands_on_duration(StepKind::ServeSteak) == 5);
  CHECK(hands_on_duration(StepKind::GetMeat) == 0);
  for (const auto& g : {steak_graph(), soup_graph()})
    for (const auto& s : g.steps) {
      CHECK(s.specialty == specialty_of(s.kind));
      CHECK(s.station == station_of(s.kind));
    }
}

TEST_CASE("order book composition") {
  auto book = build_order_book(0.5, 10, 10);
  auto meals = flatten(book);
  CHECK(meals.size() == 100);
  CHECK(std::count_if(meals.begin(), meals.end(), [](auto& m) { return m.kind == MealKind::OnionSoup; }) == 50);
  for (std::size_t i = 0; i < meals.size(); ++i) CHECK(meals[i].meal_id == static_cast<MealId>(i));
  // soups first within each order
  for (const auto& o : book) {
    CHECK(o.meals.size() == 10);
    CHECK(std::is_partitioned(o.meals.begin(), o.meals.end(), [](auto& m) { return m.kind == MealKind::OnionSoup; }));
  }

  auto steaks = flatten(build_order_book(0.0, 2, 4));
  CHECK(steaks.size() == 8);
  CHECK(std::all_of(steaks.begin(), steaks.end(), [](auto& m) { return m.kind == MealKind::Steak; }));

  auto soups = flatten(build_order_book(1.0, 1, 3));
  CHECK(soups.size() == 3);
  CHECK(std::all_of(soups.begin(), soups.end(), [](auto& m) { return m.kind == MealKind::OnionSoup; }));

  // round half up: 0.25 * 10 = 2.5 -> 3, 0.35 * 10 = 3.5 -> 4
  for (double r : {0.25, 0.35, 0.7, 0.05}) {
    auto m = flatten(build_order_book(r, 3, 10));
    const auto n = std::count_if(m.begin(), m.end(), [](auto& x) { return x.kind == MealKind::OnionSoup; });
    CHECK(n == static_cast<long>(std::floor(r * 10 + 0.5)) * 3);
  }
  CHECK_THROWS(build_order_book(1.5, 1, 1));
}

TEST_CASE("ready steps of fresh meals") {
  auto steak = make_meal(0, 0, MealKind::Steak);
  CHECK(ready_steps(steak) == std::vector<StepId>{0});
  auto soup = make_meal(1, 0, MealKind::OnionSoup);
  CHECK(ready_steps(soup) == std::vector<StepId>{0, 3, 6});
}

TEST_CASE("ready steps after one onion chain agrees with the predecessor oracle") {
  auto soup = make_meal(1, 0, MealKind::OnionSoup);
  finish(soup, 0);
  finish(soup, 1);
  finish(soup, 2);
  CHECK(as_set(ready_steps(soup)) == std::set<StepId>{3, 6});
  CHECK(as_set(ready_steps(soup)) == ready_oracle(soup));
}

TEST_CASE("ready steps agree with the predecessor oracle along random completion orders") {
  for (int trial = 0; trial < 200; ++trial) {
    auto m = make_meal(0, 0, trial % 2 ? MealKind::OnionSoup : MealKind::Steak);
    SplitMix64 rng(static_cast<std::uint64_t>(trial));
    while (!m.served_tick) {
      auto ready = ready_steps(m);
      CHECK(as_set(ready) == ready_oracle(m));
      REQUIRE(!ready.empty());
      const StepId s = ready[rng.below(ready.size())];
      for (auto p : m.graph.predecessors[static_cast<std::size_t>(s)]) CHECK(m.state(p).status == StepStatus::Done);
      finish(m, s, 7);
    }
    CHECK(*m.served_tick == 7);
  }
}

TEST_CASE("mark_done protocol errors") {
  auto m = make_meal(0, 0, MealKind::Steak);
  CHECK_THROWS_AS(mark_done(m, 0, 0, 1), ProtocolError);  // unassigned
  assign_step(m, 0, 2);
  CHECK_THROWS_AS(mark_done(m, 0, 1, 1), ProtocolError);  // not the assignee
  mark_done(m, 0, 2, 1);
  CHECK_THROWS_AS(mark_done(m, 0, 2, 2), ProtocolError);  // already done
  CHECK(m.state(0).status == StepStatus::Done);
}

TEST_CASE("serving sets served_tick") {
  auto m = make_meal(0, 0, MealKind::Steak);
  finish(m, 0);
  finish(m, 1);
  finish(m, 2);
  CHECK(!m.served_tick);
  finish(m, 3, 412);
  CHECK(m.served_tick == 412);
}

TEST_CASE("cook step completes without an assignee") {
  auto m = make_meal(0, 0, MealKind::OnionSoup);
  for (StepId s = 0; s < 9; ++s) finish(m, s);
  CHECK(ready_steps(m) == std::vector<StepId>{9});
  mark_done_autonomous(m, 9);
  CHECK(m.state(9).status == StepStatus::Done);
  CHECK(m.state(9).assignee == -1);
  CHECK(ready_steps(m) == std::vector<StepId>{10});
}
