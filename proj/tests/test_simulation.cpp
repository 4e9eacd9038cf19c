#include <algorithm>
#include <set>
#include <deque>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "kitchen/simulation.hpp"

using namespace kitchen;
using fixtures::agent;

namespace {

Simulation make_sim(std::string_view layout, std::vector<AgentState> agents, std::vector<MealInstance> meals,
                    std::uint64_t seed = 1, int cost = 25) {
  RecipeNeeds needs{false, false};
  for (const auto& m : meals) (m.kind == MealKind::Steak ? needs.steak : needs.soup) = true;
  auto w = parse_layout(layout, needs);
  w.rng = SplitMix64(seed);
  SimConfig cfg;
  cfg.comm.cost = cost;
  return Simulation(std::move(w), std::move(agents), std::move(meals), cfg);
}

Simulation random_sim(std::uint64_t seed, double sa, int team, int cost) {
  SplitMix64 rng(seed);
  PersonaMix mix;
  mix.frac_skill_assertion = sa;
  mix.frac_initiative = 0.5;
  mix.frac_join_existing = 0.5;
  mix.agreeableness = AgreeablenessSpec::parse("uniform(0.3,1)");
  auto agents = assign_personas(team, mix, rng);
  auto w = parse_layout(fixtures::kSmallKitchen);
  w.rng = rng;
  SimConfig cfg;
  cfg.comm.cost = cost;
  return Simulation(std::move(w), std::move(agents), flatten(build_order_book(0.5, 2, 5)), cfg);
}

const std::vector<std::string> kSteakRoom = {
    "#######",
    "M.....G",
    "#..A..#",
    "D.....S",
    "#######",
};

std::string joined(const std::vector<std::string>& rows) {
  std::string s;
  for (const auto& r : rows) s += r + "\n";
  return s;
}

// Steps from `from` to the nearest floor cell touching a cell holding `target`.
int bfs_to(const std::vector<std::string>& rows, Position from, char target) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  auto at = [&](int x, int y) { return rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]; };
  std::map<std::pair<int, int>, int> dist{{{from.x, from.y}, 0}};
  std::deque<Position> q{from};
  while (!q.empty()) {
    auto p = q.front();
    q.pop_front();
    const int dx[] = {1, -1, 0, 0};
    const int dy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = p.x + dx[k];
      const int ny = p.y + dy[k];
      if (nx >= 0 && ny >= 0 && nx < w && ny < h && at(nx, ny) == target) return dist[{p.x, p.y}];
    }
    for (int k = 0; k < 4; ++k) {
      const int nx = p.x + dx[k];
      const int ny = p.y + dy[k];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (at(nx, ny) != '.' && at(nx, ny) != 'A') continue;
      if (dist.contains({nx, ny})) continue;
      dist[{nx, ny}] = dist[{p.x, p.y}] + 1;
      q.push_back({nx, ny});
    }
  }
  return -1;
}

Position cell_next_to(const std::vector<std::string>& rows, char target) {
  for (int y = 0; y < static_cast<int>(rows.size()); ++y)
    for (int x = 0; x < static_cast<int>(rows[0].size()); ++x) {
      if (rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] != '.') continue;
      const int dx[] = {1, -1, 0, 0};
      const int dy[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k];
        const int ny = y + dy[k];
        if (nx >= 0 && ny >= 0 && nx < static_cast<int>(rows[0].size()) && ny < static_cast<int>(rows.size()) &&
            rows[static_cast<std::size_t>(ny)][static_cast<std::size_t>(nx)] == target)
          return {x, y};
      }
    }
  return {-1, -1};
}

Position offset(Position p, int dx, int dy) { return {p.x + dx, p.y + dy}; }

bool agent_originated(EventKind k) {
  return k == EventKind::Claim || k == EventKind::MsgSent || k == EventKind::Join || k == EventKind::Accept ||
         k == EventKind::Decline || k == EventKind::ActionRejected || k == EventKind::StepDone;
}

}  // namespace

TEST_CASE("agents are placed on spawn cells with a roster event each") {
  auto sim = make_sim(fixtures::kSmallKitchen,
                      {agent(0, Specialty::Fetch, {}), agent(1, Specialty::Chop, {}), agent(2, Specialty::Cook, {})},
                      fixtures::meals({MealKind::Steak}));
  std::set<Position> cells;
  for (const auto& a : sim.agents()) {
    CHECK(sim.world().is_floor(a.pos));
    cells.insert(a.pos);
  }
  CHECK(cells.size() == 3);
  CHECK(std::count_if(sim.log().begin(), sim.log().end(), [](auto& e) { return e.kind == EventKind::Agent; }) == 3);
}

TEST_CASE("station timers tick down once per advance") {
  auto sim = make_sim(fixtures::kSmallKitchen, {agent(0, Specialty::Fetch, {})}, fixtures::meals({MealKind::Steak}));
  auto& grill = sim.world().stations[static_cast<std::size_t>(sim.world().stations_of(StationKind::Grill)[0])];
  grill.contents = {Item::MeatRaw};
  grill.timer_remaining = 3;
  sim.agents()[0].busy_until = 100;
  sim.advance_tick();
  CHECK(grill.timer_remaining == 2);
  sim.advance_tick();
  sim.advance_tick();
  CHECK(grill.timer_remaining == 0);
  CHECK(grill.contents == std::vector<Item>{Item::MeatCooked});
  CHECK(sim.tick() == 3);
}

TEST_CASE("a busy agent does nothing") {
  auto sim = make_sim(fixtures::kSmallKitchen, {agent(0, Specialty::Fetch, {})}, fixtures::meals({MealKind::Steak}));
  sim.agents()[0].busy_until = sim.tick() + 4;
  const auto pos = sim.agents()[0].pos;
  const auto n = sim.log().size();
  for (int i = 0; i < 4; ++i) sim.advance_tick();
  CHECK(sim.agents()[0].pos == pos);
  CHECK(sim.log().size() == n);
  sim.advance_tick();
  CHECK(sim.log().size() > n);  // claims on its first free tick
}

TEST_CASE("primitive actions") {
  auto sim = make_sim(fixtures::kSmallKitchen, {agent(0, Specialty::Fetch, {})}, fixtures::meals({MealKind::OnionSoup}));
  auto& w = sim.world();
  auto& a = sim.agents()[0];

  SUBCASE("pick up an onion") {
    const int bin = w.stations_of(StationKind::OnionBin)[0];
    a.pos = offset(w.stations[static_cast<std::size_t>(bin)].pos, -1, 0);
    CHECK(sim.apply_action(0, {ActionKind::PickUp, bin}));
    CHECK(a.carried == Item::OnionWhole);
  }
  SUBCASE("third chopped onion starts the pot") {
    const int pot = w.stations_of(StationKind::Pot)[0];
    auto& st = w.stations[static_cast<std::size_t>(pot)];
    st.contents = {Item::OnionChopped, Item::OnionChopped};
    a.pos = offset(st.pos, 1, 0);
    a.carried = Item::OnionChopped;
    CHECK(sim.apply_action(0, {ActionKind::Place, pot}));
    CHECK(st.contents.size() == 3);
    CHECK(st.timer_remaining == kPotTicks);
    CHECK(!a.carried);
  }
  SUBCASE("serving raw meat is rejected") {
    const int win = w.stations_of(StationKind::ServeWindow)[0];
    a.pos = offset(w.stations[static_cast<std::size_t>(win)].pos, 0, -1);
    a.carried = Item::MeatRaw;
    const auto n = sim.log().size();
    CHECK(!sim.apply_action(0, {ActionKind::Serve, win}));
    CHECK(a.carried == Item::MeatRaw);
    REQUIRE(sim.log().size() == n + 1);
    CHECK(sim.log().back().kind == EventKind::ActionRejected);
  }
  SUBCASE("interactions need adjacency") {
    const int bin = w.stations_of(StationKind::MeatBin)[0];
    CHECK(!sim.apply_action(0, {ActionKind::PickUp, bin}));
    CHECK(!a.carried);
  }
}

TEST_CASE("single agent serves a steak on the tick the trace oracle predicts") {
  auto sim = make_sim(joined(kSteakRoom), {agent(0, Specialty::Fetch, {})}, fixtures::meals({MealKind::Steak}));
  const Position spawn{3, 2};
  REQUIRE(sim.agents()[0].pos == spawn);

  const int d1 = bfs_to(kSteakRoom, spawn, 'M');
  const Position at_meat = cell_next_to(kSteakRoom, 'M');
  const int d2 = bfs_to(kSteakRoom, at_meat, 'G');
  const Position at_grill = cell_next_to(kSteakRoom, 'G');
  const int d3 = bfs_to(kSteakRoom, at_grill, 'D');
  const int d4 = bfs_to(kSteakRoom, cell_next_to(kSteakRoom, 'D'), 'G');
  const int d5 = bfs_to(kSteakRoom, at_grill, 'S');
  // One primitive per tick: walk, pick up, walk, place; ignite the next tick;
  // fetch a plate, wait for the grill, plate (5), walk, serve (5).
  const Tick ignite = d1 + 1 + d2 + 1;
  const Tick cooked = ignite + kGrillTicks;
  const Tick ready_to_plate = ignite + d3 + 1 + d4 + 1;
  const Tick plated = std::max(ready_to_plate, cooked) + kPlateTicks;
  const Tick expected = plated + d5 + kServeTicks;

  while (!sim.all_served() && sim.tick() < 1000) sim.advance_tick();
  REQUIRE(sim.all_served());
  CHECK(sim.meals()[0].served_tick == expected);
  std::vector<std::string> done;
  for (const auto& e : sim.log())
    if (e.kind == EventKind::StepDone) done.push_back(e.extra["step_kind"].get<std::string>());
  CHECK(done == std::vector<std::string>{"GET_MEAT", "GRILL_MEAT", "PLATE_STEAK", "SERVE_STEAK"});
}

TEST_CASE("identical seeds give identical runs") {
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    auto a = random_sim(seed, 0.5, 6, 10);
    auto b = random_sim(seed, 0.5, 6, 10);
    for (int t = 0; t < 3000 && !a.all_served(); ++t) {
      a.advance_tick();
      b.advance_tick();
    }
    CHECK(to_jsonl(a.log()) == to_jsonl(b.log()));
    CHECK(a.world().rng == b.world().rng);
  }
}

TEST_CASE("per-tick invariants hold over whole runs") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const double sa = (seed % 3) / 2.0;
    auto sim = random_sim(seed, sa, 2 + static_cast<int>(seed % 6), seed % 2 ? 0 : 15);
    CAPTURE(seed);
    std::vector<Position> before;
    std::vector<Tick> busy;
    std::size_t seen = sim.log().size();
    int violations = 0;
    while (!sim.all_served() && sim.tick() < 6000) {
      before.clear();
      busy.clear();
      for (const auto& a : sim.agents()) {
        before.push_back(a.pos);
        busy.push_back(a.busy_until);
      }
      const Tick t = sim.tick();
      sim.advance_tick();

      std::set<Position> cells;
      std::map<std::pair<MealId, StepId>, int> holders;
      for (const auto& a : sim.agents()) {
        const auto i = static_cast<std::size_t>(a.id);
        if (manhattan(a.pos, before[i]) > 1) ++violations;
        if (!sim.world().is_floor(a.pos)) ++violations;
        if (a.assignment) ++holders[{a.assignment->meal, a.assignment->step}];
      }
      for (const auto& [k, n] : holders)
        if (n > 1) ++violations;
      for (const auto& st : sim.world().stations) {
        if (st.kind == StationKind::Grill && st.contents.size() > 1) ++violations;
        if (st.kind == StationKind::Pot) {
          if (st.contents.size() > 3) ++violations;
          for (auto it : st.contents)
            if (it != Item::OnionChopped) ++violations;
        }
        if (st.timer_remaining < 0) ++violations;
        if (st.timer_remaining > 0 && st.kind != StationKind::Grill && st.kind != StationKind::Pot) ++violations;
      }
      if (sim.units_in_world() != sim.units_created() - sim.units_destroyed()) ++violations;
      for (std::size_t i = seen; i < sim.log().size(); ++i) {
        const auto& e = sim.log()[i];
        if (e.tick != t) ++violations;
        if (e.actor && agent_originated(e.kind) && busy[static_cast<std::size_t>(*e.actor)] > t) {
          // hands-on work finishing on its own tick is not a new action
          if (!(e.kind == EventKind::StepDone && busy[static_cast<std::size_t>(*e.actor)] == t)) ++violations;
        }
      }
      seen = sim.log().size();
    }
    CHECK(violations == 0);
    CHECK(sim.all_served());
  }
}

TEST_CASE("skill-asserting agents never hold out-of-specialty work") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto sim = random_sim(seed, 1.0, 4, 5);
    while (!sim.all_served() && sim.tick() < 20000) {
      sim.advance_tick();
      for (const auto& a : sim.agents()) {
        if (!a.assignment) continue;
        const auto& m = sim.meals()[static_cast<std::size_t>(a.assignment->meal)];
        CHECK(m.step(a.assignment->step).specialty == a.specialty);
      }
    }
    CHECK(sim.all_served());
  }
}
