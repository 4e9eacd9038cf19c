#include "kitchen/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <string>
#include <tuple>

namespace kitchen {

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::MoveStep: return "MOVE_STEP";
    case ActionKind::PickUp: return "PICK_UP";
    case ActionKind::Place: return "PLACE";
    case ActionKind::UseStation: return "USE_STATION";
    case ActionKind::Serve: return "SERVE";
    case ActionKind::Wait: return "WAIT";
  }
  return "?";
}

namespace {

std::vector<Position> placement_cells(const WorldState& w, std::size_t n) {
  std::vector<Position> cells = w.spawns;
  if (cells.size() >= n) {
    cells.resize(n);
    return cells;
  }
  std::vector<std::tuple<int, int, int>> rest;  // (distance to spawn area, y, x)
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      Position p{x, y};
      if (!w.is_floor(p) || std::find(cells.begin(), cells.end(), p) != cells.end()) continue;
      int best = -1;
      for (auto s : w.spawns) {
        const int d = w.floor_distance(s, p);
        if (d >= 0 && (best < 0 || d < best)) best = d;
      }
      if (best >= 0) rest.emplace_back(best, y, x);
    }
  }
  std::sort(rest.begin(), rest.end());
  for (auto& [d, y, x] : rest) {
    if (cells.size() == n) break;
    cells.push_back({x, y});
  }
  if (cells.size() < n) throw LayoutError("layout has too few reachable floor cells for the team");
  return cells;
}

Item dispensed(StationKind k) {
  switch (k) {
    case StationKind::MeatBin: return Item::MeatRaw;
    case StationKind::OnionBin: return Item::OnionWhole;
    default: return Item::PlateEmpty;
  }
}

bool is_dispenser(StationKind k) {
  return k == StationKind::MeatBin || k == StationKind::OnionBin || k == StationKind::PlateStack;
}

}  // namespace

Simulation::Simulation(WorldState world, std::vector<AgentState> agents, std::vector<MealInstance> meals,
                       SimConfig config)
    : world_(std::move(world)), agents_(std::move(agents)), meals_(std::move(meals)), config_(config) {
  const auto cells = placement_cells(world_, agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    auto& a = agents_[i];
    a.pos = cells[i];
    a.last_progress = world_.tick;
    Event e;
    e.tick = world_.tick;
    e.kind = EventKind::Agent;
    e.actor = a.id;
    e.extra["specialty"] = to_string(a.specialty);
    e.extra["skill_assertion"] = a.traits.skill_assertion;
    e.extra["initiative"] = a.traits.initiative;
    e.extra["distribution_pref"] = to_string(a.traits.distribution_pref);
    e.extra["agreeableness"] = a.traits.agreeableness;
    log_.push_back(std::move(e));
  }
}

int Simulation::units_in_world() const {
  int n = 0;
  for (const auto& s : world_.stations)
    for (auto it : s.contents) n += item_units(it);
  for (const auto& a : agents_)
    if (a.carried) n += item_units(*a.carried);
  return n;
}

void Simulation::reject(AgentState& agent, const Action& action, std::string_view reason) {
  Event e;
  e.tick = world_.tick;
  e.kind = EventKind::ActionRejected;
  e.actor = agent.id;
  e.extra["action"] = to_string(action.kind);
  e.extra["reason"] = reason;
  log_.push_back(std::move(e));
}

bool Simulation::apply_action(AgentId id, const Action& action) {
  auto& a = agents_[static_cast<std::size_t>(id)];
  const Tick tick = world_.tick;
  if (action.kind == ActionKind::Wait) return true;
  if (action.station < 0 || action.station >= static_cast<int>(world_.stations.size())) {
    reject(a, action, "no_such_station");
    return false;
  }
  auto& st = world_.stations[static_cast<std::size_t>(action.station)];
  const bool adjacent = world_.adjacent_to(action.station, a.pos);

  switch (action.kind) {
    case ActionKind::MoveStep: {
      if (adjacent || !world_.distance_to(action.station, a.pos)) {
        reject(a, action, adjacent ? "already_adjacent" : "unreachable");
        return false;
      }
      a.pos = world_.step_towards(action.station, a.pos);
      return true;
    }
    case ActionKind::PickUp: {
      if (!adjacent || a.carried) break;
      if (is_dispenser(st.kind)) {
        a.carried = dispensed(st.kind);
        created_units_ += item_units(*a.carried);
        return true;
      }
      if (st.kind == StationKind::ChopBoard && st.contents.size() == 1 && st.contents.front() == Item::OnionChopped) {
        a.carried = st.contents.front();
        st.contents.clear();
        st.meal = -1;
        st.chain = -1;
        return true;
      }
      break;
    }
    case ActionKind::Place: {
      if (!adjacent || !a.carried) break;
      const Item it = *a.carried;
      bool ok = false;
      if (st.kind == StationKind::Grill)
        ok = it == Item::MeatRaw && st.contents.empty();
      else if (st.kind == StationKind::ChopBoard)
        ok = it == Item::OnionWhole && st.contents.empty();
      else if (st.kind == StationKind::Pot)
        ok = it == Item::OnionChopped && !st.cooked && st.timer_remaining == 0 &&
             static_cast<int>(st.contents.size()) < st.capacity;
      else if (st.kind == StationKind::Counter)
        ok = static_cast<int>(st.contents.size()) < st.capacity;
      if (!ok) break;
      st.contents.push_back(it);
      a.carried.reset();
      if (st.kind == StationKind::Pot && static_cast<int>(st.contents.size()) == kOnionsPerSoup)
        st.timer_remaining = kPotTicks;
      return true;
    }
    case ActionKind::UseStation: {
      if (!adjacent) break;
      if (st.kind == StationKind::Grill && !a.carried && st.contents.size() == 1 &&
          st.contents.front() == Item::MeatRaw && st.timer_remaining == 0) {
        st.timer_remaining = kGrillTicks;
        return true;
      }
      int duration = 0;
      if (st.kind == StationKind::ChopBoard && !a.carried && st.contents.size() == 1 &&
          st.contents.front() == Item::OnionWhole)
        duration = kChopTicks;
      else if (st.kind == StationKind::Grill && a.carried == Item::PlateEmpty && st.contents.size() == 1 &&
               st.contents.front() == Item::MeatCooked)
        duration = kPlateTicks;
      else if (st.kind == StationKind::Pot && a.carried == Item::PlateEmpty && st.cooked)
        duration = kPlateTicks;
      if (duration == 0) break;
      a.pending = PendingWork{-1, -1, action.station, tick + duration};
      a.busy_until = tick + duration;
      return true;
    }
    case ActionKind::Serve: {
      if (!adjacent || st.kind != StationKind::ServeWindow) break;
      if (a.carried != Item::PlatedSteak && a.carried != Item::PlatedSoup) break;
      a.pending = PendingWork{-1, -1, action.station, tick + kServeTicks};
      a.busy_until = tick + kServeTicks;
      return true;
    }
    case ActionKind::Wait: return true;
  }
  reject(a, action, adjacent ? "illegal" : "not_adjacent");
  return false;
}

void Simulation::finish_step(AgentState& agent, MealId meal_id, StepId step) {
  auto& meal = meals_[static_cast<std::size_t>(meal_id)];
  mark_done(meal, step, agent.id, world_.tick);
  Event e;
  e.tick = world_.tick;
  e.kind = EventKind::StepDone;
  e.actor = agent.id;
  e.meal = meal_id;
  e.step = step;
  e.extra["step_kind"] = to_string(meal.step(step).kind);
  log_.push_back(std::move(e));
  agent.assignment.reset();
  if (meal.served_tick) {
    ++served_;
    served_this_tick_.emplace_back(meal_id, agent.id);
  }
}

void Simulation::complete_pending(AgentState& a) {
  const PendingWork p = *a.pending;
  a.pending.reset();
  a.last_progress = world_.tick;
  auto& st = world_.stations[static_cast<std::size_t>(p.station)];
  switch (st.kind) {
    case StationKind::ChopBoard: st.contents.front() = Item::OnionChopped; break;
    case StationKind::Grill:
      st.contents.clear();
      st.meal = -1;
      a.carried = Item::PlatedSteak;
      break;
    case StationKind::Pot:
      st.contents.clear();
      st.cooked = false;
      st.meal = -1;
      a.carried = Item::PlatedSoup;
      break;
    case StationKind::ServeWindow:
      destroyed_units_ += item_units(*a.carried);
      a.carried.reset();
      break;
    default: assert(false && "pending work on a station without hands-on processing");
  }
  if (p.meal < 0) return;
  finish_step(a, p.meal, p.step);
  auto& meal = meals_[static_cast<std::size_t>(p.meal)];
  const auto kind = meal.step(p.step).kind;
  if (kind == StepKind::PlateSteak || kind == StepKind::PlateSoup)
    volunteer_take_step(a, meal, meal.serve_step(), registry_, world_.tick, log_, "carry");
}

Action Simulation::plan(const AgentState& a) const {
  const auto& meal = meals_[static_cast<std::size_t>(a.assignment->meal)];
  const StepId step = a.assignment->step;
  auto toward = [&](int st, ActionKind when_adjacent) -> Action {
    if (st < 0) return {ActionKind::Wait, -1};
    if (world_.adjacent_to(st, a.pos)) return {when_adjacent, st};
    return {ActionKind::MoveStep, st};
  };

  switch (meal.step(step).kind) {
    case StepKind::GetMeat:
      if (!a.carried) return toward(world_.nearest(StationKind::MeatBin, a.pos), ActionKind::PickUp);
      return toward(world_.bound(StationKind::Grill, meal.meal_id), ActionKind::Place);
    case StepKind::GetOnion: {
      const int board = world_.bound(StationKind::ChopBoard, meal.meal_id, onion_chain(step));
      if (a.carried) return toward(board, ActionKind::Place);
      // Only pick up an onion when a board is (or can be) reserved for it.
      const int bin = world_.nearest(StationKind::OnionBin, a.pos);
      if (world_.adjacent_to(bin, a.pos) && board < 0 && free_chop_board(world_, a.pos) < 0)
        return {ActionKind::Wait, bin};
      return toward(bin, ActionKind::PickUp);
    }
    case StepKind::GrillMeat:
      return toward(world_.bound(StationKind::Grill, meal.meal_id), ActionKind::UseStation);
    case StepKind::ChopOnion:
      return toward(world_.bound(StationKind::ChopBoard, meal.meal_id, onion_chain(step)), ActionKind::UseStation);
    case StepKind::PotOnion:
      if (!a.carried)
        return toward(world_.bound(StationKind::ChopBoard, meal.meal_id, onion_chain(step)), ActionKind::PickUp);
      return toward(world_.bound(StationKind::Pot, meal.meal_id), ActionKind::Place);
    case StepKind::PlateSteak:
    case StepKind::PlateSoup: {
      if (!a.carried) return toward(world_.nearest(StationKind::PlateStack, a.pos), ActionKind::PickUp);
      const bool steak = meal.kind == MealKind::Steak;
      const int st = world_.bound(steak ? StationKind::Grill : StationKind::Pot, meal.meal_id);
      const auto& s = world_.stations[static_cast<std::size_t>(st)];
      const bool ready = steak ? (s.contents.size() == 1 && s.contents.front() == Item::MeatCooked) : s.cooked;
      return toward(st, ready ? ActionKind::UseStation : ActionKind::Wait);
    }
    case StepKind::ServeSteak:
    case StepKind::ServeSoup: return toward(world_.nearest(StationKind::ServeWindow, a.pos), ActionKind::Serve);
    case StepKind::CookSoup: return {ActionKind::Wait, -1};
  }
  return {ActionKind::Wait, -1};
}

void Simulation::act_on_assignment(AgentState& a) {
  const Action act = plan(a);
  const MealId meal_id = a.assignment->meal;
  const StepId step = a.assignment->step;
  if (!apply_action(a.id, act)) return;
  const auto kind = meals_[static_cast<std::size_t>(meal_id)].step(step).kind;

  if (act.kind != ActionKind::Wait) {
    a.last_progress = world_.tick;
  } else if (act.station >= 0 && world_.stations[static_cast<std::size_t>(act.station)].timer_remaining > 0) {
    a.last_progress = world_.tick;  // waiting on a running cook timer
  }

  if (a.pending) {
    a.pending->meal = meal_id;
    a.pending->step = step;
    return;
  }
  switch (act.kind) {
    case ActionKind::PickUp:
      if (kind == StepKind::GetOnion &&
          world_.bound(StationKind::ChopBoard, meal_id, onion_chain(step)) < 0) {
        auto& board = world_.stations[static_cast<std::size_t>(free_chop_board(world_, a.pos))];
        board.meal = meal_id;
        board.chain = onion_chain(step);
      }
      break;
    case ActionKind::Place:
      finish_step(a, meal_id, step);
      break;
    case ActionKind::UseStation:
      if (kind == StepKind::GrillMeat) finish_step(a, meal_id, step);
      break;
    default: break;
  }
}

void Simulation::execute(AgentState& a, const Candidate& choice) {
  const Tick tick = world_.tick;
  switch (choice.action_class) {
    case ActionClass::Continue: act_on_assignment(a); return;
    case ActionClass::ClaimMeal: {
      auto res = claim_meal(a, meals_[static_cast<std::size_t>(choice.meal)], registry_, world_, tick, log_);
      if (res.self_step) act_on_assignment(a);
      return;
    }
    case ActionClass::TakeStep:
      if (volunteer_take_step(a, meals_[static_cast<std::size_t>(choice.meal)], choice.step, registry_, tick, log_))
        act_on_assignment(a);
      return;
    case ActionClass::Respond:  // the inbox is drained before deciding, so nothing to answer
    case ActionClass::Wait: return;
  }
}

void Simulation::deliver(const Message& msg) {
  agents_[static_cast<std::size_t>(msg.recipient)].inbox.push_back(msg);
  Event e;
  e.tick = world_.tick;
  e.kind = EventKind::MsgDelivered;
  e.actor = msg.recipient;
  e.meal = msg.meal;
  e.step = msg.step;
  e.extra["from"] = msg.sender;
  e.extra["issued_tick"] = msg.issued_tick;
  log_.push_back(std::move(e));
}

void Simulation::take_turn(AgentState& a) {
  const Tick tick = world_.tick;
  if (!a.idle_at(tick)) return;

  for (auto& d : process_inbox(a, meals_, world_.rng, tick, &world_)) {
    Message reply{d.reply, a.id, d.request.sender, d.request.meal, d.request.step, tick, tick};
    handle_response(reply, a, meals_, registry_, tick, log_, d.reason);
  }

  // CONTINUE always ranks first, so an assigned agent skips full perception.
  if (a.assignment) {
    act_on_assignment(a);
  } else {
    const auto affs = perceive_affordances(world_, a, meals_, registry_);
    const auto ranked = contextual_filter(affs, a);
    execute(a, choose_action(ranked));
  }

  if (a.idle_at(tick)) {
    if (auto msg = maybe_recruit(a, agents_, meals_, registry_, world_, config_.comm, tick, log_)) {
      if (msg->deliver_tick <= tick)
        deliver(*msg);
      else
        in_flight_.push_back(*msg);
    }
  }
}

void Simulation::advance_tick() {
  const Tick tick = world_.tick;

  // (1) message delivery, in send order
  if (!in_flight_.empty()) {
    std::vector<Message> later;
    for (const auto& m : in_flight_) {
      if (m.deliver_tick <= tick)
        deliver(m);
      else
        later.push_back(m);
    }
    in_flight_ = std::move(later);
  }

  release_stale(registry_, meals_, agents_, tick, config_.stall_timeout, log_);

  // (2) station timers
  for (auto& st : world_.stations) {
    if (st.timer_remaining <= 0) continue;
    if (--st.timer_remaining > 0) continue;
    if (st.kind == StationKind::Grill) {
      for (auto& it : st.contents)
        if (it == Item::MeatRaw) it = Item::MeatCooked;
    } else if (st.kind == StationKind::Pot) {
      st.cooked = true;
      if (st.meal >= 0) {
        auto& meal = meals_[static_cast<std::size_t>(st.meal)];
        const StepId cook = 3 * kOnionsPerSoup;
        mark_done_autonomous(meal, cook);
        Event e;
        e.tick = tick;
        e.kind = EventKind::StepDone;
        e.meal = meal.meal_id;
        e.step = cook;
        e.extra["step_kind"] = to_string(StepKind::CookSoup);
        log_.push_back(std::move(e));
      }
    }
  }

  // hands-on work finishing this tick
  for (auto& a : agents_)
    if (a.pending && a.pending->finish <= tick) complete_pending(a);

  // (3) agents in ascending id
  for (auto& a : agents_) take_turn(a);

  // (4) served meals
  for (auto [meal_id, server] : served_this_tick_) {
    const auto& meal = meals_[static_cast<std::size_t>(meal_id)];
    Event e;
    e.tick = tick;
    e.kind = EventKind::MealServed;
    e.actor = server;
    e.meal = meal_id;
    e.extra["meal_kind"] = to_string(meal.kind);
    e.extra["order"] = meal.order_id;
    log_.push_back(std::move(e));
  }
  served_this_tick_.clear();

  // (5)
  world_.tick = tick + 1;
}

}  // namespace kitchen
