#include "kitchen/coordination.hpp"

#include <limits>

namespace kitchen {

std::vector<MealId> ClaimRegistry::led_by(AgentId a) const {
  std::vector<MealId> out;
  for (const auto& [meal, leader] : leader_of)
    if (leader == a) out.push_back(meal);
  return out;
}

namespace {

Event make_event(Tick tick, EventKind kind, AgentId actor, MealId meal, std::optional<StepId> step = {}) {
  Event e;
  e.tick = tick;
  e.kind = kind;
  e.actor = actor;
  e.meal = meal;
  e.step = step;
  return e;
}

bool passes_own_filter(const AgentState& agent, const StepSpec& spec) {
  return !agent.traits.skill_assertion || spec.specialty == agent.specialty;
}

}  // namespace

ClaimResult claim_meal(AgentState& agent, MealInstance& meal, ClaimRegistry& registry, WorldState& world,
                       Tick tick, EventLog& log) {
  ClaimResult result;
  auto reject = [&](std::string_view why) {
    auto e = make_event(tick, EventKind::ActionRejected, agent.id, meal.meal_id);
    e.extra["action"] = "CLAIM_MEAL";
    e.extra["reason"] = why;
    log.push_back(std::move(e));
    return result;
  };
  if (registry.is_claimed(meal.meal_id) || meal.served_tick) return reject("already_claimed");
  if (agent.assignment) return reject("agent_assigned");
  const int station = free_primary_station(world, meal.kind, agent.pos);
  if (station < 0) return reject("no_free_station");

  world.stations[static_cast<std::size_t>(station)].meal = meal.meal_id;
  registry.leader_of[meal.meal_id] = agent.id;
  registry.team_of[meal.meal_id] = {agent.id};
  meal.leader = agent.id;
  result.accepted = true;

  // Self-assignment goes through the agent's own filter, restricted to this meal.
  AffordanceSet own;
  for (const auto& spec : meal.graph.steps) {
    if (!is_takeable(spec.kind) || !is_ready(meal, spec.id) || !step_has_room(world, meal, spec.id)) continue;
    const int st = approach_station(world, meal, spec.id, agent.pos);
    auto d = st >= 0 ? world.distance_to(st, agent.pos) : std::nullopt;
    if (d) own.candidates.push_back({ActionClass::TakeStep, meal.meal_id, spec.id, *d, spec.specialty});
  }
  auto ranked = contextual_filter(own, agent);
  if (!ranked.empty()) {
    const StepId s = ranked.front().step;
    assign_step(meal, s, agent.id);
    agent.assignment = Assignment{meal.meal_id, s};
    agent.last_progress = tick;
    result.self_step = s;
  }

  auto e = make_event(tick, EventKind::Claim, agent.id, meal.meal_id, result.self_step);
  e.extra["meal_kind"] = to_string(meal.kind);
  e.extra["station"] = station;
  if (result.self_step) e.extra["step_kind"] = to_string(meal.step(*result.self_step).kind);
  log.push_back(std::move(e));
  return result;
}

std::optional<Message> maybe_recruit(AgentState& leader, std::span<const AgentState> agents,
                                     std::span<const MealInstance> meals, ClaimRegistry& registry,
                                     const WorldState& world, CommConfig comm, Tick tick, EventLog& log) {
  if (!leader.traits.initiative || !leader.idle_at(tick) || leader.pending) return std::nullopt;
  if (registry.outstanding.contains(leader.id)) return std::nullopt;

  for (MealId mid : registry.led_by(leader.id)) {
    const auto& meal = meals[static_cast<std::size_t>(mid)];
    if (meal.served_tick) continue;
    const auto& team = registry.team_of[mid];
    for (const auto& spec : meal.graph.steps) {
      if (!is_takeable(spec.kind) || !is_ready(meal, spec.id) || !step_has_room(world, meal, spec.id)) continue;
      // A free leader that may do the step itself takes it on its next turn.
      if (!leader.assignment && passes_own_filter(leader, spec)) continue;
      const auto declined_it = registry.declined.find({mid, spec.id});
      AgentId best = -1;
      int best_d = std::numeric_limits<int>::max();
      for (const auto& other : agents) {
        if (other.id == leader.id || team.contains(other.id) || !other.available_at(tick)) continue;
        if (declined_it != registry.declined.end() && declined_it->second.contains(other.id)) continue;
        const int d = world.floor_distance(leader.pos, other.pos);
        if (d < 0) continue;
        if (d < best_d) {
          best_d = d;
          best = other.id;
        }
      }
      if (best < 0) continue;

      Message msg{MessageKind::HelpRequest, leader.id, best, mid, spec.id, tick, tick + comm.cost};
      leader.busy_until = tick + comm.cost;
      registry.outstanding[leader.id] = msg;
      auto e = make_event(tick, EventKind::MsgSent, leader.id, mid, spec.id);
      e.extra["to"] = best;
      e.extra["step_kind"] = to_string(spec.kind);
      e.extra["deliver_tick"] = msg.deliver_tick;
      e.extra["busy_until"] = leader.busy_until;
      log.push_back(std::move(e));
      return msg;
    }
  }
  return std::nullopt;
}

bool handle_response(const Message& reply, AgentState& responder, std::span<MealInstance> meals,
                     ClaimRegistry& registry, Tick tick, EventLog& log, std::string_view reason) {
  const AgentId leader = reply.recipient;
  auto out = registry.outstanding.find(leader);
  if (out == registry.outstanding.end() || out->second.meal != reply.meal || out->second.step != reply.step ||
      out->second.recipient != responder.id)
    return false;
  registry.outstanding.erase(out);

  auto& meal = meals[static_cast<std::size_t>(reply.meal)];
  const auto kind = meal.step(reply.step).kind;
  if (reply.kind == MessageKind::Accept) {
    const bool usable = !meal.served_tick && is_ready(meal, reply.step) && !responder.assignment;
    auto e = make_event(tick, EventKind::Accept, responder.id, reply.meal, reply.step);
    e.extra["leader"] = leader;
    e.extra["step_kind"] = to_string(kind);
    if (!usable) {
      e.extra["stale"] = true;
      log.push_back(std::move(e));
      return false;
    }
    assign_step(meal, reply.step, responder.id);
    responder.assignment = Assignment{reply.meal, reply.step};
    responder.last_progress = tick;
    registry.team_of[reply.meal].insert(responder.id);
    log.push_back(std::move(e));
    return true;
  }
  registry.declined[{reply.meal, reply.step}].insert(responder.id);
  auto e = make_event(tick, EventKind::Decline, responder.id, reply.meal, reply.step);
  e.extra["leader"] = leader;
  e.extra["step_kind"] = to_string(kind);
  if (!reason.empty()) e.extra["reason"] = reason;
  log.push_back(std::move(e));
  return false;
}

bool volunteer_take_step(AgentState& agent, MealInstance& meal, StepId step, ClaimRegistry& registry, Tick tick,
                         EventLog& log, std::string_view via) {
  const auto& spec = meal.step(step);
  std::string_view why;
  if (!registry.is_claimed(meal.meal_id))
    why = "meal_unclaimed";
  else if (!is_ready(meal, step))
    why = "step_not_ready";
  else if (agent.assignment)
    why = "agent_assigned";
  else if (!passes_own_filter(agent, spec))
    why = "out_of_specialty";
  else if (via != "carry" && !is_takeable(spec.kind))
    why = "not_takeable";
  if (!why.empty()) {
    auto e = make_event(tick, EventKind::ActionRejected, agent.id, meal.meal_id, step);
    e.extra["action"] = "TAKE_STEP";
    e.extra["reason"] = why;
    log.push_back(std::move(e));
    return false;
  }
  assign_step(meal, step, agent.id);
  agent.assignment = Assignment{meal.meal_id, step};
  agent.last_progress = tick;
  registry.team_of[meal.meal_id].insert(agent.id);
  auto e = make_event(tick, EventKind::Join, agent.id, meal.meal_id, step);
  e.extra["step_kind"] = to_string(spec.kind);
  e.extra["via"] = via;
  log.push_back(std::move(e));
  return true;
}

std::vector<Assignment> release_stale(ClaimRegistry& /*registry*/, std::span<MealInstance> meals,
                                      std::span<AgentState> agents, Tick tick, int stall_timeout, EventLog& log) {
  std::vector<Assignment> released;
  for (auto& a : agents) {
    if (!a.assignment || a.carried || a.pending) continue;
    if (tick - a.last_progress < stall_timeout) continue;
    auto& meal = meals[static_cast<std::size_t>(a.assignment->meal)];
    auto& st = meal.state(a.assignment->step);
    if (st.status == StepStatus::Assigned && st.assignee == a.id) st = {StepStatus::Unclaimed, -1};
    auto e = make_event(tick, EventKind::Release, a.id, a.assignment->meal, a.assignment->step);
    e.extra["step_kind"] = to_string(meal.step(a.assignment->step).kind);
    e.extra["idle_ticks"] = tick - a.last_progress;
    log.push_back(std::move(e));
    released.push_back(*a.assignment);
    a.assignment.reset();
  }
  return released;
}

}  // namespace kitchen
