#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "kitchen/agents.hpp"
#include "kitchen/events.hpp"
#include "kitchen/message.hpp"

namespace kitchen {

struct ClaimRegistry {
  std::map<MealId, AgentId> leader_of;
  std::map<MealId, std::set<AgentId>> team_of;
  std::map<AgentId, Message> outstanding;
  /// Agents that already refused a given (meal, step); leaders skip them.
  std::map<std::pair<MealId, StepId>, std::set<AgentId>> declined;

  bool is_claimed(MealId m) const { return leader_of.contains(m); }
  std::vector<MealId> led_by(AgentId a) const;
};

struct CommConfig {
  int cost = 25;  // sender busy ticks per HELP_REQUEST
};

struct ClaimResult {
  bool accepted = false;
  std::optional<StepId> self_step;
};

/// Makes `agent` leader of `meal`, binds a free grill/pot to it and
/// self-assigns the first ready step the agent's own filter keeps.
ClaimResult claim_meal(AgentState& agent, MealInstance& meal, ClaimRegistry& registry, WorldState& world,
                       Tick tick, EventLog& log);

/// One HELP_REQUEST from an initiative leader to the nearest available agent
/// outside the team, for the lowest ready unassigned step of its lowest led
/// meal. The sender is busy for `comm.cost` ticks and the message lands at
/// tick + cost.
std::optional<Message> maybe_recruit(AgentState& leader, std::span<const AgentState> agents,
                                     std::span<const MealInstance> meals, ClaimRegistry& registry,
                                     const WorldState& world, CommConfig comm, Tick tick, EventLog& log);

/// Applies an ACCEPT or DECLINE to the leader's outstanding request. Returns
/// true when the responder ends up assigned.
bool handle_response(const Message& reply, AgentState& responder, std::span<MealInstance> meals,
                     ClaimRegistry& registry, Tick tick, EventLog& log, std::string_view reason = {});

/// Free, message-less joining of a claimed meal's ready step.
bool volunteer_take_step(AgentState& agent, MealInstance& meal, StepId step, ClaimRegistry& registry, Tick tick,
                         EventLog& log, std::string_view via = "volunteer");

/// Resets assignments whose holder has made no progress for `stall_timeout`
/// ticks. Agents holding an item are never released: the item binds them to
/// the step and they can always finish it.
std::vector<Assignment> release_stale(ClaimRegistry& registry, std::span<MealInstance> meals,
                                      std::span<AgentState> agents, Tick tick, int stall_timeout, EventLog& log);

}  // namespace kitchen
