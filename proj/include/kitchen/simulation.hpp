#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kitchen/agents.hpp"
#include "kitchen/coordination.hpp"
#include "kitchen/events.hpp"
#include "kitchen/grid.hpp"
#include "kitchen/tasks.hpp"

namespace kitchen {

enum class ActionKind { MoveStep, PickUp, Place, UseStation, Serve, Wait };

std::string_view to_string(ActionKind k);

struct Action {
  ActionKind kind = ActionKind::Wait;
  int station = -1;  // target (MOVE_STEP) or the adjacent station acted on
};

struct SimConfig {
  CommConfig comm;
  int stall_timeout = 200;
};

/// One simulation run: owns the world, agents, meals, protocol state and log.
/// Single-threaded; copies are independent.
class Simulation {
 public:
  /// Places agents on spawn cells (then the nearest free floor cells) and
  /// writes one AGENT roster event per agent.
  Simulation(WorldState world, std::vector<AgentState> agents, std::vector<MealInstance> meals, SimConfig config);

  /// Runs the fixed per-tick pipeline: deliver messages, release stalled
  /// assignments, station timers, hands-on completions, agents in id order,
  /// served-meal events, tick += 1.
  void advance_tick();

  /// Executes a primitive action for an agent. Illegal actions are rejected
  /// with an ACTION_REJECTED event and leave the state untouched.
  bool apply_action(AgentId id, const Action& action);

  bool all_served() const { return served_ == static_cast<int>(meals_.size()); }
  int served_count() const { return served_; }
  Tick tick() const { return world_.tick; }

  const WorldState& world() const { return world_; }
  WorldState& world() { return world_; }
  std::span<const AgentState> agents() const { return agents_; }
  std::vector<AgentState>& agents() { return agents_; }
  std::span<const MealInstance> meals() const { return meals_; }
  std::vector<MealInstance>& meals() { return meals_; }
  const ClaimRegistry& registry() const { return registry_; }
  ClaimRegistry& registry() { return registry_; }
  const EventLog& log() const { return log_; }
  const SimConfig& config() const { return config_; }

  /// Ingredient units currently in the world (stations plus hands), and the
  /// running totals created at dispensers and destroyed at the serve window.
  int units_in_world() const;
  int units_created() const { return created_units_; }
  int units_destroyed() const { return destroyed_units_; }

 private:
  void deliver(const Message& msg);
  void complete_pending(AgentState& agent);
  void take_turn(AgentState& agent);
  void execute(AgentState& agent, const Candidate& choice);
  void act_on_assignment(AgentState& agent);
  Action plan(const AgentState& agent) const;
  void finish_step(AgentState& agent, MealId meal, StepId step);
  void reject(AgentState& agent, const Action& action, std::string_view reason);

  WorldState world_;
  std::vector<AgentState> agents_;
  std::vector<MealInstance> meals_;
  SimConfig config_;
  ClaimRegistry registry_;
  EventLog log_;
  std::vector<Message> in_flight_;
  std::vector<std::pair<MealId, AgentId>> served_this_tick_;
  int served_ = 0;
  int created_units_ = 0;
  int destroyed_units_ = 0;
};

}  // namespace kitchen
