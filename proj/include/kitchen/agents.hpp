#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kitchen/events.hpp"
#include "kitchen/grid.hpp"
#include "kitchen/message.hpp"
#include "kitchen/rng.hpp"
#include "kitchen/tasks.hpp"

namespace kitchen {

enum class DistributionPref { StartNew, JoinExisting };

std::string_view to_string(DistributionPref p);

struct TraitVector {
  double agreeableness = 0.8;
  bool initiative = false;
  DistributionPref distribution_pref = DistributionPref::StartNew;
  bool skill_assertion = false;
};

struct Assignment {
  MealId meal = -1;
  StepId step = -1;
  bool operator==(const Assignment&) const = default;
};

/// Hands-on work in progress; finishes when the tick reaches `finish`.
struct PendingWork {
  MealId meal = -1;
  StepId step = -1;
  int station = -1;
  Tick finish = 0;
};

struct AgentState {
  AgentId id = 0;
  Position pos;
  std::optional<Item> carried;
  Tick busy_until = 0;
  TraitVector traits;
  Specialty specialty = Specialty::Fetch;
  std::deque<Message> inbox;
  std::optional<Assignment> assignment;
  std::optional<PendingWork> pending;
  Tick last_progress = 0;

  bool idle_at(Tick tick) const { return busy_until <= tick; }
  /// Free to take new work: not busy, nothing assigned, nothing in hand.
  bool available_at(Tick tick) const { return idle_at(tick) && !assignment && !pending && !carried; }
};

/// Fixed value when lo == hi, otherwise Uniform[lo, hi) per agent.
struct AgreeablenessSpec {
  double lo = 0.8;
  double hi = 0.8;

  static AgreeablenessSpec fixed(double v) { return {v, v}; }
  bool is_fixed() const { return lo == hi; }
  std::string to_string() const;
  static AgreeablenessSpec parse(std::string_view text);
  bool operator==(const AgreeablenessSpec&) const = default;
};

struct PersonaMix {
  double frac_initiative = 0.5;
  double frac_skill_assertion = 0.5;
  double frac_join_existing = 0.5;
  AgreeablenessSpec agreeableness;
  bool random_specialties = false;
};

/// Exactly round(frac * n) agents carry each boolean trait, chosen by an rng
/// shuffle per trait (initiative, skill assertion, join preference, in that
/// order). Specialties are round-robin FETCH, CHOP, COOK, SERVE by id unless
/// `random_specialties`.
std::vector<AgentState> assign_personas(int n, const PersonaMix& mix, SplitMix64& rng);

enum class ActionClass { Continue, Respond, TakeStep, ClaimMeal, Wait };

std::string_view to_string(ActionClass c);

struct Candidate {
  ActionClass action_class = ActionClass::Wait;
  MealId meal = -1;
  StepId step = -1;
  int distance = 0;
  std::optional<Specialty> specialty;  // set for TAKE_STEP and RESPOND
  bool operator==(const Candidate&) const = default;
};

struct AffordanceSet {
  std::vector<Candidate> candidates;
};

/// Station an agent heads to first when starting `step` of `meal` from empty
/// hands. -1 when the step has no physical target yet.
int approach_station(const WorldState& world, const MealInstance& meal, StepId step, Position from);

/// Nearest grill (steak) or pot (soup) not bound to any meal, or -1.
int free_primary_station(const WorldState& world, MealKind kind, Position from);

/// Steps an agent may pick up on its own: COOK_SOUP runs on the pot timer and
/// serve steps pass to whoever plated the meal.
bool is_takeable(StepKind k);

/// Free chop board (empty, unreserved) nearest to `from`, or -1.
int free_chop_board(const WorldState& world, Position from);

/// A GET_ONION step needs a chop board: either one already reserved for its
/// chain or a free one. Every other step always has room.
bool step_has_room(const WorldState& world, const MealInstance& meal, StepId step);

struct ClaimRegistry;

AffordanceSet perceive_affordances(const WorldState& world, const AgentState& agent,
                                   std::span<const MealInstance> meals, const ClaimRegistry& registry);

/// Drops out-of-specialty TAKE_STEP/RESPOND candidates for skill-asserting
/// agents, then ranks CONTINUE > RESPOND > {TAKE_STEP, CLAIM_MEAL ordered by
/// distribution preference} > WAIT; ties by distance, then (meal, step).
std::vector<Candidate> contextual_filter(const AffordanceSet& affs, const AgentState& agent);

Candidate choose_action(std::span<const Candidate> ranked);

struct InboxDecision {
  Message request;
  MessageKind reply = MessageKind::Decline;
  std::string reason;  // "stale", "occupied", "specialty", "agreeableness", "one_per_tick", "no_station", "accepted"
};

/// Drains the inbox in FIFO order. Consumes one rng draw per request that
/// reaches the agreeableness check. At most one ACCEPT.
std::vector<InboxDecision> process_inbox(AgentState& agent, std::span<const MealInstance> meals, SplitMix64& rng,
                                         Tick tick, const WorldState* world = nullptr);

}  // namespace kitchen
