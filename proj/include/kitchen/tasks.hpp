#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "kitchen/grid.hpp"
#include "kitchen/types.hpp"

namespace kitchen {

enum class StepKind {
  GetMeat,
  GrillMeat,
  PlateSteak,
  ServeSteak,
  GetOnion,
  ChopOnion,
  PotOnion,
  CookSoup,
  PlateSoup,
  ServeSoup
};

enum class MealKind { Steak, OnionSoup };

std::string_view to_string(StepKind k);
std::string_view to_string(MealKind k);
MealKind meal_kind_from_string(std::string_view s);

Specialty specialty_of(StepKind k);
StationKind station_of(StepKind k);
/// Hands-on ticks the step occupies its agent. Station timers are separate.
int hands_on_duration(StepKind k);

inline constexpr int kGrillTicks = 30;
inline constexpr int kPotTicks = 30;
inline constexpr int kChopTicks = 10;
inline constexpr int kPlateTicks = 5;
inline constexpr int kServeTicks = 5;
inline constexpr int kOnionsPerSoup = 3;

struct StepSpec {
  StepId id = 0;
  StepKind kind = StepKind::GetMeat;
  StationKind station = StationKind::MeatBin;
  int duration = 0;
  Specialty specialty = Specialty::Fetch;
};

struct TaskGraph {
  std::vector<StepSpec> steps;
  std::vector<std::pair<StepId, StepId>> edges;  // (before, after)
  std::vector<std::vector<StepId>> predecessors;  // indexed by step id

  void index_predecessors();
};

TaskGraph steak_graph();
/// Three GET_ONION -> CHOP_ONION -> POT_ONION chains feeding COOK_SOUP ->
/// PLATE_SOUP -> SERVE_SOUP. Chain c uses step ids 3c, 3c+1, 3c+2.
TaskGraph soup_graph();

/// Onion chain a soup step belongs to, or -1 for the shared tail.
int onion_chain(StepId step);

enum class StepStatus { Unclaimed, Assigned, Done };

struct StepState {
  StepStatus status = StepStatus::Unclaimed;
  AgentId assignee = -1;
};

struct MealInstance {
  MealId meal_id = 0;
  int order_id = 0;
  MealKind kind = MealKind::Steak;
  TaskGraph graph;
  std::vector<StepState> step_status;
  std::optional<AgentId> leader;
  std::optional<Tick> served_tick;

  const StepSpec& step(StepId id) const { return graph.steps[static_cast<std::size_t>(id)]; }
  const StepState& state(StepId id) const { return step_status[static_cast<std::size_t>(id)]; }
  StepState& state(StepId id) { return step_status[static_cast<std::size_t>(id)]; }
  StepId serve_step() const { return static_cast<StepId>(graph.steps.size()) - 1; }
};

MealInstance make_meal(MealId id, int order_id, MealKind kind);

struct Order {
  int order_id = 0;
  std::vector<MealInstance> meals;
};

/// Soups per order are round-half-up(soup_ratio * meals_per_order), listed
/// first. Meal ids run consecutively across the whole book.
std::vector<Order> build_order_book(double soup_ratio, int n_orders, int meals_per_order);

std::vector<MealInstance> flatten(std::vector<Order> book);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_ready(const MealInstance& meal, StepId step);
/// Steps whose predecessors are all DONE and which are still UNCLAIMED.
std::vector<StepId> ready_steps(const MealInstance& meal);

void assign_step(MealInstance& meal, StepId step, AgentId agent);
/// Marks an assigned step DONE. Sets served_tick when it is the serve step.
/// Throws ProtocolError if the step is not assigned to `agent`.
void mark_done(MealInstance& meal, StepId step, AgentId agent, Tick tick);
/// Completes a zero-agent step (COOK_SOUP) driven by a station timer.
void mark_done_autonomous(MealInstance& meal, StepId step);

}  // namespace kitchen
