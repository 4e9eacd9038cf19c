#include "kitchen/tasks.hpp"

#include <cmath>
#include <string>

namespace kitchen {

std::string_view to_string(Specialty s) {
  switch (s) {
    case Specialty::Fetch: return "FETCH";
    case Specialty::Chop: return "CHOP";
    case Specialty::Cook: return "COOK";
    case Specialty::Serve: return "SERVE";
  }
  return "?";
}

Specialty specialty_from_string(std::string_view s) {
  for (auto sp : kAllSpecialties)
    if (to_string(sp) == s) return sp;
  throw std::invalid_argument("unknown specialty '" + std::string(s) + "'");
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::GetMeat: return "GET_MEAT";
    case StepKind::GrillMeat: return "GRILL_MEAT";
    case StepKind::PlateSteak: return "PLATE_STEAK";
    case StepKind::ServeSteak: return "SERVE_STEAK";
    case StepKind::GetOnion: return "GET_ONION";
    case StepKind::ChopOnion: return "CHOP_ONION";
    case StepKind::PotOnion: return "POT_ONION";
    case StepKind::CookSoup: return "COOK_SOUP";
    case StepKind::PlateSoup: return "PLATE_SOUP";
    case StepKind::ServeSoup: return "SERVE_SOUP";
  }
  return "?";
}

std::string_view to_string(MealKind k) {
  return k == MealKind::Steak ? "STEAK" : "SOUP";
}

MealKind meal_kind_from_string(std::string_view s) {
  if (s == "STEAK") return MealKind::Steak;
  if (s == "SOUP" || s == "ONION_SOUP") return MealKind::OnionSoup;
  throw std::invalid_argument("unknown meal kind '" + std::string(s) + "'");
}

Specialty specialty_of(StepKind k) {
  switch (k) {
    case StepKind::GetMeat:
    case StepKind::GetOnion: return Specialty::Fetch;
    case StepKind::ChopOnion: return Specialty::Chop;
    case StepKind::GrillMeat:
    case StepKind::PotOnion:
    case StepKind::CookSoup: return Specialty::Cook;
    case StepKind::PlateSteak:
    case StepKind::ServeSteak:
    case StepKind::PlateSoup:
    case StepKind::ServeSoup: return Specialty::Serve;
  }
  return Specialty::Fetch;
}

StationKind station_of(StepKind k) {
  switch (k) {
    case StepKind::GetMeat: return StationKind::MeatBin;
    case StepKind::GrillMeat: return StationKind::Grill;
    case StepKind::PlateSteak:
    case StepKind::PlateSoup: return StationKind::PlateStack;
    case StepKind::ServeSteak:
    case StepKind::ServeSoup: return StationKind::ServeWindow;
    case StepKind::GetOnion: return StationKind::OnionBin;
    case StepKind::ChopOnion: return StationKind::ChopBoard;
    case StepKind::PotOnion:
    case StepKind::CookSoup: return StationKind::Pot;
  }
  return StationKind::Counter;
}

int hands_on_duration(StepKind k) {
  switch (k) {
    case StepKind::ChopOnion: return kChopTicks;
    case StepKind::PlateSteak:
    case StepKind::PlateSoup: return kPlateTicks;
    case StepKind::ServeSteak:
    case StepKind::ServeSoup: return kServeTicks;
    default: return 0;
  }
}

void TaskGraph::index_predecessors() {
  predecessors.assign(steps.size(), {});
  for (auto [before, after] : edges) predecessors[static_cast<std::size_t>(after)].push_back(before);
}

namespace {

StepSpec spec(StepId id, StepKind k) {
  return StepSpec{id, k, station_of(k), hands_on_duration(k), specialty_of(k)};
}

}  // namespace

TaskGraph steak_graph() {
  TaskGraph g;
  g.steps = {spec(0, StepKind::GetMeat), spec(1, StepKind::GrillMeat), spec(2, StepKind::PlateSteak),
             spec(3, StepKind::ServeSteak)};
  g.edges = {{0, 1}, {1, 2}, {2, 3}};
  g.index_predecessors();
  return g;
}

TaskGraph soup_graph() {
  TaskGraph g;
  constexpr StepId cook = 3 * kOnionsPerSoup;
  for (int c = 0; c < kOnionsPerSoup; ++c) {
    g.steps.push_back(spec(3 * c, StepKind::GetOnion));
    g.steps.push_back(spec(3 * c + 1, StepKind::ChopOnion));
    g.steps.push_back(spec(3 * c + 2, StepKind::PotOnion));
    g.edges.push_back({3 * c, 3 * c + 1});
    g.edges.push_back({3 * c + 1, 3 * c + 2});
    g.edges.push_back({3 * c + 2, cook});
  }
  g.steps.push_back(spec(cook, StepKind::CookSoup));
  g.steps.push_back(spec(cook + 1, StepKind::PlateSoup));
  g.steps.push_back(spec(cook + 2, StepKind::ServeSoup));
  g.edges.push_back({cook, cook + 1});
  g.edges.push_back({cook + 1, cook + 2});
  g.index_predecessors();
  return g;
}

int onion_chain(StepId step) {
  return step < 3 * kOnionsPerSoup ? step / 3 : -1;
}

MealInstance make_meal(MealId id, int order_id, MealKind kind) {
  MealInstance m;
  m.meal_id = id;
  m.order_id = order_id;
  m.kind = kind;
  m.graph = kind == MealKind::Steak ? steak_graph() : soup_graph();
  m.step_status.assign(m.graph.steps.size(), {});
  return m;
}

std::vector<Order> build_order_book(double soup_ratio, int n_orders, int meals_per_order) {
  if (!(soup_ratio >= 0.0 && soup_ratio <= 1.0)) throw std::invalid_argument("soup_ratio must lie in [0, 1]");
  const int soups = static_cast<int>(std::floor(soup_ratio * meals_per_order + 0.5));
  std::vector<Order> book;
  MealId next = 0;
  for (int o = 0; o < n_orders; ++o) {
    Order order{o, {}};
    for (int i = 0; i < meals_per_order; ++i)
      order.meals.push_back(make_meal(next++, o, i < soups ? MealKind::OnionSoup : MealKind::Steak));
    book.push_back(std::move(order));
  }
  return book;
}

std::vector<MealInstance> flatten(std::vector<Order> book) {
  std::vector<MealInstance> out;
  for (auto& o : book)
    for (auto& m : o.meals) out.push_back(std::move(m));
  return out;
}

bool is_ready(const MealInstance& meal, StepId step) {
  if (meal.state(step).status != StepStatus::Unclaimed) return false;
  for (StepId p : meal.graph.predecessors[static_cast<std::size_t>(step)])
    if (meal.state(p).status != StepStatus::Done) return false;
  return true;
}

std::vector<StepId> ready_steps(const MealInstance& meal) {
  std::vector<StepId> out;
  for (const auto& s : meal.graph.steps)
    if (is_ready(meal, s.id)) out.push_back(s.id);
  return out;
}

void assign_step(MealInstance& meal, StepId step, AgentId agent) {
  if (!is_ready(meal, step))
    throw ProtocolError("step " + std::to_string(step) + " of meal " + std::to_string(meal.meal_id) +
                        " is not ready for assignment");
  meal.state(step) = {StepStatus::Assigned, agent};
}

void mark_done(MealInstance& meal, StepId step, AgentId agent, Tick tick) {
  auto& st = meal.state(step);
  if (st.status == StepStatus::Done)
    throw ProtocolError("step " + std::to_string(step) + " of meal " + std::to_string(meal.meal_id) +
                        " is already done");
  if (st.status != StepStatus::Assigned || st.assignee != agent)
    throw ProtocolError("step " + std::to_string(step) + " of meal " + std::to_string(meal.meal_id) +
                        " is not assigned to agent " + std::to_string(agent));
  st.status = StepStatus::Done;
  if (step == meal.serve_step()) meal.served_tick = tick;
}

void mark_done_autonomous(MealInstance& meal, StepId step) {
  auto& st = meal.state(step);
  if (st.status == StepStatus::Done) throw ProtocolError("autonomous step already done");
  for (StepId p : meal.graph.predecessors[static_cast<std::size_t>(step)])
    if (meal.state(p).status != StepStatus::Done) throw ProtocolError("autonomous step has open predecessors");
  st = {StepStatus::Done, -1};
}

}  // namespace kitchen
