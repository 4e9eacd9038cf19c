#include "kitchen/agents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "kitchen/coordination.hpp"

namespace kitchen {

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::HelpRequest: return "HELP_REQUEST";
    case MessageKind::Accept: return "ACCEPT";
    case MessageKind::Decline: return "DECLINE";
  }
  return "?";
}

std::string_view to_string(DistributionPref p) {
  return p == DistributionPref::StartNew ? "START_NEW" : "JOIN_EXISTING";
}

std::string_view to_string(ActionClass c) {
  switch (c) {
    case ActionClass::Continue: return "CONTINUE";
    case ActionClass::Respond: return "RESPOND";
    case ActionClass::TakeStep: return "TAKE_STEP";
    case ActionClass::ClaimMeal: return "CLAIM_MEAL";
    case ActionClass::Wait: return "WAIT";
  }
  return "?";
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string AgreeablenessSpec::to_string() const {
  if (is_fixed()) return format_double(lo);
  return "uniform(" + format_double(lo) + "," + format_double(hi) + ")";
}

AgreeablenessSpec AgreeablenessSpec::parse(std::string_view text) {
  AgreeablenessSpec spec;
  constexpr std::string_view kUniform = "uniform(";
  if (text.starts_with(kUniform)) {
    if (!text.ends_with(")")) throw std::invalid_argument("agreeableness: missing ')'");
    auto body = text.substr(kUniform.size(), text.size() - kUniform.size() - 1);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("agreeableness: expected uniform(lo,hi)");
    spec.lo = parse_double(body.substr(0, comma));
    spec.hi = parse_double(body.substr(comma + 1));
  } else {
    spec.lo = spec.hi = parse_double(text);
  }
  if (!(spec.lo >= 0.0 && spec.hi <= 1.0 && spec.lo <= spec.hi))
    throw std::invalid_argument("agreeableness must satisfy 0 <= lo <= hi <= 1");
  return spec;
}

std::vector<AgentState> assign_personas(int n, const PersonaMix& mix, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("team size must be at least 1");
  std::vector<AgentState> agents(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    agents[static_cast<std::size_t>(i)].id = i;
    agents[static_cast<std::size_t>(i)].specialty = kAllSpecialties[i % 4];
  }

  auto pick = [&](double frac) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    rng.shuffle(ids);
    const auto k = static_cast<std::size_t>(std::floor(frac * n + 0.5));
    ids.resize(std::min(k, ids.size()));
    return ids;
  };
  for (int id : pick(mix.frac_initiative)) agents[static_cast<std::size_t>(id)].traits.initiative = true;
  for (int id : pick(mix.frac_skill_assertion)) agents[static_cast<std::size_t>(id)].traits.skill_assertion = true;
  for (int id : pick(mix.frac_join_existing))
    agents[static_cast<std::size_t>(id)].traits.distribution_pref = DistributionPref::JoinExisting;

  for (auto& a : agents) {
    const auto& spec = mix.agreeableness;
    a.traits.agreeableness = spec.is_fixed() ? spec.lo : spec.lo + (spec.hi - spec.lo) * rng.uniform01();
  }
  if (mix.random_specialties) {
    for (auto& a : agents) a.specialty = kAllSpecialties[rng.below(4)];
  }
  return agents;
}

int approach_station(const WorldState& world, const MealInstance& meal, StepId step, Position from) {
  switch (meal.step(step).kind) {
    case StepKind::GetMeat: return world.nearest(StationKind::MeatBin, from);
    case StepKind::GetOnion: return world.nearest(StationKind::OnionBin, from);
    case StepKind::GrillMeat: return world.bound(StationKind::Grill, meal.meal_id);
    case StepKind::CookSoup: return world.bound(StationKind::Pot, meal.meal_id);
    case StepKind::ChopOnion:
    case StepKind::PotOnion: return world.bound(StationKind::ChopBoard, meal.meal_id, onion_chain(step));
    case StepKind::PlateSteak:
    case StepKind::PlateSoup: return world.nearest(StationKind::PlateStack, from);
    case StepKind::ServeSteak:
    case StepKind::ServeSoup: return world.nearest(StationKind::ServeWindow, from);
  }
  return -1;
}

int free_primary_station(const WorldState& world, MealKind kind, Position from) {
  const auto want = kind == MealKind::Steak ? StationKind::Grill : StationKind::Pot;
  int best = -1;
  int best_d = std::numeric_limits<int>::max();
  for (std::size_t s = 0; s < world.stations.size(); ++s) {
    const auto& st = world.stations[s];
    if (st.kind != want || st.meal >= 0) continue;
    auto d = world.distance_to(static_cast<int>(s), from);
    if (d && *d < best_d) {
      best_d = *d;
      best = static_cast<int>(s);
    }
  }
  return best;
}

bool is_takeable(StepKind k) {
  return k != StepKind::CookSoup && k != StepKind::ServeSteak && k != StepKind::ServeSoup;
}

int free_chop_board(const WorldState& world, Position from) {
  int best = -1;
  int best_d = std::numeric_limits<int>::max();
  for (int s : world.stations_of(StationKind::ChopBoard)) {
    const auto& b = world.stations[static_cast<std::size_t>(s)];
    if (!b.contents.empty() || b.meal >= 0) continue;
    auto d = world.distance_to(s, from);
    if (d && *d < best_d) {
      best_d = *d;
      best = s;
    }
  }
  return best;
}

bool step_has_room(const WorldState& world, const MealInstance& meal, StepId step) {
  if (meal.step(step).kind != StepKind::GetOnion) return true;
  if (world.bound(StationKind::ChopBoard, meal.meal_id, onion_chain(step)) >= 0) return true;
  for (int s : world.stations_of(StationKind::ChopBoard)) {
    const auto& b = world.stations[static_cast<std::size_t>(s)];
    if (b.contents.empty() && b.meal < 0) return true;
  }
  return false;
}

AffordanceSet perceive_affordances(const WorldState& world, const AgentState& agent,
                                   std::span<const MealInstance> meals, const ClaimRegistry& registry) {
  AffordanceSet affs;
  if (agent.assignment)
    affs.candidates.push_back({ActionClass::Continue, agent.assignment->meal, agent.assignment->step, 0, {}});

  auto distance_for = [&](const MealInstance& m, StepId s) -> std::optional<int> {
    const int st = approach_station(world, m, s, agent.pos);
    if (st < 0) return std::nullopt;
    return world.distance_to(st, agent.pos);
  };

  for (const auto& msg : agent.inbox) {
    if (msg.kind != MessageKind::HelpRequest) continue;
    const auto& m = meals[static_cast<std::size_t>(msg.meal)];
    affs.candidates.push_back({ActionClass::Respond, msg.meal, msg.step, distance_for(m, msg.step).value_or(0),
                               m.step(msg.step).specialty});
  }

  bool free_grill = free_primary_station(world, MealKind::Steak, agent.pos) >= 0;
  bool free_pot = free_primary_station(world, MealKind::OnionSoup, agent.pos) >= 0;
  for (const auto& m : meals) {
    if (m.served_tick) continue;
    if (registry.is_claimed(m.meal_id)) {
      for (const auto& spec : m.graph.steps) {
        if (!is_takeable(spec.kind) || !is_ready(m, spec.id) || !step_has_room(world, m, spec.id)) continue;
        if (auto d = distance_for(m, spec.id))
          affs.candidates.push_back({ActionClass::TakeStep, m.meal_id, spec.id, *d, spec.specialty});
      }
    } else {
      const bool room = m.kind == MealKind::Steak ? free_grill : free_pot;
      if (!room) continue;
      if (auto d = distance_for(m, 0)) affs.candidates.push_back({ActionClass::ClaimMeal, m.meal_id, -1, *d, {}});
    }
  }
  affs.candidates.push_back({ActionClass::Wait, -1, -1, 0, {}});
  return affs;
}

std::vector<Candidate> contextual_filter(const AffordanceSet& affs, const AgentState& agent) {
  std::vector<Candidate> out;
  out.reserve(affs.candidates.size());
  for (const auto& c : affs.candidates) {
    const bool step_bound = c.action_class == ActionClass::TakeStep || c.action_class == ActionClass::Respond;
    if (agent.traits.skill_assertion && step_bound && c.specialty && *c.specialty != agent.specialty) continue;
    out.push_back(c);
  }
  const bool join_first = agent.traits.distribution_pref == DistributionPref::JoinExisting;
  auto rank = [join_first](ActionClass cls) {
    switch (cls) {
      case ActionClass::Continue: return 0;
      case ActionClass::Respond: return 1;
      case ActionClass::TakeStep: return join_first ? 2 : 3;
      case ActionClass::ClaimMeal: return join_first ? 3 : 2;
      case ActionClass::Wait: return 4;
    }
    return 5;
  };
  std::stable_sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
    return std::tuple(rank(a.action_class), a.distance, a.meal, a.step) <
           std::tuple(rank(b.action_class), b.distance, b.meal, b.step);
  });
  return out;
}

Candidate choose_action(std::span<const Candidate> ranked) {
  if (ranked.empty()) return Candidate{};
  return ranked.front();
}

std::vector<InboxDecision> process_inbox(AgentState& agent, std::span<const MealInstance> meals, SplitMix64& rng,
                                         Tick /*tick*/, const WorldState* world) {
  std::vector<InboxDecision> out;
  bool accepted = false;
  while (!agent.inbox.empty()) {
    Message msg = agent.inbox.front();
    agent.inbox.pop_front();
    if (msg.kind != MessageKind::HelpRequest) continue;
    InboxDecision d{msg, MessageKind::Decline, {}};
    const auto& meal = meals[static_cast<std::size_t>(msg.meal)];
    if (meal.served_tick || !is_ready(meal, msg.step)) {
      d.reason = "stale";
    } else if (accepted) {
      d.reason = "one_per_tick";
    } else if (agent.assignment || agent.pending || agent.carried) {
      d.reason = "occupied";
    } else if (agent.traits.skill_assertion && meal.step(msg.step).specialty != agent.specialty) {
      d.reason = "specialty";
    } else if (world && !step_has_room(*world, meal, msg.step)) {
      d.reason = "no_station";
    } else if (rng.uniform01() < agent.traits.agreeableness) {
      d.reply = MessageKind::Accept;
      d.reason = "accepted";
      accepted = true;
    } else {
      d.reason = "agreeableness";
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace kitchen
