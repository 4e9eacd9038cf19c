#pragma once

#include <string_view>
#include <vector>

#include "kitchen/agents.hpp"
#include "kitchen/coordination.hpp"
#include "kitchen/grid.hpp"
#include "kitchen/tasks.hpp"

namespace fixtures {

// Small kitchen with every station kind; spawns in the middle.
inline constexpr std::string_view kSmallKitchen =
    "##########\n"
    "G........M\n"
    "G........O\n"
    "C...AA...#\n"
    "C...AA...D\n"
    "P........#\n"
    "P........#\n"
    "####S#####\n";

inline kitchen::AgentState agent(kitchen::AgentId id, kitchen::Specialty sp, kitchen::Position pos,
                                 bool skill_assertion = false, bool initiative = false,
                                 kitchen::DistributionPref pref = kitchen::DistributionPref::StartNew,
                                 double agreeableness = 0.8) {
  kitchen::AgentState a;
  a.id = id;
  a.specialty = sp;
  a.pos = pos;
  a.traits.skill_assertion = skill_assertion;
  a.traits.initiative = initiative;
  a.traits.distribution_pref = pref;
  a.traits.agreeableness = agreeableness;
  return a;
}

inline std::vector<kitchen::MealInstance> meals(std::initializer_list<kitchen::MealKind> kinds) {
  std::vector<kitchen::MealInstance> out;
  for (auto k : kinds) out.push_back(kitchen::make_meal(static_cast<kitchen::MealId>(out.size()), 0, k));
  return out;
}

inline kitchen::Candidate take(kitchen::MealId m, kitchen::StepId s, int d, kitchen::Specialty sp) {
  return {kitchen::ActionClass::TakeStep, m, s, d, sp};
}

}  // namespace fixtures
