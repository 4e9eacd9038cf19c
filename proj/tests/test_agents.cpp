#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

using namespace kitchen;
using fixtures::agent;
using fixtures::take;

namespace {

int count_class(const AffordanceSet& affs, ActionClass c) {
  return static_cast<int>(std::count_if(affs.candidates.begin(), affs.candidates.end(),
                                        [c](const Candidate& x) { return x.action_class == c; }));
}

Message request(AgentId from, AgentId to, MealId meal, StepId step) {
  return {MessageKind::HelpRequest, from, to, meal, step, 0, 0};
}

}  // namespace

TEST_CASE("personas: trait counts, round-robin specialties, agreeableness") {
  SplitMix64 rng(3);
  PersonaMix mix;
  mix.frac_skill_assertion = 1.0;
  auto four = assign_personas(4, mix, rng);
  REQUIRE(four.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(four[static_cast<std::size_t>(i)].id == i);
    CHECK(four[static_cast<std::size_t>(i)].traits.skill_assertion);
    CHECK(four[static_cast<std::size_t>(i)].specialty == kAllSpecialties[static_cast<std::size_t>(i)]);
    CHECK(four[static_cast<std::size_t>(i)].traits.agreeableness == 0.8);
  }

  for (int n : {1, 2, 3, 5, 8, 13}) {
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      PersonaMix m;
      m.frac_initiative = f;
      m.frac_skill_assertion = 1.0 - f;
      m.frac_join_existing = f;
      auto agents = assign_personas(n, m, rng);
      auto count = [&](auto pred) { return static_cast<int>(std::count_if(agents.begin(), agents.end(), pred)); };
      CHECK(count([](auto& a) { return a.traits.initiative; }) == static_cast<int>(std::floor(f * n + 0.5)));
      CHECK(count([](auto& a) { return a.traits.skill_assertion; }) ==
            static_cast<int>(std::floor((1.0 - f) * n + 0.5)));
      CHECK(count([](auto& a) { return a.traits.distribution_pref == DistributionPref::JoinExisting; }) ==
            static_cast<int>(std::floor(f * n + 0.5)));
    }
  }

  PersonaMix uni;
  uni.agreeableness = AgreeablenessSpec::parse("uniform(0.2,0.6)");
  for (const auto& a : assign_personas(50, uni, rng)) {
    CHECK(a.traits.agreeableness >= 0.2);
    CHECK(a.traits.agreeableness < 0.6);
  }
}

TEST_CASE("personas are a deterministic function of the rng state") {
  PersonaMix mix;
  SplitMix64 a(11);
  SplitMix64 b(11);
  auto x = assign_personas(9, mix, a);
  auto y = assign_personas(9, mix, b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].traits.initiative == y[i].traits.initiative);
    CHECK(x[i].traits.skill_assertion == y[i].traits.skill_assertion);
    CHECK(x[i].traits.distribution_pref == y[i].traits.distribution_pref);
  }
  CHECK(a == b);
}

TEST_CASE("agreeableness spec parsing") {
  CHECK(AgreeablenessSpec::parse("0.8") == AgreeablenessSpec::fixed(0.8));
  auto u = AgreeablenessSpec::parse("uniform(0.1,0.9)");
  CHECK(u.lo == 0.1);
  CHECK(u.hi == 0.9);
  CHECK(u.to_string() == "uniform(0.1,0.9)");
  CHECK_THROWS(AgreeablenessSpec::parse("1.5"));
  CHECK_THROWS(AgreeablenessSpec::parse("uniform(0.9,0.1)"));
  CHECK_THROWS(AgreeablenessSpec::parse("often"));
}

TEST_CASE("perception: two unclaimed meals give two claims and a wait") {
  auto w = parse_layout(fixtures::kSmallKitchen);
  auto meals = fixtures::meals({MealKind::Steak, MealKind::OnionSoup});
  ClaimRegistry reg;
  auto a = agent(0, Specialty::Fetch, w.spawns[0]);
  auto affs = perceive_affordances(w, a, meals, reg);
  CHECK(affs.candidates.size() == 3);
  CHECK(count_class(affs, ActionClass::ClaimMeal) == 2);
  CHECK(count_class(affs, ActionClass::Wait) == 1);
  CHECK(count_class(affs, ActionClass::Continue) == 0);
}

TEST_CASE("perception: assignment gives CONTINUE, claimed soup gives three onion steps") {
  auto w = parse_layout(fixtures::kSmallKitchen);
  auto meals = fixtures::meals({MealKind::OnionSoup});
  ClaimRegistry reg;
  EventLog log;
  auto leader = agent(0, Specialty::Serve, w.spawns[0], true);
  auto res = claim_meal(leader, meals[0], reg, w, 0, log);
  REQUIRE(res.accepted);
  CHECK(!res.self_step);

  auto other = agent(1, Specialty::Fetch, w.spawns[1]);
  auto affs = perceive_affordances(w, other, meals, reg);
  CHECK(count_class(affs, ActionClass::TakeStep) == 3);
  for (const auto& c : affs.candidates)
    if (c.action_class == ActionClass::TakeStep) CHECK(meals[0].step(c.step).kind == StepKind::GetOnion);

  other.assignment = Assignment{0, 0};
  CHECK(count_class(perceive_affordances(w, other, meals, reg), ActionClass::Continue) == 1);

  other.inbox.push_back(request(0, 1, 0, 3));
  CHECK(count_class(perceive_affordances(w, other, meals, reg), ActionClass::Respond) == 1);
}

TEST_CASE("skill assertion filters out-of-specialty steps") {
  AffordanceSet affs{{take(0, 1, 4, Specialty::Cook), take(1, 4, 6, Specialty::Chop), {ActionClass::Wait, -1, -1, 0, {}}}};
  auto chopper = agent(0, Specialty::Chop, {1, 1}, true);
  auto ranked = contextual_filter(affs, chopper);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].step == 4);
  CHECK(ranked[1].action_class == ActionClass::Wait);

  chopper.traits.skill_assertion = false;
  ranked = contextual_filter(affs, chopper);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].step == 1);  // nearer
  CHECK(ranked[1].step == 4);
}

TEST_CASE("skill assertion also filters RESPOND but never CLAIM_MEAL") {
  AffordanceSet affs{{{ActionClass::Respond, 0, 1, 2, Specialty::Cook},
                      {ActionClass::ClaimMeal, 3, -1, 9, {}},
                      {ActionClass::Wait, -1, -1, 0, {}}}};
  auto fetcher = agent(0, Specialty::Fetch, {1, 1}, true);
  auto ranked = contextual_filter(affs, fetcher);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].action_class == ActionClass::ClaimMeal);
}

TEST_CASE("distribution preference orders TAKE_STEP and CLAIM_MEAL") {
  AffordanceSet affs{{{ActionClass::ClaimMeal, 2, -1, 3, {}}, take(0, 0, 3, Specialty::Fetch),
                      {ActionClass::Wait, -1, -1, 0, {}}}};
  auto joiner = agent(0, Specialty::Fetch, {1, 1}, false, false, DistributionPref::JoinExisting);
  CHECK(contextual_filter(affs, joiner)[0].action_class == ActionClass::TakeStep);
  auto starter = agent(0, Specialty::Fetch, {1, 1}, false, false, DistributionPref::StartNew);
  CHECK(contextual_filter(affs, starter)[0].action_class == ActionClass::ClaimMeal);
}

TEST_CASE("class ranking: CONTINUE, RESPOND, work, WAIT") {
  AffordanceSet affs{{{ActionClass::Wait, -1, -1, 0, {}},
                      take(0, 0, 0, Specialty::Fetch),
                      {ActionClass::Respond, 1, 2, 50, Specialty::Cook},
                      {ActionClass::Continue, 4, 1, 0, {}}}};
  auto a = agent(0, Specialty::Fetch, {1, 1});
  auto ranked = contextual_filter(affs, a);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].action_class == ActionClass::Continue);
  CHECK(ranked[1].action_class == ActionClass::Respond);
  CHECK(ranked[2].action_class == ActionClass::TakeStep);
  CHECK(ranked[3].action_class == ActionClass::Wait);
}

TEST_CASE("choose_action takes the head of the ranking") {
  auto a = agent(0, Specialty::Fetch, {1, 1});
  std::vector<Candidate> only_wait{{ActionClass::Wait, -1, -1, 0, {}}};
  CHECK(choose_action(only_wait).action_class == ActionClass::Wait);

  AffordanceSet by_distance{{take(0, 0, 5, Specialty::Fetch), take(1, 0, 2, Specialty::Fetch)}};
  CHECK(choose_action(contextual_filter(by_distance, a)).meal == 1);

  AffordanceSet by_id{{take(0, 7, 3, Specialty::Fetch), take(0, 3, 3, Specialty::Fetch)}};
  CHECK(choose_action(contextual_filter(by_id, a)).step == 3);
}

TEST_CASE("ranking is a pure function of its inputs") {
  AffordanceSet affs{{take(2, 1, 4, Specialty::Cook), take(0, 3, 4, Specialty::Fetch), take(1, 0, 1, Specialty::Chop),
                      {ActionClass::ClaimMeal, 5, -1, 2, {}}, {ActionClass::Wait, -1, -1, 0, {}}}};
  auto a = agent(0, Specialty::Fetch, {1, 1}, false, false, DistributionPref::JoinExisting);
  auto first = contextual_filter(affs, a);
  std::reverse(affs.candidates.begin(), affs.candidates.end());
  CHECK(contextual_filter(affs, a) == first);
}

TEST_CASE("inbox: accept, decline, specialty refusal") {
  auto meals = fixtures::meals({MealKind::OnionSoup});
  SplitMix64 rng(1);

  auto keen = agent(1, Specialty::Chop, {1, 1}, false, false, DistributionPref::StartNew, 1.0);
  keen.inbox.push_back(request(0, 1, 0, 0));
  auto d = process_inbox(keen, meals, rng, 0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].reply == MessageKind::Accept);

  auto stubborn = agent(1, Specialty::Chop, {1, 1}, false, false, DistributionPref::StartNew, 0.0);
  stubborn.inbox.push_back(request(0, 1, 0, 0));
  d = process_inbox(stubborn, meals, rng, 0);
  CHECK(d[0].reply == MessageKind::Decline);
  CHECK(d[0].reason == "agreeableness");

  auto specialist = agent(1, Specialty::Fetch, {1, 1}, true, false, DistributionPref::StartNew, 1.0);
  meals[0].state(0) = {StepStatus::Done, 0};  // make CHOP of chain 0 ready
  specialist.inbox.push_back(request(0, 1, 0, 1));
  const auto before = rng;
  d = process_inbox(specialist, meals, rng, 0);
  CHECK(d[0].reply == MessageKind::Decline);
  CHECK(d[0].reason == "specialty");
  CHECK(rng == before);  // no draw spent on a refusal
}

TEST_CASE("inbox: at most one accept per tick, stale requests declined") {
  auto meals = fixtures::meals({MealKind::OnionSoup});
  meals[0].state(6) = {StepStatus::Assigned, 4};
  SplitMix64 rng(1);
  auto a = agent(1, Specialty::Chop, {1, 1}, false, false, DistributionPref::StartNew, 1.0);
  a.inbox.push_back(request(0, 1, 0, 0));
  a.inbox.push_back(request(2, 1, 0, 3));
  a.inbox.push_back(request(3, 1, 0, 6));
  auto d = process_inbox(a, meals, rng, 0);
  REQUIRE(d.size() == 3);
  CHECK(d[0].reply == MessageKind::Accept);
  CHECK(d[1].reason == "one_per_tick");
  CHECK(d[2].reason == "stale");
  CHECK(a.inbox.empty());
}

TEST_CASE("acceptance frequency is monotone in agreeableness") {
  constexpr int kTrials = 1000;
  auto meals = fixtures::meals({MealKind::Steak});
  std::vector<double> freq;
  for (int k = 0; k <= 10; ++k) {
    const double p = k / 10.0;
    SplitMix64 rng(99);
    int accepted = 0;
    for (int t = 0; t < kTrials; ++t) {
      auto a = agent(1, Specialty::Fetch, {1, 1}, false, false, DistributionPref::StartNew, p);
      a.inbox.push_back(request(0, 1, 0, 0));
      if (process_inbox(a, meals, rng, 0)[0].reply == MessageKind::Accept) ++accepted;
    }
    const double f = static_cast<double>(accepted) / kTrials;
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    CHECK(std::abs(f - p) <= 3 * sigma + 1e-12);
    freq.push_back(f);
  }
  for (std::size_t i = 1; i < freq.size(); ++i) {
    const double p0 = (i - 1) / 10.0;
    const double p1 = i / 10.0;
    const double tol = 3 * std::sqrt((p0 * (1 - p0) + p1 * (1 - p1)) / kTrials);
    CHECK(freq[i] >= freq[i - 1] - tol);
  }
  CHECK(freq.front() == 0.0);
  CHECK(freq.back() == 1.0);
}
