#include "kitchen/events.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace kitchen {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 11> kNames = {{
    {EventKind::Agent, "AGENT"},
    {EventKind::Claim, "CLAIM"},
    {EventKind::MsgSent, "MSG_SENT"},
    {EventKind::MsgDelivered, "MSG_DELIVERED"},
    {EventKind::Accept, "ACCEPT"},
    {EventKind::Decline, "DECLINE"},
    {EventKind::Join, "JOIN"},
    {EventKind::Release, "RELEASE"},
    {EventKind::StepDone, "STEP_DONE"},
    {EventKind::MealServed, "MEAL_SERVED"},
    {EventKind::ActionRejected, "ACTION_REJECTED"},
}};

}  // namespace

std::string_view to_string(EventKind k) {
  for (auto& [kind, name] : kNames)
    if (kind == k) return name;
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (auto& [kind, name] : kNames)
    if (name == s) return kind;
  throw std::runtime_error("unknown event kind '" + std::string(s) + "'");
}

std::string to_jsonl(const Event& e) {
  nlohmann::ordered_json j;
  j["tick"] = e.tick;
  j["kind"] = to_string(e.kind);
  if (e.actor) j["actor"] = *e.actor;
  if (e.meal) j["meal"] = *e.meal;
  if (e.step) j["step"] = *e.step;
  if (!e.extra.empty()) j["extra"] = e.extra;
  return j.dump();
}

void write_jsonl(std::ostream& out, const EventLog& log) {
  for (const auto& e : log) out << to_jsonl(e) << '\n';
}

std::string to_jsonl(const EventLog& log) {
  std::ostringstream os;
  write_jsonl(os, log);
  return os.str();
}

EventLog read_jsonl(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      Event e;
      e.tick = j.at("tick").get<Tick>();
      e.kind = event_kind_from_string(j.at("kind").get<std::string>());
      if (j.contains("actor")) e.actor = j["actor"].get<AgentId>();
      if (j.contains("meal")) e.meal = j["meal"].get<MealId>();
      if (j.contains("step")) e.step = j["step"].get<StepId>();
      if (j.contains("extra")) e.extra = j["extra"];
      log.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw std::runtime_error("event log line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return log;
}

EventLog parse_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_jsonl(in);
}

}  // namespace kitchen
