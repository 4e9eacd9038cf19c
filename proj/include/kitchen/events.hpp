#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "kitchen/types.hpp"

namespace kitchen {

enum class EventKind {
  Agent,  // roster record at tick 0: specialty and traits of one agent
  Claim,
  MsgSent,
  MsgDelivered,
  Accept,
  Decline,
  Join,
  Release,
  StepDone,
  MealServed,
  ActionRejected
};

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct Event {
  Tick tick = 0;
  EventKind kind = EventKind::Claim;
  std::optional<AgentId> actor;
  std::optional<MealId> meal;
  std::optional<StepId> step;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

/// One JSON object per line, keys in the fixed order tick, kind, actor, meal,
/// step, extra. Absent fields are omitted.
std::string to_jsonl(const Event& e);
void write_jsonl(std::ostream& out, const EventLog& log);
std::string to_jsonl(const EventLog& log);

/// Throws std::runtime_error with the offending line number.
EventLog read_jsonl(std::istream& in);
EventLog parse_jsonl(std::string_view text);

}  // namespace kitchen
