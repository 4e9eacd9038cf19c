#pragma once

#include <string_view>

#include "kitchen/types.hpp"

namespace kitchen {

enum class MessageKind { HelpRequest, Accept, Decline };

std::string_view to_string(MessageKind k);

struct Message {
  MessageKind kind = MessageKind::HelpRequest;
  AgentId sender = -1;
  AgentId recipient = -1;
  MealId meal = -1;
  StepId step = -1;
  Tick issued_tick = 0;
  Tick deliver_tick = 0;

  bool operator==(const Message&) const = default;
};

}  // namespace kitchen
