#pragma once

#include <cstdint>
#include <string_view>

namespace kitchen {

using Tick = std::int64_t;
using AgentId = int;
using MealId = int;
using StepId = int;

enum class Specialty { Fetch, Chop, Cook, Serve };

inline constexpr Specialty kAllSpecialties[] = {Specialty::Fetch, Specialty::Chop, Specialty::Cook,
                                                Specialty::Serve};

std::string_view to_string(Specialty s);
Specialty specialty_from_string(std::string_view s);

}  // namespace kitchen
