#pragma once

#include <cstdint>

#include "rgvlm/env/types.hpp"

namespace rgvlm::env {

// Sample a solvable task: board layout, subtask chain of length
// `num_subtasks`, matching natural-language instruction, and initial state.
// Deterministic in (config, seed, num_subtasks). Every candidate is validated
// with a scripted rollout before being returned; throws ValidationError when
// no solvable layout is found within the retry budget (config too dense).
TaskSpec generate_task(const EnvConfig& config, std::uint64_t seed, int num_subtasks);

}  // namespace rgvlm::env
