#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rgvlm/env/types.hpp"

namespace rgvlm::env {

// One scripted action toward the current subtask, or nullopt when the goal
// is unreachable. When the subtask's predicate already holds (it just hasn't
// been credited yet) this returns a guaranteed no-op so the next step() call
// registers the completion.
std::optional<Action> plan_next_action(const TaskSpec& task, const GridState& state);

struct Rollout {
  std::vector<GridState> states;  // length actions.size() + 1
  std::vector<Action> actions;
  bool completed = false;  // all subtasks done within budget
};

// Scripted demonstration. With suboptimality > 0, each step is replaced by a
// uniform random movement with that probability, and the step budget widens
// to leave room for the detours. Deterministic in (task, suboptimality, seed).
Rollout scripted_rollout(const TaskSpec& task, double suboptimality, std::uint64_t seed);

}  // namespace rgvlm::env
