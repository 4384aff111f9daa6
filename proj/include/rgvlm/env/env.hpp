#pragma once

#include <optional>

#include "rgvlm/env/types.hpp"

namespace rgvlm::env {

// True if an agent cannot enter the cell: outside the board, a receptacle,
// or a closed door. Objects never block.
bool blocks_agent(const BoardSpec& board, const GridState& state, GridPos cell);

// Interaction scan order: own cell first, then up, right, down, left.
// Returns the index of the first entity the interaction would target, or
// nullopt when there is nothing to act on. These are exposed so the planner
// can reason about what pick/place/toggle will actually hit.
std::optional<int> scan_pick_target(const BoardSpec& board, const GridState& state);
std::optional<int> scan_place_target(const BoardSpec& board, const GridState& state);
std::optional<int> scan_toggle_target(const BoardSpec& board, const GridState& state);

// Whether the subtask's goal predicate holds in `state`.
bool subtask_satisfied(const TaskSpec& task, const SubTask& sub, const GridState& state);

// Position the current subtask is "about" in `state` (the object, receptacle
// or door being approached). Used by the shaped reward's distance term.
GridPos subtask_target_pos(const TaskSpec& task, const SubTask& sub, const GridState& state);

// Apply one action. At most one subtask completes per step, checked against
// the current subtask after the action resolves.
StepOutcome step(const TaskSpec& task, const GridState& state, Action action);

// Dense progress reward for a transition: 1.0 when the step completed a
// subtask, 0.3 when it strictly reduced Manhattan distance to the current
// subtask's target, 0.0 otherwise.
double shaped_reward(const TaskSpec& task, const GridState& s, Action a, const GridState& next);

GridState reset(const TaskSpec& task);

}  // namespace rgvlm::env
