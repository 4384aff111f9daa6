#include "rgvlm/env/planner.hpp"

#include <deque>

#include "rgvlm/common/rng.hpp"
#include "rgvlm/env/env.hpp"

namespace rgvlm::env {

namespace {

// Would the interaction fire on the right entity if the agent stood at `cell`?
bool is_goal_cell(const TaskSpec& task, const GridState& state, const SubTask& sub, GridPos cell) {
  GridState probe = state;
  probe.agent = cell;
  if (probe.carried >= 0) probe.object_pos[probe.carried] = cell;
  switch (sub.kind) {
    case SubTaskKind::goto_object:
      return state.object_pos[sub.object] == cell;
    case SubTaskKind::goto_receptacle:
      return manhattan(cell, task.board.receptacles[sub.receptacle].pos) == 1;
    case SubTaskKind::pick:
      return scan_pick_target(task.board, probe) == sub.object;
    case SubTaskKind::place:
      return scan_place_target(task.board, probe) == sub.receptacle;
    case SubTaskKind::toggle:
      return scan_toggle_target(task.board, probe) == sub.door;
  }
  return false;
}

Action interaction_of(SubTaskKind kind) {
  switch (kind) {
    case SubTaskKind::pick: return Action::pick;
    case SubTaskKind::place: return Action::place;
    case SubTaskKind::toggle: return Action::toggle;
    default: return Action::pick;  // goto kinds never reach here
  }
}

// Shortest-path first move to any goal cell. Fixed expansion order
// (up, right, down, left) keeps the result deterministic.
std::optional<Action> bfs_first_move(const TaskSpec& task, const GridState& state,
                                     const SubTask& sub) {
  const int w = task.board.width;
  const int h = task.board.height;
  auto idx = [w](GridPos p) { return p.y * w + p.x; };

  static constexpr Action kMoves[4] = {Action::up, Action::right, Action::down, Action::left};
  static constexpr int kDx[4] = {0, 1, 0, -1};
  static constexpr int kDy[4] = {-1, 0, 1, 0};

  std::vector<int> came_by(static_cast<std::size_t>(w) * h, -1);  // move index into kMoves
  std::vector<int> parent(static_cast<std::size_t>(w) * h, -1);
  std::deque<GridPos> queue;
  queue.push_back(state.agent);
  came_by[idx(state.agent)] = 4;  // sentinel: start

  while (!queue.empty()) {
    GridPos at = queue.front();
    queue.pop_front();
    for (int m = 0; m < 4; ++m) {
      GridPos to{at.x + kDx[m], at.y + kDy[m]};
      if (blocks_agent(task.board, state, to)) continue;
      if (came_by[idx(to)] != -1) continue;
      came_by[idx(to)] = m;
      parent[idx(to)] = idx(at);
      if (is_goal_cell(task, state, sub, to)) {
        // walk back to the first move out of the start cell
        int cur = idx(to);
        while (parent[cur] != idx(state.agent) && parent[cur] != -1) cur = parent[cur];
        return kMoves[came_by[cur]];
      }
      queue.push_back(to);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Action> plan_next_action(const TaskSpec& task, const GridState& state) {
  const int n = static_cast<int>(task.subtasks.size());
  if (state.subtasks_done >= n) return std::nullopt;
  const SubTask& sub = task.subtasks[state.subtasks_done];

  // Predicate already holds but hasn't been credited: emit a guaranteed no-op
  // (pick while carrying / place while empty-handed) so step() records it.
  if (subtask_satisfied(task, sub, state))
    return state.carried >= 0 ? Action::pick : Action::place;

  if (is_goal_cell(task, state, sub, state.agent)) return interaction_of(sub.kind);

  return bfs_first_move(task, state, sub);
}

Rollout scripted_rollout(const TaskSpec& task, double suboptimality, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, "rollout"));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> move(0, 3);

  const int n = static_cast<int>(task.subtasks.size());
  std::size_t budget = static_cast<std::size_t>(task.board.width) * task.board.height * (n + 1);
  if (suboptimality > 0.0) budget *= 4;

  Rollout out;
  GridState state = task.initial;
  out.states.push_back(state);

  while (state.subtasks_done < n && out.actions.size() < budget) {
    Action a;
    if (suboptimality > 0.0 && coin(rng) < suboptimality) {
      a = static_cast<Action>(move(rng));  // random detour step
    } else {
      auto planned = plan_next_action(task, state);
      if (!planned) break;  // unreachable goal; leave the rollout incomplete
      a = *planned;
    }
    StepOutcome step_out = step(task, state, a);
    out.actions.push_back(a);
    state = step_out.next;
    out.states.push_back(state);
  }
  out.completed = state.subtasks_done >= n;
  return out;
}

}  // namespace rgvlm::env
