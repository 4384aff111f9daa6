#include "rgvlm/env/env.hpp"

#include <array>

namespace rgvlm::env {

const char* name_of(Color c) {
  switch (c) {
    case Color::red: return "red";
    case Color::green: return "green";
    case Color::blue: return "blue";
    case Color::yellow: return "yellow";
  }
  return "?";
}

const char* name_of(ObjectKind k) {
  switch (k) {
    case ObjectKind::key: return "key";
    case ObjectKind::ball: return "ball";
    case ObjectKind::box: return "box";
  }
  return "?";
}

const char* name_of(ReceptacleKind k) {
  switch (k) {
    case ReceptacleKind::table: return "table";
    case ReceptacleKind::bin: return "bin";
  }
  return "?";
}

bool blocks_agent(const BoardSpec& board, const GridState& state, GridPos cell) {
  if (cell.x < 0 || cell.x >= board.width || cell.y < 0 || cell.y >= board.height) return true;
  for (const auto& r : board.receptacles)
    if (r.pos == cell) return true;
  for (std::size_t i = 0; i < board.doors.size(); ++i)
    if (board.doors[i].pos == cell && !state.door_open[i]) return true;
  return false;
}

namespace {

// own cell, then up, right, down, left
std::array<GridPos, 5> scan_cells(GridPos at) {
  return {{at,
           {at.x, at.y - 1},
           {at.x + 1, at.y},
           {at.x, at.y + 1},
           {at.x - 1, at.y}}};
}

}  // namespace

std::optional<int> scan_pick_target(const BoardSpec& board, const GridState& state) {
  for (GridPos cell : scan_cells(state.agent)) {
    for (std::size_t i = 0; i < board.objects.size(); ++i) {
      if (static_cast<int>(i) == state.carried) continue;
      if (state.object_pos[i] == cell) return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::optional<int> scan_place_target(const BoardSpec& board, const GridState& state) {
  for (GridPos cell : scan_cells(state.agent)) {
    for (std::size_t r = 0; r < board.receptacles.size(); ++r) {
      if (!(board.receptacles[r].pos == cell)) continue;
      // a receptacle already holding an object cannot take another
      bool occupied = false;
      for (std::size_t i = 0; i < board.objects.size(); ++i) {
        if (static_cast<int>(i) == state.carried) continue;
        if (state.object_pos[i] == cell) occupied = true;
      }
      if (!occupied) return static_cast<int>(r);
    }
  }
  return std::nullopt;
}

std::optional<int> scan_toggle_target(const BoardSpec& board, const GridState& state) {
  for (GridPos cell : scan_cells(state.agent)) {
    for (std::size_t d = 0; d < board.doors.size(); ++d)
      if (board.doors[d].pos == cell) return static_cast<int>(d);
  }
  return std::nullopt;
}

bool subtask_satisfied(const TaskSpec& task, const SubTask& sub, const GridState& state) {
  switch (sub.kind) {
    case SubTaskKind::goto_object:
      return state.object_pos[sub.object] == state.agent;
    case SubTaskKind::goto_receptacle:
      return manhattan(state.agent, task.board.receptacles[sub.receptacle].pos) == 1;
    case SubTaskKind::pick:
      return state.carried == sub.object;
    case SubTaskKind::place:
      return state.carried != sub.object &&
             state.object_pos[sub.object] == task.board.receptacles[sub.receptacle].pos;
    case SubTaskKind::toggle:
      return state.door_open[sub.door];
  }
  return false;
}

GridPos subtask_target_pos(const TaskSpec& task, const SubTask& sub, const GridState& state) {
  switch (sub.kind) {
    case SubTaskKind::goto_object:
    case SubTaskKind::pick:
      return state.object_pos[sub.object];
    case SubTaskKind::goto_receptacle:
    case SubTaskKind::place:
      return task.board.receptacles[sub.receptacle].pos;
    case SubTaskKind::toggle:
      return task.board.doors[sub.door].pos;
  }
  return state.agent;
}

StepOutcome step(const TaskSpec& task, const GridState& state, Action action) {
  StepOutcome out;
  GridState next = state;

  switch (action) {
    case Action::up:
    case Action::down:
    case Action::left:
    case Action::right: {
      GridPos to = state.agent;
      if (action == Action::up) to.y -= 1;
      if (action == Action::down) to.y += 1;
      if (action == Action::left) to.x -= 1;
      if (action == Action::right) to.x += 1;
      if (!blocks_agent(task.board, state, to)) next.agent = to;
      break;
    }
    case Action::pick: {
      if (state.carried < 0) {
        if (auto i = scan_pick_target(task.board, state)) next.carried = *i;
      }
      break;
    }
    case Action::place: {
      if (state.carried >= 0) {
        if (auto r = scan_place_target(task.board, state)) {
          next.object_pos[state.carried] = task.board.receptacles[*r].pos;
          next.carried = -1;
        }
      }
      break;
    }
    case Action::toggle: {
      if (auto d = scan_toggle_target(task.board, state)) {
        next.door_open[*d] = !next.door_open[*d];
      }
      break;
    }
  }

  // a carried object rides along with the agent
  if (next.carried >= 0) next.object_pos[next.carried] = next.agent;

  const int n = static_cast<int>(task.subtasks.size());
  if (next.subtasks_done < n &&
      subtask_satisfied(task, task.subtasks[next.subtasks_done], next)) {
    next.subtasks_done += 1;  // at most one completion per step
    out.completed_subtask = true;
  }

  out.done = next.subtasks_done >= n;
  out.next = next;
  out.shaped = shaped_reward(task, state, action, next);
  return out;
}

double shaped_reward(const TaskSpec& task, const GridState& s, Action /*a*/, const GridState& next) {
  if (next.subtasks_done > s.subtasks_done) return 1.0;
  const int n = static_cast<int>(task.subtasks.size());
  if (s.subtasks_done >= n) return 0.0;
  const SubTask& sub = task.subtasks[s.subtasks_done];
  const int before = manhattan(s.agent, subtask_target_pos(task, sub, s));
  const int after = manhattan(next.agent, subtask_target_pos(task, sub, next));
  return after < before ? 0.3 : 0.0;
}

GridState reset(const TaskSpec& task) { return task.initial; }

}  // namespace rgvlm::env
