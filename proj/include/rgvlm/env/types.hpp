#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

namespace rgvlm::env {

enum class Color : int { red = 0, green = 1, blue = 2, yellow = 3 };
enum class ObjectKind : int { key = 0, ball = 1, box = 2 };
enum class ReceptacleKind : int { table = 0, bin = 1 };

inline constexpr int kNumColors = 4;
inline constexpr int kNumObjectKinds = 3;
inline constexpr int kNumReceptacleKinds = 2;

const char* name_of(Color c);
const char* name_of(ObjectKind k);
const char* name_of(ReceptacleKind k);

struct GridPos {
  int x = 0;
  int y = 0;
  bool operator==(const GridPos&) const = default;
};

inline int manhattan(GridPos a, GridPos b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

// Static identity of a pickable object. Position lives in GridState.
struct ObjectSpec {
  ObjectKind kind = ObjectKind::key;
  Color color = Color::red;
};

struct ReceptacleSpec {
  ReceptacleKind kind = ReceptacleKind::table;
  GridPos pos;
};

struct DoorSpec {
  GridPos pos;  // doors start closed
};

// Immutable board layout for one task. Entity order is significant: subtasks
// and GridState vectors index into these.
struct BoardSpec {
  int width = 8;
  int height = 8;
  std::vector<ObjectSpec> objects;
  std::vector<ReceptacleSpec> receptacles;
  std::vector<DoorSpec> doors;
};

// Everything that changes during an episode. `carried` is an index into
// BoardSpec::objects (-1 when empty-handed); a carried object's position
// tracks the agent. `subtasks_done` counts completed subtasks, which makes
// the state Markov with respect to the shaped reward.
struct GridState {
  GridPos agent;
  std::vector<GridPos> object_pos;
  int carried = -1;
  std::vector<bool> door_open;
  int subtasks_done = 0;
  bool operator==(const GridState&) const = default;
};

enum class SubTaskKind : int {
  goto_object = 0,
  goto_receptacle = 1,
  pick = 2,
  place = 3,
  toggle = 4,
};

struct SubTask {
  SubTaskKind kind = SubTaskKind::goto_object;
  int object = -1;      // goto_object, pick, place
  int receptacle = -1;  // goto_receptacle, place
  int door = -1;        // toggle
};

struct TaskSpec {
  std::string task_id;
  std::string instruction;
  BoardSpec board;
  GridState initial;
  std::vector<SubTask> subtasks;
  std::uint64_t seed = 0;  // the seed generate_task was called with
};

// Discrete action set. Movement first, then the three interactions.
enum class Action : int {
  up = 0,
  down = 1,
  left = 2,
  right = 3,
  pick = 4,
  place = 5,
  toggle = 6,
};

inline constexpr int kNumActions = 7;

struct StepOutcome {
  GridState next;
  double shaped = 0.0;           // dense progress reward for this transition
  bool completed_subtask = false;
  bool done = false;             // all subtasks finished
};

struct EnvConfig {
  int width = 8;
  int height = 8;
  int object_count = 4;  // pickable objects per board
  int cell_px = 8;       // rendered cell size in pixels
};

inline void to_json(nlohmann::json& j, const EnvConfig& c) {
  j = {{"width", c.width},
       {"height", c.height},
       {"object_count", c.object_count},
       {"cell_px", c.cell_px}};
}

inline void from_json(const nlohmann::json& j, EnvConfig& c) {
  c.width = j.value("width", 8);
  c.height = j.value("height", 8);
  c.object_count = j.value("object_count", 4);
  c.cell_px = j.value("cell_px", 8);
}

// GridState round-trips through JSON so trajectories can live in JSONL files.
inline void to_json(nlohmann::json& j, const GridState& s) {
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& p : s.object_pos) objs.push_back({p.x, p.y});
  nlohmann::json doors = nlohmann::json::array();
  for (bool b : s.door_open) doors.push_back(b ? 1 : 0);
  j = {{"agent", {s.agent.x, s.agent.y}},
       {"objects", objs},
       {"carried", s.carried},
       {"doors", doors},
       {"progress", s.subtasks_done}};
}

inline void from_json(const nlohmann::json& j, GridState& s) {
  s.agent = {j.at("agent").at(0).get<int>(), j.at("agent").at(1).get<int>()};
  s.object_pos.clear();
  for (const auto& p : j.at("objects"))
    s.object_pos.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  s.carried = j.at("carried").get<int>();
  s.door_open.clear();
  for (const auto& d : j.at("doors")) s.door_open.push_back(d.get<int>() != 0);
  s.subtasks_done = j.at("progress").get<int>();
}

}  // namespace rgvlm::env
