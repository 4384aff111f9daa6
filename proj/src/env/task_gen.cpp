#include "rgvlm/env/task_gen.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/env/instructions.hpp"
#include "rgvlm/env/planner.hpp"

namespace rgvlm::env {

namespace {

constexpr int kMaxAttempts = 64;
constexpr int kMinLandmarkSpacing = 3;  // receptacles/doors pairwise Manhattan distance

struct BoardSample {
  BoardSpec board;
  GridState initial;
};

GridPos sample_cell(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dx(0, w - 1);
  std::uniform_int_distribution<int> dy(0, h - 1);
  return {dx(rng), dy(rng)};
}

// Receptacles and the door are kept at least kMinLandmarkSpacing apart so no
// cell is adjacent to two of them and interactions are never ambiguous.
bool sample_board(const EnvConfig& cfg, std::mt19937_64& rng, BoardSample& out) {
  const int w = cfg.width;
  const int h = cfg.height;

  std::vector<GridPos> landmarks;
  for (int tries = 0; tries < 200 && landmarks.size() < 3; ++tries) {
    GridPos p = sample_cell(w, h, rng);
    bool ok = true;
    for (GridPos q : landmarks)
      if (manhattan(p, q) < kMinLandmarkSpacing) ok = false;
    if (ok) landmarks.push_back(p);
  }
  if (landmarks.size() < 3) return false;

  BoardSpec board;
  board.width = w;
  board.height = h;
  board.receptacles = {{ReceptacleKind::table, landmarks[0]}, {ReceptacleKind::bin, landmarks[1]}};
  board.doors = {{landmarks[2]}};

  // distinct (kind, color) identities so instructions are unambiguous
  std::vector<int> combos(kNumObjectKinds * kNumColors);
  std::iota(combos.begin(), combos.end(), 0);
  std::shuffle(combos.begin(), combos.end(), rng);
  for (int i = 0; i < cfg.object_count; ++i) {
    board.objects.push_back({static_cast<ObjectKind>(combos[i] / kNumColors),
                             static_cast<Color>(combos[i] % kNumColors)});
  }

  auto taken = [&](GridPos p, const std::vector<GridPos>& extra) {
    for (GridPos q : landmarks)
      if (p == q) return true;
    for (GridPos q : extra)
      if (p == q) return true;
    return false;
  };

  std::vector<GridPos> placed;
  for (int i = 0; i < cfg.object_count; ++i) {
    GridPos p;
    int tries = 0;
    do {
      if (++tries > 200) return false;
      p = sample_cell(w, h, rng);
    } while (taken(p, placed));
    placed.push_back(p);
  }

  GridPos agent;
  int tries = 0;
  do {
    if (++tries > 200) return false;
    agent = sample_cell(w, h, rng);
  } while (taken(agent, placed));

  out.board = std::move(board);
  out.initial.agent = agent;
  out.initial.object_pos = std::move(placed);
  out.initial.carried = -1;
  out.initial.door_open.assign(out.board.doors.size(), false);
  out.initial.subtasks_done = 0;
  return true;
}

// Entity reference for the "no goto straight back to what you just handled"
// rule: kind tag (0 object, 1 receptacle, 2 door) plus index.
using EntityRef = std::pair<int, int>;

bool sample_chain(const BoardSpec& board, int n, std::mt19937_64& rng,
                  std::vector<SubTask>& out) {
  const int num_objects = static_cast<int>(board.objects.size());
  const int num_receptacles = static_cast<int>(board.receptacles.size());

  int carried = -1;
  std::set<int> picked;
  std::vector<int> placed_at(num_receptacles, -1);   // object index held by receptacle
  std::vector<int> on_receptacle(num_objects, -1);   // receptacle an object sits on
  bool door_toggled = false;
  std::set<EntityRef> prev;

  out.clear();
  for (int step = 0; step < n; ++step) {
    std::vector<SubTask> candidates;
    for (int i = 0; i < num_objects; ++i) {
      // goto requires a reachable, free-standing object that was not the
      // previous subtask's focus (that would be trivially pre-satisfied)
      if (i != carried && on_receptacle[i] < 0 && !prev.count({0, i}))
        candidates.push_back({SubTaskKind::goto_object, i, -1, -1});
    }
    for (int r = 0; r < num_receptacles; ++r) {
      if (!prev.count({1, r}))
        candidates.push_back({SubTaskKind::goto_receptacle, -1, r, -1});
    }
    if (carried < 0) {
      for (int i = 0; i < num_objects; ++i)
        if (!picked.count(i)) candidates.push_back({SubTaskKind::pick, i, -1, -1});
    } else {
      for (int r = 0; r < num_receptacles; ++r)
        if (placed_at[r] < 0) candidates.push_back({SubTaskKind::place, carried, r, -1});
    }
    if (!door_toggled && !board.doors.empty())
      candidates.push_back({SubTaskKind::toggle, -1, -1, 0});

    if (candidates.empty()) return false;
    std::uniform_int_distribution<std::size_t> d(0, candidates.size() - 1);
    SubTask chosen = candidates[d(rng)];

    prev.clear();
    switch (chosen.kind) {
      case SubTaskKind::goto_object:
        prev.insert({0, chosen.object});
        break;
      case SubTaskKind::goto_receptacle:
        prev.insert({1, chosen.receptacle});
        break;
      case SubTaskKind::pick:
        carried = chosen.object;
        picked.insert(chosen.object);
        if (on_receptacle[chosen.object] >= 0) {
          placed_at[on_receptacle[chosen.object]] = -1;
          on_receptacle[chosen.object] = -1;
        }
        prev.insert({0, chosen.object});
        break;
      case SubTaskKind::place:
        placed_at[chosen.receptacle] = chosen.object;
        on_receptacle[chosen.object] = chosen.receptacle;
        carried = -1;
        prev.insert({0, chosen.object});
        prev.insert({1, chosen.receptacle});
        break;
      case SubTaskKind::toggle:
        door_toggled = true;
        prev.insert({2, chosen.door});
        break;
    }
    out.push_back(chosen);
  }
  return true;
}

}  // namespace

TaskSpec generate_task(const EnvConfig& config, std::uint64_t seed, int num_subtasks) {
  if (num_subtasks < 1 || num_subtasks > 8)
    throw ValidationError("generate_task: num_subtasks must be in [1, 8], got " +
                          std::to_string(num_subtasks));
  if (config.object_count < 1 || config.object_count > kNumObjectKinds * kNumColors)
    throw ValidationError("generate_task: object_count must be in [1, 12], got " +
                          std::to_string(config.object_count));
  const int cells = config.width * config.height;
  if (cells < (config.object_count + 4) * 2)
    throw ValidationError("generate_task: board too small for requested entity count");

  auto rng = make_rng(derive_seed(seed, "taskgen"));

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    BoardSample sample;
    if (!sample_board(config, rng, sample)) continue;

    std::vector<SubTask> chain;
    if (!sample_chain(sample.board, num_subtasks, rng, chain)) continue;

    TaskSpec task;
    task.task_id = "task-" + std::to_string(seed) + "-" + std::to_string(num_subtasks);
    task.board = std::move(sample.board);
    task.initial = std::move(sample.initial);
    task.subtasks = std::move(chain);
    task.seed = seed;
    task.instruction = instruction_of(task.board, task.subtasks, rng);

    // keep only layouts the scripted planner can actually solve
    Rollout probe = scripted_rollout(task, 0.0, derive_seed(seed, "feasibility"));
    if (probe.completed) return task;
  }
  throw ValidationError("generate_task: no solvable layout after " +
                        std::to_string(kMaxAttempts) + " attempts (config too dense)");
}

}  // namespace rgvlm::env
