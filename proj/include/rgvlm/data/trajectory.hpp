#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgvlm/env/types.hpp"

namespace rgvlm::data {

struct Instruction {
  std::string text;
  std::string task_id;
};

// Enough to regenerate the exact TaskSpec this trajectory was rolled out on:
// generate_task(env_config, seed, num_subtasks) is deterministic.
struct TrajectoryMeta {
  std::uint64_t seed = 0;
  int num_subtasks = 0;
  double suboptimality = 0.0;
};

struct Trajectory {
  std::string id;
  Instruction instruction;
  std::vector<env::GridState> states;  // states.size() == actions.size() + 1
  std::vector<env::Action> actions;
  TrajectoryMeta meta;

  std::size_t num_transitions() const { return actions.size(); }
};

// Per-transition rewards from one labeling source ("oracle", "lvlm",
// "sparse", ...). rewards.size() must equal the trajectory's action count.
struct RewardLabels {
  std::string trajectory_id;
  std::string source;
  std::vector<double> rewards;
};

struct DatasetManifest {
  int schema_version = 1;
  std::vector<std::string> ids;  // trajectory order in the jsonl file
  env::EnvConfig env_config;
  std::uint64_t generator_seed = 0;
};

}  // namespace rgvlm::data
