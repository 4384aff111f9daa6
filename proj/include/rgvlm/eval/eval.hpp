#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rgvlm/env/types.hpp"

namespace rgvlm::eval {

enum class InitMode { fixed, randomized };

const char* name_of(InitMode m);

struct EvalConfig {
  std::vector<int> task_lengths = {1, 2, 3, 4, 5, 6};
  int tasks_per_length = 17;
  int episodes_per_task = 1;
  int max_steps = 0;  // 0: 4 * (width + height) * task_length
  // Eval tasks are drawn from a seed range far away from the ones used for
  // training data, so they are genuinely held out.
  std::uint64_t task_seed_offset = 1000000;
};

inline void to_json(nlohmann::json& j, const EvalConfig& c) {
  j = nlohmann::json{{"task_lengths", c.task_lengths},
                     {"tasks_per_length", c.tasks_per_length},
                     {"episodes_per_task", c.episodes_per_task},
                     {"max_steps", c.max_steps},
                     {"task_seed_offset", c.task_seed_offset}};
}

inline void from_json(const nlohmann::json& j, EvalConfig& c) {
  c = EvalConfig{};
  if (j.contains("task_lengths")) j.at("task_lengths").get_to(c.task_lengths);
  if (j.contains("tasks_per_length")) j.at("tasks_per_length").get_to(c.tasks_per_length);
  if (j.contains("episodes_per_task")) j.at("episodes_per_task").get_to(c.episodes_per_task);
  if (j.contains("max_steps")) j.at("max_steps").get_to(c.max_steps);
  if (j.contains("task_seed_offset")) j.at("task_seed_offset").get_to(c.task_seed_offset);
}

// Aggregated over tasks_per_length * episodes_per_task episodes.
struct EvalRow {
  std::string method;
  std::uint64_t seed = 0;  // the policy's training seed
  int task_length = 0;
  InitMode init_mode = InitMode::fixed;
  double mean_completion = 0;
  int episodes = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

// The policy under evaluation: current task and state in, action out.
using ActFn = std::function<env::Action(const env::TaskSpec&, const env::GridState&)>;

// Fraction of subtasks finished when the episode ended.
double completion_fraction(const env::TaskSpec& task, const env::GridState& final_state);

// Run the full protocol for one policy. With InitMode::randomized the
// agent's start cell is re-sampled per episode (seeded, reproducible);
// objects, receptacles and doors stay at their task positions.
EvalReport evaluate(const ActFn& act, const std::string& method, std::uint64_t seed,
                    const env::EnvConfig& env_cfg, const EvalConfig& cfg, InitMode init_mode);

// Relative drop going from fixed to randomized starts; 0 when fixed is 0.
double generalization_drop(double fixed_mean, double randomized_mean);

struct MethodSummary {
  std::string method;
  std::map<int, double> mean_by_length;  // fixed-init means
  double fixed_mean = 0;                 // across all rows
  double randomized_mean = 0;
  double drop = 0;
  std::map<int, double> ratio_by_length;  // vs the baseline method, fixed init
};

struct Comparison {
  std::string baseline;
  std::vector<MethodSummary> methods;
};

// Aggregate rows from any number of reports; ratios are computed against
// `baseline_method`'s fixed-init per-length means.
Comparison compare(const std::vector<EvalRow>& rows, const std::string& baseline_method);

void export_csv(const std::filesystem::path& path, const std::vector<EvalRow>& rows);
std::vector<EvalRow> read_csv(const std::filesystem::path& path);

std::string render_comparison(const Comparison& c);  // human-readable table

}  // namespace rgvlm::eval
