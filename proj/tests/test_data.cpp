#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/data/dataset.hpp"
#include "rgvlm/env/planner.hpp"
#include "rgvlm/env/task_gen.hpp"

using namespace rgvlm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rgvlm-data-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

// A small but varied dataset: mixed lengths, mixed suboptimality.
std::pair<data::DatasetManifest, std::vector<data::Trajectory>> sample_dataset(
    std::uint64_t seed, int count) {
  env::EnvConfig env_cfg;
  data::DatasetManifest manifest;
  manifest.env_config = env_cfg;
  manifest.generator_seed = seed;
  std::vector<data::Trajectory> trajs;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t task_seed = derive_seed(derive_seed(seed, "t"), (std::uint64_t)i);
    const int n = 1 + (int)(task_seed % 4);
    const double subopt = (i % 3) * 0.15;
    env::TaskSpec task = env::generate_task(env_cfg, task_seed, n);
    env::Rollout r = env::scripted_rollout(task, subopt, derive_seed(task_seed, "r"));
    data::Trajectory t;
    t.id = "traj-" + std::to_string(i);
    t.instruction = {task.instruction, task.task_id};
    t.states = std::move(r.states);
    t.actions = std::move(r.actions);
    t.meta = {task_seed, n, subopt};
    manifest.ids.push_back(t.id);
    trajs.push_back(std::move(t));
  }
  return {manifest, trajs};
}

bool same_trajectory(const data::Trajectory& a, const data::Trajectory& b) {
  return a.id == b.id && a.instruction.text == b.instruction.text &&
         a.instruction.task_id == b.instruction.task_id && a.states == b.states &&
         a.actions == b.actions && a.meta.seed == b.meta.seed &&
         a.meta.num_subtasks == b.meta.num_subtasks &&
         a.meta.suboptimality == b.meta.suboptimality;
}

}  // namespace

TEST_CASE("dataset write/read round-trips exactly") {
  TempDir dir;
  auto [manifest, trajs] = sample_dataset(42, 20);
  data::write_manifest(dir.path, manifest);
  data::write_trajectories(dir.path, trajs);

  data::DatasetManifest m2 = data::read_manifest(dir.path);
  CHECK(m2.schema_version == manifest.schema_version);
  CHECK(m2.ids == manifest.ids);
  CHECK(m2.generator_seed == manifest.generator_seed);
  CHECK(nlohmann::json(m2.env_config) == nlohmann::json(manifest.env_config));

  auto trajs2 = data::read_trajectories(dir.path, m2);
  REQUIRE(trajs2.size() == trajs.size());
  for (std::size_t i = 0; i < trajs.size(); ++i) CHECK(same_trajectory(trajs[i], trajs2[i]));
}

TEST_CASE("labels round-trip and preserve order") {
  TempDir dir;
  auto [manifest, trajs] = sample_dataset(43, 10);
  auto rng = make_rng(7);
  std::vector<data::RewardLabels> labels;
  for (const auto& t : trajs) {
    data::RewardLabels l;
    l.trajectory_id = t.id;
    l.source = "test";
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t k = 0; k < t.num_transitions(); ++k) l.rewards.push_back(u(rng));
    labels.push_back(std::move(l));
  }
  data::write_labels(dir.path, "test", labels);
  auto labels2 = data::read_labels(dir.path, "test");
  REQUIRE(labels2.size() == labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(labels2[i].trajectory_id == labels[i].trajectory_id);
    CHECK(labels2[i].source == labels[i].source);
    CHECK(labels2[i].rewards == labels[i].rewards);  // %.17g, so bit-exact
  }
}

TEST_CASE("malformed dataset files raise DataFormatError") {
  TempDir dir;
  auto [manifest, trajs] = sample_dataset(44, 4);
  data::write_manifest(dir.path, manifest);
  data::write_trajectories(dir.path, trajs);

  SUBCASE("missing manifest") {
    fs::remove(dir.path / "manifest.json");
    // Absent files are a usage problem, not a schema one.
    CHECK_THROWS_AS(data::read_manifest(dir.path), ValidationError);
  }
  SUBCASE("manifest count disagrees with ids") {
    auto j = nlohmann::json::parse(std::ifstream(dir.path / "manifest.json"));
    j["count"] = 99;
    std::ofstream(dir.path / "manifest.json") << j.dump();
    CHECK_THROWS_AS(data::read_manifest(dir.path), DataFormatError);
  }
  SUBCASE("truncated trajectory line") {
    std::string all;
    {
      std::ifstream in(dir.path / "trajectories.jsonl");
      std::getline(in, all);
    }
    std::ofstream(dir.path / "trajectories.jsonl") << all.substr(0, all.size() / 2);
    CHECK_THROWS_AS(data::read_trajectories(dir.path, manifest), DataFormatError);
  }
  SUBCASE("trajectory order disagrees with manifest") {
    std::vector<std::string> lines;
    {
      std::ifstream in(dir.path / "trajectories.jsonl");
      std::string line;
      while (std::getline(in, line)) lines.push_back(line);
    }
    std::swap(lines[0], lines[1]);
    std::ofstream out(dir.path / "trajectories.jsonl");
    for (const auto& l : lines) out << l << '\n';
    out.close();
    CHECK_THROWS_AS(data::read_trajectories(dir.path, manifest), DataFormatError);
  }
  SUBCASE("action out of range") {
    auto j = data::trajectory_to_json(trajs[0]);
    j["actions"][0] = 42;
    CHECK_THROWS_AS(data::trajectory_from_json(j), DataFormatError);
  }
  SUBCASE("state/action length mismatch") {
    auto j = data::trajectory_to_json(trajs[0]);
    j["actions"].erase(0);
    CHECK_THROWS_AS(data::trajectory_from_json(j), DataFormatError);
  }
  SUBCASE("missing labels file") {
    CHECK_THROWS_AS(data::read_labels(dir.path, "nope"), ValidationError);
  }
}

TEST_CASE("LabeledDataset validates and indexes all transitions") {
  auto [manifest, trajs] = sample_dataset(45, 8);
  std::vector<data::RewardLabels> labels;
  std::size_t total = 0;
  for (const auto& t : trajs) {
    labels.push_back({t.id, "sparse", std::vector<double>(t.num_transitions(), 0.0)});
    if (!labels.back().rewards.empty()) labels.back().rewards.back() = 1.0;
    total += t.num_transitions();
  }

  data::LabeledDataset ds(trajs, labels);
  CHECK(ds.num_transitions() == total);

  // Every transition is indexed exactly once.
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < ds.num_transitions(); ++i) {
    auto ref = ds.transition(i);
    CHECK(seen.insert({ref.traj, ref.t}).second);
    CHECK(ref.t < (int)ds.trajectories()[(std::size_t)ref.traj].num_transitions());
  }

  // Terminal exactly on transitions that finish the final subtask.
  for (std::size_t i = 0; i < ds.num_transitions(); ++i) {
    auto ref = ds.transition(i);
    const auto& t = ds.trajectories()[(std::size_t)ref.traj];
    const bool done = t.states[(std::size_t)ref.t + 1].subtasks_done >= t.meta.num_subtasks;
    CHECK(ds.terminal(ref) == done);
  }

  // Sampling is uniform-ish, in range, and deterministic under the same rng.
  auto rng1 = make_rng(3);
  auto rng2 = make_rng(3);
  auto b1 = ds.sample_batch(rng1, 100);
  auto b2 = ds.sample_batch(rng2, 100);
  REQUIRE(b1.size() == 100);
  for (std::size_t i = 0; i < b1.size(); ++i) {
    CHECK(b1[i].traj == b2[i].traj);
    CHECK(b1[i].t == b2[i].t);
  }

  // Mismatches are rejected loudly.
  auto short_labels = labels;
  short_labels[0].rewards.pop_back();
  CHECK_THROWS_AS(data::LabeledDataset(trajs, short_labels), DataFormatError);
  auto missing = labels;
  missing.pop_back();
  CHECK_THROWS_AS(data::LabeledDataset(trajs, missing), DataFormatError);
}
