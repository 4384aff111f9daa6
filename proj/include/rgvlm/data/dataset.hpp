#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include "rgvlm/data/trajectory.hpp"

namespace rgvlm::data {

// On-disk layout of a dataset directory:
//   manifest.json            schema version, ids, env config, generator seed
//   trajectories.jsonl       one trajectory per line, in manifest id order
//   labels/<source>.jsonl    one RewardLabels per line
// Readers throw DataFormatError with the offending file/line/id in the
// message whenever the contents disagree with this contract.

void write_manifest(const std::filesystem::path& dir, const DatasetManifest& m);
DatasetManifest read_manifest(const std::filesystem::path& dir);

void write_trajectories(const std::filesystem::path& dir, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> read_trajectories(const std::filesystem::path& dir,
                                          const DatasetManifest& manifest);

std::filesystem::path labels_path(const std::filesystem::path& dir, const std::string& source);
void write_labels(const std::filesystem::path& dir, const std::string& source,
                  const std::vector<RewardLabels>& labels);
std::vector<RewardLabels> read_labels(const std::filesystem::path& dir, const std::string& source);

nlohmann::json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);
nlohmann::json labels_to_json(const RewardLabels& l);
RewardLabels labels_from_json(const nlohmann::json& j);

// A transition is (states[t], actions[t], states[t+1]) of one trajectory.
struct TransitionRef {
  int traj = 0;
  int t = 0;
};

// Trajectories zipped with one reward stream, flattened for sampling.
class LabeledDataset {
 public:
  LabeledDataset(std::vector<Trajectory> trajectories,
                 const std::vector<RewardLabels>& labels);

  const std::vector<Trajectory>& trajectories() const { return trajs_; }
  const std::vector<double>& rewards_of(int traj) const { return rewards_[traj]; }
  std::size_t num_transitions() const { return index_.size(); }
  TransitionRef transition(std::size_t i) const { return index_[i]; }

  // True when the post-transition state has every subtask finished; Q-learning
  // must not bootstrap past these.
  bool terminal(TransitionRef ref) const;
  double reward(TransitionRef ref) const { return rewards_[ref.traj][ref.t]; }

  // Uniform with replacement.
  std::vector<TransitionRef> sample_batch(std::mt19937_64& rng, std::size_t batch_size) const;

 private:
  std::vector<Trajectory> trajs_;
  std::vector<std::vector<double>> rewards_;
  std::vector<TransitionRef> index_;
};

}  // namespace rgvlm::data
