#pragma once

#include <functional>
#include <random>

#include "rgvlm/data/dataset.hpp"
#include "rgvlm/iql/artifact.hpp"
#include "rgvlm/iql/features.hpp"

namespace rgvlm::iql {

// Offline training on a labeled dataset. Deterministic in (dataset, config,
// seed). Training runs in float32; the artifact stores float64 copies.
// on_metrics (optional) fires every metrics_every updates and on the last.
// Throws NumericsError if any loss goes non-finite.
PolicyArtifact train_iql(const data::LabeledDataset& dataset, const env::EnvConfig& env_cfg,
                         const IqlConfig& cfg, std::uint64_t seed,
                         const std::function<void(const Metrics&)>& on_metrics = {},
                         int metrics_every = 500);

// Executor for a saved artifact. The policy head is a softmax distribution,
// so there are two ways to act: argmax, or a draw from the distribution.
// Sampling is the recommended executor: a deterministic argmax walk on a
// deterministic grid can trap itself in a two-step loop wherever adjacent
// cells disagree about a near-tie, while a sampled walk leaves such loops.
class Policy {
 public:
  explicit Policy(const PolicyArtifact& artifact);

  // Greedy: the most probable action.
  env::Action act(const env::TaskSpec& task, const env::GridState& state) const;
  // Stochastic: a draw from the softmax head. The caller owns the generator,
  // so a fixed seed reproduces the rollout exactly.
  env::Action act(const env::TaskSpec& task, const env::GridState& state,
                  std::mt19937_64& rng) const;

  // Softmax action distribution at one state.
  Eigen::VectorXd action_probs(const env::TaskSpec& task, const env::GridState& state) const;

 private:
  const Eigen::MatrixXd& logits_(const env::TaskSpec& task, const env::GridState& state) const;

  FeatureCodec codec_;
  Mlp<double> pi_;
  mutable Mlp<double>::Workspace ws_;
  // memoized instruction grounding for the common task-after-task call pattern
  mutable std::string mention_text_;
  mutable std::vector<bool> mentioned_;
};

}  // namespace rgvlm::iql
