#pragma once

#include "rgvlm/baselines/embedder.hpp"
#include "rgvlm/data/trajectory.hpp"

namespace rgvlm::baselines {

// Task-agnostic baseline: zero everywhere, 1 on the final transition.
data::RewardLabels sparse_labels(const data::Trajectory& trajectory);

// Per-transition reward from the cosine between the instruction embedding
// and the post-transition frame, mapped to [0, 1] via (cos + 1) / 2.
data::RewardLabels frame_similarity_labels(const data::Trajectory& trajectory,
                                           const env::TaskSpec& task,
                                           const env::EnvConfig& env_cfg,
                                           EmbeddingProvider& embedder);

// One similarity for the whole trajectory — instruction vs the mean frame
// embedding — assigned to the final transition, zero elsewhere.
data::RewardLabels sequence_similarity_labels(const data::Trajectory& trajectory,
                                              const env::TaskSpec& task,
                                              const env::EnvConfig& env_cfg,
                                              EmbeddingProvider& embedder);

}  // namespace rgvlm::baselines
