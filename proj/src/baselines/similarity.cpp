#include "rgvlm/baselines/similarity.hpp"

#include "rgvlm/common/errors.hpp"

namespace rgvlm::baselines {

namespace {

void require_transitions(const data::Trajectory& t) {
  if (t.num_transitions() == 0)
    throw ValidationError("similarity labels: trajectory " + t.id + " has no transitions");
}

}  // namespace

data::RewardLabels sparse_labels(const data::Trajectory& trajectory) {
  require_transitions(trajectory);
  data::RewardLabels l;
  l.trajectory_id = trajectory.id;
  l.source = "sparse";
  l.rewards.assign(trajectory.num_transitions(), 0.0);
  l.rewards.back() = 1.0;
  return l;
}

data::RewardLabels frame_similarity_labels(const data::Trajectory& trajectory,
                                           const env::TaskSpec& task,
                                           const env::EnvConfig& env_cfg,
                                           EmbeddingProvider& embedder) {
  require_transitions(trajectory);
  const Eigen::VectorXf text = embedder.embed_text(trajectory.instruction.text);

  data::RewardLabels l;
  l.trajectory_id = trajectory.id;
  l.source = "frame_sim";
  l.rewards.reserve(trajectory.num_transitions());
  for (std::size_t t = 1; t < trajectory.states.size(); ++t) {
    const env::Image frame = env::render(task.board, trajectory.states[t], env_cfg.cell_px);
    const float cos = text.dot(embedder.embed_image(frame));
    l.rewards.push_back((static_cast<double>(cos) + 1.0) / 2.0);
  }
  return l;
}

data::RewardLabels sequence_similarity_labels(const data::Trajectory& trajectory,
                                              const env::TaskSpec& task,
                                              const env::EnvConfig& env_cfg,
                                              EmbeddingProvider& embedder) {
  require_transitions(trajectory);
  const Eigen::VectorXf text = embedder.embed_text(trajectory.instruction.text);

  Eigen::VectorXf mean = Eigen::VectorXf::Zero(embedder.dim());
  for (const auto& s : trajectory.states) {
    const env::Image frame = env::render(task.board, s, env_cfg.cell_px);
    mean += embedder.embed_image(frame);
  }
  mean /= static_cast<float>(trajectory.states.size());
  const float norm = mean.norm();
  const float cos = norm > 0 ? text.dot(mean) / norm : 0.0f;

  data::RewardLabels l;
  l.trajectory_id = trajectory.id;
  l.source = "seq_sim";
  l.rewards.assign(trajectory.num_transitions(), 0.0);
  l.rewards.back() = (static_cast<double>(cos) + 1.0) / 2.0;
  return l;
}

}  // namespace rgvlm::baselines
