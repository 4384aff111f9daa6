#include "rgvlm/iql/train.hpp"

#include <cmath>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/env/instructions.hpp"
#include "rgvlm/env/task_gen.hpp"

namespace rgvlm::iql {

namespace {

using Entries = FeatureCodec::Entries;

// Per-trajectory encodings, shared between the transitions that reference
// them so states are encoded exactly once.
struct EncodedData {
  std::vector<std::vector<Entries>> states;  // [traj][t]
  std::vector<Entries> instructions;         // [traj], rows already offset
};

EncodedData encode_all(const data::LabeledDataset& ds, const env::EnvConfig& env_cfg,
                       const FeatureCodec& codec) {
  EncodedData enc;
  const auto& trajs = ds.trajectories();
  enc.states.resize(trajs.size());
  enc.instructions.resize(trajs.size());
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const auto& t = trajs[k];
    // the board layout is regenerated from the recorded seed
    env::TaskSpec task = env::generate_task(env_cfg, t.meta.seed, t.meta.num_subtasks);
    enc.instructions[k] = codec.encode_instruction(t.instruction.text);
    const std::vector<bool> mentioned = codec.mentions(t.instruction.text);
    enc.states[k].reserve(t.states.size());
    for (const auto& s : t.states)
      enc.states[k].push_back(codec.encode_state(task.board, s, mentioned));
  }
  return enc;
}

template <typename Scalar>
void build_batch(const data::LabeledDataset& ds, const EncodedData& enc,
                 const std::vector<data::TransitionRef>& refs, int obs_dim,
                 TransitionBatch<Scalar>& out) {
  const int B = static_cast<int>(refs.size());
  std::vector<Eigen::Triplet<Scalar>> obs_trips, next_trips;
  obs_trips.reserve(static_cast<std::size_t>(B) * 64);
  next_trips.reserve(static_cast<std::size_t>(B) * 64);

  out.actions.resize(B);
  out.rewards.resize(B);
  out.not_done.resize(B);

  for (int i = 0; i < B; ++i) {
    const auto ref = refs[i];
    for (const auto& [row, val] : enc.states[ref.traj][ref.t])
      obs_trips.emplace_back(row, i, static_cast<Scalar>(val));
    for (const auto& [row, val] : enc.states[ref.traj][ref.t + 1])
      next_trips.emplace_back(row, i, static_cast<Scalar>(val));
    for (const auto& [row, val] : enc.instructions[ref.traj]) {
      obs_trips.emplace_back(row, i, static_cast<Scalar>(val));
      next_trips.emplace_back(row, i, static_cast<Scalar>(val));
    }
    out.actions[i] = static_cast<int>(ds.trajectories()[ref.traj].actions[ref.t]);
    out.rewards[i] = static_cast<Scalar>(ds.reward(ref));
    out.not_done[i] = ds.terminal(ref) ? Scalar(0) : Scalar(1);
  }

  out.obs.resize(obs_dim, B);
  out.obs.setFromTriplets(obs_trips.begin(), obs_trips.end());
  out.next_obs.resize(obs_dim, B);
  out.next_obs.setFromTriplets(next_trips.begin(), next_trips.end());
}

std::vector<double> to_doubles(const VectorX<float>& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return out;
}

}  // namespace

PolicyArtifact train_iql(const data::LabeledDataset& dataset, const env::EnvConfig& env_cfg,
                         const IqlConfig& cfg, std::uint64_t seed,
                         const std::function<void(const Metrics&)>& on_metrics,
                         int metrics_every) {
  if (dataset.num_transitions() == 0) throw ValidationError("train_iql: dataset has no transitions");
  if (cfg.batch_size < 1 || cfg.updates < 1)
    throw ValidationError("train_iql: batch_size and updates must be positive");

  const FeatureCodec codec(env_cfg);
  const EncodedData enc = encode_all(dataset, env_cfg, codec);

  IqlNets<float> nets(codec.obs_dim(), cfg.hidden, env::kNumActions);
  auto init_rng = make_rng(derive_seed(seed, "iql-init"));
  nets.init(init_rng);

  IqlOptimizers<float> opt(nets, static_cast<float>(cfg.lr));
  IqlWorkspace<float> ws;
  IqlGrads<float> grads(nets);
  TransitionBatch<float> batch;

  auto batch_rng = make_rng(derive_seed(seed, "iql-batch"));
  for (int u = 0; u < cfg.updates; ++u) {
    const auto refs = dataset.sample_batch(batch_rng, static_cast<std::size_t>(cfg.batch_size));
    build_batch(dataset, enc, refs, codec.obs_dim(), batch);
    Metrics m = update_step(nets, opt, batch, cfg, ws, grads);
    m.update = u;

    if (u % 1000 == 0 &&
        !(std::isfinite(m.v_loss) && std::isfinite(m.q_loss) && std::isfinite(m.pi_loss)))
      throw NumericsError("train_iql: non-finite loss at update " + std::to_string(u));
    if (on_metrics && (u % metrics_every == 0 || u + 1 == cfg.updates)) on_metrics(m);
  }

  PolicyArtifact a;
  a.env_config = env_cfg;
  a.iql = cfg;
  a.vocab = env::vocabulary();
  a.seed = seed;
  a.obs_dim = codec.obs_dim();
  a.num_actions = env::kNumActions;
  a.v_params = to_doubles(nets.v.params());
  a.q_params = to_doubles(nets.q.params());
  a.q_target_params = to_doubles(nets.q_target.params());
  a.pi_params = to_doubles(nets.pi.params());
  return a;
}

Policy::Policy(const PolicyArtifact& artifact)
    : codec_(artifact.env_config),
      pi_(codec_.obs_dim(), artifact.iql.hidden, artifact.num_actions) {
  if (codec_.obs_dim() != artifact.obs_dim)
    throw DataFormatError("policy artifact obs_dim " + std::to_string(artifact.obs_dim) +
                          " does not match feature layout " + std::to_string(codec_.obs_dim()));
  if (static_cast<int>(artifact.pi_params.size()) != pi_.num_params())
    throw DataFormatError("policy artifact has " + std::to_string(artifact.pi_params.size()) +
                          " policy weights, architecture needs " +
                          std::to_string(pi_.num_params()));
  if (artifact.vocab != env::vocabulary())
    throw DataFormatError("policy artifact was trained with a different instruction vocabulary");
  for (int i = 0; i < pi_.num_params(); ++i)
    pi_.params()[i] = artifact.pi_params[static_cast<std::size_t>(i)];
}

const Eigen::MatrixXd& Policy::logits_(const env::TaskSpec& task,
                                        const env::GridState& state) const {
  if (task.instruction != mention_text_) {
    mention_text_ = task.instruction;
    mentioned_ = codec_.mentions(task.instruction);
  }
  auto entries = codec_.encode_state(task.board, state, mentioned_);
  const auto instr = codec_.encode_instruction(task.instruction);
  entries.insert(entries.end(), instr.begin(), instr.end());

  SpMat<double> obs(codec_.obs_dim(), 1);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries.size());
  for (const auto& [row, val] : entries) trips.emplace_back(row, 0, static_cast<double>(val));
  obs.setFromTriplets(trips.begin(), trips.end());

  return pi_.forward(obs, ws_);
}

env::Action Policy::act(const env::TaskSpec& task, const env::GridState& state) const {
  int best = 0;
  logits_(task, state).col(0).maxCoeff(&best);
  return static_cast<env::Action>(best);
}

env::Action Policy::act(const env::TaskSpec& task, const env::GridState& state,
                        std::mt19937_64& rng) const {
  const Eigen::VectorXd p = action_probs(task, state);
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (int a = 0; a < p.size(); ++a) {
    r -= p[a];
    if (r <= 0.0) return static_cast<env::Action>(a);
  }
  return static_cast<env::Action>(p.size() - 1);  // guard against rounding residue
}

Eigen::VectorXd Policy::action_probs(const env::TaskSpec& task,
                                     const env::GridState& state) const {
  Eigen::VectorXd z = logits_(task, state).col(0);
  z.array() -= z.maxCoeff();
  Eigen::VectorXd p = z.array().exp();
  p /= p.sum();
  return p;
}

}  // namespace rgvlm::iql
