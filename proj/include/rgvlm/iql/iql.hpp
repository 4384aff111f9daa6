#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rgvlm/iql/adam.hpp"
#include "rgvlm/iql/expectile.hpp"
#include "rgvlm/iql/mlp.hpp"

namespace rgvlm::iql {

struct IqlConfig {
  double gamma = 0.99;
  double expectile = 0.7;
  double beta = 3.0;             // advantage temperature for the policy loss
  double tau = 0.005;            // Polyak rate for the target Q net
  double lr = 3e-4;
  int batch_size = 256;
  int updates = 50000;
  double awr_weight_clip = 100.0;
  std::vector<int> hidden = {64, 64};
};

inline void to_json(nlohmann::json& j, const IqlConfig& c) {
  j = {{"gamma", c.gamma},
       {"expectile", c.expectile},
       {"beta", c.beta},
       {"tau", c.tau},
       {"lr", c.lr},
       {"batch_size", c.batch_size},
       {"updates", c.updates},
       {"awr_weight_clip", c.awr_weight_clip},
       {"hidden", c.hidden}};
}

inline void from_json(const nlohmann::json& j, IqlConfig& c) {
  IqlConfig d;
  c.gamma = j.value("gamma", d.gamma);
  c.expectile = j.value("expectile", d.expectile);
  c.beta = j.value("beta", d.beta);
  c.tau = j.value("tau", d.tau);
  c.lr = j.value("lr", d.lr);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.updates = j.value("updates", d.updates);
  c.awr_weight_clip = j.value("awr_weight_clip", d.awr_weight_clip);
  c.hidden = j.value("hidden", d.hidden);
}

struct Metrics {
  long update = 0;
  double v_loss = 0;
  double q_loss = 0;
  double pi_loss = 0;
  double mean_advantage = 0;
};

// One training batch. Observation columns stack the state block on top of
// the instruction bag-of-words block (see FeatureCodec).
template <typename Scalar>
struct TransitionBatch {
  SpMat<Scalar> obs;       // obs_dim x B
  SpMat<Scalar> next_obs;  // obs_dim x B
  Eigen::VectorXi actions;
  VectorX<Scalar> rewards;
  VectorX<Scalar> not_done;  // 0 where the next state is terminal
};

template <typename Scalar>
struct IqlNets {
  Mlp<Scalar> v, q, q_target, pi;

  IqlNets(int obs_dim, const std::vector<int>& hidden, int num_actions)
      : v(obs_dim, hidden, 1),
        q(obs_dim, hidden, num_actions),
        q_target(obs_dim, hidden, num_actions),
        pi(obs_dim, hidden, num_actions) {}

  void init(std::mt19937_64& rng) {
    v.init(rng);
    q.init(rng);
    q_target.params() = q.params();
    pi.init(rng);
  }
};

template <typename Scalar>
struct IqlGrads {
  VectorX<Scalar> v, q, pi;

  explicit IqlGrads(const IqlNets<Scalar>& nets) {
    v.setZero(nets.v.num_params());
    q.setZero(nets.q.num_params());
    pi.setZero(nets.pi.num_params());
  }

  void zero() {
    v.setZero();
    q.setZero();
    pi.setZero();
  }
};

template <typename Scalar>
struct IqlWorkspace {
  typename Mlp<Scalar>::Workspace v_s, v_next, q_s, q_target_s, pi_s;
  MatrixX<Scalar> dv, dq, dpi;
};

// Loss values and (optionally) parameter gradients for one batch, all
// evaluated at the current parameters.
//
//   V loss   : expectile regression of V(s) toward Q_target(s, a)
//   Q loss   : squared TD error toward r + gamma * (1 - done) * V(s')
//   pi loss  : advantage-weighted log-likelihood, weights are constants
template <typename Scalar>
Metrics iql_losses(IqlNets<Scalar>& nets, const TransitionBatch<Scalar>& batch,
                   const IqlConfig& cfg, IqlWorkspace<Scalar>& ws, IqlGrads<Scalar>* grads) {
  const int B = static_cast<int>(batch.actions.size());
  const Scalar q_exp = static_cast<Scalar>(cfg.expectile);
  const Scalar gamma = static_cast<Scalar>(cfg.gamma);
  const Scalar beta = static_cast<Scalar>(cfg.beta);
  const Scalar clip = static_cast<Scalar>(cfg.awr_weight_clip);

  const auto& v_s = nets.v.forward(batch.obs, ws.v_s);            // 1 x B
  const auto& v_next = nets.v.forward(batch.next_obs, ws.v_next); // 1 x B
  const auto& q_s = nets.q.forward(batch.obs, ws.q_s);            // A x B
  const auto& qt_s = nets.q_target.forward(batch.obs, ws.q_target_s);
  const auto& logits = nets.pi.forward(batch.obs, ws.pi_s);

  Metrics m;
  ws.dv.setZero(1, B);
  ws.dq.setZero(q_s.rows(), B);
  ws.dpi.resize(logits.rows(), B);

  Scalar v_loss = 0, q_loss = 0, pi_loss = 0, adv_sum = 0;
  for (int i = 0; i < B; ++i) {
    const int a = batch.actions[i];

    // expectile regression of V toward the target net's Q(s, a)
    const Scalar xv = qt_s(a, i) - v_s(0, i);
    v_loss += expectile_loss(xv, q_exp);
    ws.dv(0, i) = -expectile_loss_grad(xv, q_exp) / Scalar(B);

    // TD regression of Q(s, a); the bootstrap is masked at terminals
    const Scalar y = batch.rewards[i] + gamma * batch.not_done[i] * v_next(0, i);
    const Scalar e = y - q_s(a, i);
    q_loss += e * e;
    ws.dq(a, i) = -Scalar(2) * e / Scalar(B);

    // advantage-weighted regression; the weight is treated as a constant
    const Scalar adv = qt_s(a, i) - v_s(0, i);
    adv_sum += adv;
    const Scalar w = beta * adv >= std::log(clip) ? clip : std::exp(beta * adv);

    // stable log-softmax of the logits column
    const Scalar mx = logits.col(i).maxCoeff();
    const Scalar lse = std::log((logits.col(i).array() - mx).exp().sum()) + mx;
    pi_loss += -w * (logits(a, i) - lse);
    // d/dlogits of -w * log pi(a) = w * (softmax - onehot_a)
    ws.dpi.col(i) = (w / Scalar(B)) * (logits.col(i).array() - lse).exp().matrix();
    ws.dpi(a, i) -= w / Scalar(B);
  }

  m.v_loss = static_cast<double>(v_loss) / B;
  m.q_loss = static_cast<double>(q_loss) / B;
  m.pi_loss = static_cast<double>(pi_loss) / B;
  m.mean_advantage = static_cast<double>(adv_sum) / B;

  if (grads) {
    nets.v.backward(batch.obs, ws.v_s, ws.dv, grads->v);
    nets.q.backward(batch.obs, ws.q_s, ws.dq, grads->q);
    nets.pi.backward(batch.obs, ws.pi_s, ws.dpi, grads->pi);
  }
  return m;
}

template <typename Scalar>
struct IqlOptimizers {
  Adam<Scalar> v, q, pi;

  IqlOptimizers(const IqlNets<Scalar>& nets, Scalar lr)
      : v(nets.v.num_params(), lr), q(nets.q.num_params(), lr), pi(nets.pi.num_params(), lr) {}
};

// One interleaved update: losses and gradients at the current parameters,
// then simultaneous Adam steps on V, Q and pi, then the Polyak target move.
template <typename Scalar>
Metrics update_step(IqlNets<Scalar>& nets, IqlOptimizers<Scalar>& opt,
                    const TransitionBatch<Scalar>& batch, const IqlConfig& cfg,
                    IqlWorkspace<Scalar>& ws, IqlGrads<Scalar>& grads) {
  grads.zero();
  Metrics m = iql_losses(nets, batch, cfg, ws, &grads);
  opt.v.step(nets.v.params(), grads.v);
  opt.q.step(nets.q.params(), grads.q);
  opt.pi.step(nets.pi.params(), grads.pi);
  const Scalar tau = static_cast<Scalar>(cfg.tau);
  nets.q_target.params() = (Scalar(1) - tau) * nets.q_target.params() + tau * nets.q.params();
  return m;
}

// Greedy action from policy logits for a single observation column.
template <typename Scalar>
int greedy_action(const Mlp<Scalar>& pi, const SpMat<Scalar>& obs) {
  typename Mlp<Scalar>::Workspace ws;
  const auto& logits = pi.forward(obs, ws);
  int best = 0;
  logits.col(0).maxCoeff(&best);
  return best;
}

}  // namespace rgvlm::iql
