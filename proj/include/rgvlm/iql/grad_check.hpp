#pragma once

#include <cstdint>
#include <random>

#include "rgvlm/common/rng.hpp"
#include "rgvlm/iql/iql.hpp"

namespace rgvlm::iql {

// Central finite differences against the analytic gradients, in double
// precision on a synthetic batch. Each net is checked against its own loss
// component, matching the stop-gradient structure of the updates (e.g. the
// Q target treats V as a constant).
struct GradCheckResult {
  double max_rel_err_v = 0;
  double max_rel_err_q = 0;
  double max_rel_err_pi = 0;
  double max_rel_err() const {
    return std::max(max_rel_err_v, std::max(max_rel_err_q, max_rel_err_pi));
  }
};

struct GradCheckSpec {
  int obs_dim = 40;
  int batch_size = 16;
  int num_actions = 7;
  std::vector<int> hidden = {32, 32};
  int coords_per_net = 200;
  double eps = 1e-4;
  double rel_floor = 1e-5;  // denominators below this stop inflating the ratio
};

inline TransitionBatch<double> random_batch(int obs_dim, int batch_size, int num_actions,
                                            std::mt19937_64& rng) {
  TransitionBatch<double> b;
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> row(0, obs_dim - 1);
  std::uniform_int_distribution<int> act(0, num_actions - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto fill = [&](SpMat<double>& m) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int c = 0; c < batch_size; ++c) {
      std::vector<int> rows;
      while (rows.size() < 8) {
        int r = row(rng);
        bool seen = false;
        for (int x : rows) seen |= x == r;
        if (!seen) rows.push_back(r);
      }
      for (int r : rows) trips.emplace_back(r, c, val(rng));
    }
    m.resize(obs_dim, batch_size);
    m.setFromTriplets(trips.begin(), trips.end());
  };
  fill(b.obs);
  fill(b.next_obs);

  b.actions.resize(batch_size);
  b.rewards.resize(batch_size);
  b.not_done.resize(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    b.actions[i] = act(rng);
    b.rewards[i] = val(rng);
    b.not_done[i] = unit(rng) < 0.8 ? 1.0 : 0.0;
  }
  return b;
}

inline GradCheckResult grad_check(std::uint64_t seed, const IqlConfig& cfg,
                                  const GradCheckSpec& spec = {}) {
  auto rng = make_rng(derive_seed(seed, "gradcheck"));

  IqlConfig c = cfg;
  c.hidden = spec.hidden;

  IqlNets<double> nets(spec.obs_dim, c.hidden, spec.num_actions);
  nets.init(rng);
  nets.q_target.init(rng);  // decouple the target so the check is not a special case

  TransitionBatch<double> batch = random_batch(spec.obs_dim, spec.batch_size, spec.num_actions, rng);

  IqlWorkspace<double> ws;
  IqlGrads<double> grads(nets);
  iql_losses(nets, batch, c, ws, &grads);

  auto loss_only = [&](int which) {
    Metrics m = iql_losses<double>(nets, batch, c, ws, nullptr);
    return which == 0 ? m.v_loss : which == 1 ? m.q_loss : m.pi_loss;
  };

  auto check_net = [&](Mlp<double>& net, const VectorX<double>& analytic, int which) {
    double worst = 0;
    std::uniform_int_distribution<int> coord(0, net.num_params() - 1);
    for (int k = 0; k < spec.coords_per_net; ++k) {
      const int j = coord(rng);
      const double orig = net.params()[j];
      net.params()[j] = orig + spec.eps;
      const double lp = loss_only(which);
      net.params()[j] = orig - spec.eps;
      const double lm = loss_only(which);
      net.params()[j] = orig;
      const double fd = (lp - lm) / (2 * spec.eps);
      const double denom = std::max({std::abs(analytic[j]), std::abs(fd), spec.rel_floor});
      worst = std::max(worst, std::abs(analytic[j] - fd) / denom);
    }
    return worst;
  };

  GradCheckResult r;
  r.max_rel_err_v = check_net(nets.v, grads.v, 0);
  r.max_rel_err_q = check_net(nets.q, grads.q, 1);
  r.max_rel_err_pi = check_net(nets.pi, grads.pi, 2);
  return r;
}

}  // namespace rgvlm::iql
