#include "rgvlm/annot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/env/env.hpp"

namespace rgvlm::annot {

std::string OracleBackend::fingerprint() const {
  std::ostringstream os;
  os << "oracle:scale=" << scale_max_ << ":noise=" << noise_std_ << ":seed=" << seed_;
  return os.str();
}

std::string OracleBackend::complete(const ChatRequest& request, const WindowContext& ctx) {
  if (!ctx.trajectory || !ctx.task)
    throw BackendError("oracle backend needs a window context with trajectory and task");
  const auto& traj = *ctx.trajectory;
  const Window& w = ctx.window;
  if (w.start < 0 || w.count < 1 ||
      static_cast<std::size_t>(w.start + w.count) > traj.num_transitions())
    throw BackendError("oracle backend: window out of range for trajectory " + traj.id);

  // A stage-1 request is the single opening message; stage 2 carries the
  // analysis turn and the scoring request.
  if (request.messages.size() <= 1) {
    std::ostringstream os;
    os << "The agent was told to: " << traj.instruction.text << ". Over these " << w.count
       << " actions it went from " << traj.states[w.start].subtasks_done << " to "
       << traj.states[w.start + w.count].subtasks_done << " completed subtasks.";
    return os.str();
  }

  // Score jitter is keyed on (trajectory, window start), not on call order,
  // so concurrent annotation stays deterministic.
  auto rng = make_rng(derive_seed(derive_seed(seed_, fnv1a(traj.id)),
                                  static_cast<std::uint64_t>(w.start)));
  std::normal_distribution<double> jitter(0.0, noise_std_);

  std::ostringstream os;
  for (int i = 0; i < w.count; ++i) {
    const int t = w.start + i;
    const double shaped =
        env::shaped_reward(*ctx.task, traj.states[t], traj.actions[t], traj.states[t + 1]);
    double value = shaped * scale_max_;
    if (noise_std_ > 0.0) value += jitter(rng);
    const long score = std::clamp(std::lround(value), 0l, static_cast<long>(scale_max_));
    os << "Action " << (i + 1) << ": " << score << "\n";
  }
  return os.str();
}

}  // namespace rgvlm::annot
