#include "rgvlm/annot/annotator.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/env/render.hpp"

namespace rgvlm::annot {

namespace {

struct WindowResult {
  std::vector<int> scores;
};

WindowResult annotate_window(AnnotatorBackend& backend, const env::TaskSpec& task,
                             const data::Trajectory& traj,
                             const std::vector<env::Image>& frames, const Window& window,
                             const AnnotatorConfig& cfg) {
  std::vector<env::Image> tiles(frames.begin() + window.start,
                                frames.begin() + window.start + window.count + 1);
  const env::Image grid = compose_grid(tiles, cfg.grid_columns);

  WindowContext ctx{&traj, &task, window};

  const ChatRequest req1 =
      stage1_request(cfg.templates, traj.instruction.text, grid, window, cfg.scale_max);
  const std::string analysis =
      query_backend(backend, req1, ctx, cfg.max_retries, cfg.retry_base_ms);

  const ChatRequest req2 = stage2_request(req1, analysis, cfg.templates, window, cfg.scale_max);
  const std::string scored = query_backend(backend, req2, ctx, cfg.max_retries, cfg.retry_base_ms);

  return {parse_scores(scored, window, cfg.scale_max)};
}

}  // namespace

data::RewardLabels annotate_trajectory(AnnotatorBackend& backend, const env::TaskSpec& task,
                                       const data::Trajectory& trajectory,
                                       const env::EnvConfig& env_cfg, const AnnotatorConfig& cfg,
                                       const std::string& source, AnnotateStats* stats) {
  if (trajectory.num_transitions() == 0)
    throw ValidationError("annotate_trajectory: trajectory " + trajectory.id +
                          " has no transitions");

  std::vector<env::Image> frames;
  frames.reserve(trajectory.states.size());
  for (const auto& s : trajectory.states)
    frames.push_back(env::render(task.board, s, env_cfg.cell_px));

  const std::vector<Window> windows =
      partition_windows(trajectory.num_transitions(), cfg.window_size);

  std::vector<WindowResult> results(windows.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= windows.size() || abort.load()) return;
      try {
        results[i] = annotate_window(backend, task, trajectory, frames, windows[i], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(cfg.concurrency, static_cast<int>(windows.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const ParseError& e) {
      throw ParseError(e.code(), "trajectory " + trajectory.id + ": " + e.what());
    } catch (const BackendError& e) {
      throw BackendError("trajectory " + trajectory.id + ": " + e.what());
    }
  }

  data::RewardLabels labels;
  labels.trajectory_id = trajectory.id;
  labels.source = source;
  labels.rewards.resize(trajectory.num_transitions());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (int k = 0; k < windows[i].count; ++k)
      labels.rewards[static_cast<std::size_t>(windows[i].start + k)] =
          static_cast<double>(results[i].scores[static_cast<std::size_t>(k)]) / cfg.scale_max;
  }

  if (stats) {
    stats->windows += static_cast<int>(windows.size());
    stats->conversations += 2 * static_cast<int>(windows.size());
  }
  return labels;
}

data::RewardLabels combine_with_sparse(const data::RewardLabels& dense,
                                       const std::string& source) {
  if (dense.rewards.empty())
    throw ValidationError("combine_with_sparse: no rewards for trajectory " +
                          dense.trajectory_id);
  data::RewardLabels out = dense;
  out.source = source;
  out.rewards.back() += 1.0;
  return out;
}

}  // namespace rgvlm::annot
