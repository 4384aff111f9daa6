#include "rgvlm/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "rgvlm/annot/annotator.hpp"
#include "rgvlm/annot/cache.hpp"
#include "rgvlm/annot/http_backend.hpp"
#include "rgvlm/annot/oracle.hpp"
#include "rgvlm/baselines/embedder.hpp"
#include "rgvlm/baselines/similarity.hpp"
#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/data/dataset.hpp"
#include "rgvlm/env/planner.hpp"
#include "rgvlm/env/task_gen.hpp"
#include "rgvlm/eval/eval.hpp"
#include "rgvlm/iql/artifact.hpp"
#include "rgvlm/iql/train.hpp"

namespace rgvlm::cli {

namespace fs = std::filesystem;

namespace {

std::string traj_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "traj-%06d", i);
  return buf;
}

env::TaskSpec task_of(const data::DatasetManifest& manifest, const data::Trajectory& t) {
  // Trajectories carry the generator inputs instead of the full task, so the
  // task is regenerated on demand (generation is deterministic in the seed).
  return env::generate_task(manifest.env_config, t.meta.seed, t.meta.num_subtasks);
}

// Labels already on disk, tolerating a torn final line from an interrupted
// run. Strict reads stay in read_labels; this one exists for --resume.
std::map<std::string, data::RewardLabels> read_existing_labels(const fs::path& path,
                                                               const std::string& source) {
  std::map<std::string, data::RewardLabels> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      data::RewardLabels l = data::labels_from_json(nlohmann::json::parse(line));
      if (l.source == source) out[l.trajectory_id] = std::move(l);
    } catch (const std::exception&) {
      std::fprintf(stderr, "note: dropping one unreadable line from %s\n", path.string().c_str());
      break;
    }
  }
  return out;
}

}  // namespace

void run_gen_data(const AppConfig& cfg, const fs::path& out_dir) {
  const auto& gen = cfg.generator;
  if (gen.count < 1) throw ValidationError("generator.count must be positive");
  if (gen.min_subtasks < 1 || gen.max_subtasks < gen.min_subtasks) {
    throw ValidationError("generator.min_subtasks/max_subtasks out of order");
  }
  if (gen.suboptimality < 0.0 || gen.suboptimality > 1.0) {
    throw ValidationError("generator.suboptimality must be in [0, 1]");
  }

  auto length_rng = make_rng(derive_seed(cfg.seed, "lengths"));
  std::uniform_int_distribution<int> length_dist(gen.min_subtasks, gen.max_subtasks);

  std::vector<data::Trajectory> trajs;
  trajs.reserve(gen.count);
  std::size_t transitions = 0;
  int incomplete = 0;
  for (int i = 0; i < gen.count; ++i) {
    const int n = length_dist(length_rng);
    const std::uint64_t task_seed =
        derive_seed(derive_seed(cfg.seed, "traj"), static_cast<std::uint64_t>(i));
    env::TaskSpec task = env::generate_task(cfg.env, task_seed, n);
    env::Rollout rollout = env::scripted_rollout(
        task, gen.suboptimality,
        derive_seed(derive_seed(cfg.seed, "rollout"), static_cast<std::uint64_t>(i)));
    if (!rollout.completed) ++incomplete;

    data::Trajectory t;
    t.id = traj_id(i);
    t.instruction = {task.instruction, task.task_id};
    t.states = std::move(rollout.states);
    t.actions = std::move(rollout.actions);
    t.meta = {task_seed, n, gen.suboptimality};
    transitions += t.num_transitions();
    trajs.push_back(std::move(t));
  }

  data::DatasetManifest manifest;
  manifest.ids.reserve(trajs.size());
  for (const auto& t : trajs) manifest.ids.push_back(t.id);
  manifest.env_config = cfg.env;
  manifest.generator_seed = cfg.seed;

  fs::create_directories(out_dir);
  data::write_manifest(out_dir, manifest);
  data::write_trajectories(out_dir, trajs);
  std::printf("wrote %zu trajectories (%zu transitions, %d incomplete) to %s\n", trajs.size(),
              transitions, incomplete, out_dir.string().c_str());
}

void run_label(const AppConfig& cfg, const fs::path& data_dir, const std::string& source,
               bool resume) {
  static const std::set<std::string> kSources = {"oracle",    "lvlm",    "sparse",
                                                 "frame_sim", "seq_sim", "combined"};
  if (!kSources.count(source)) {
    throw ValidationError("unknown label source '" + source +
                          "' (oracle|lvlm|sparse|frame_sim|seq_sim|combined)");
  }

  data::DatasetManifest manifest = data::read_manifest(data_dir);
  std::vector<data::Trajectory> trajs = data::read_trajectories(data_dir, manifest);

  if (source == "combined") {
    // The terminal bonus stacks on whichever dense source is available;
    // remote labels win over the scripted annotator when both exist.
    std::string dense_source;
    for (const char* candidate : {"lvlm", "oracle"}) {
      if (fs::exists(data::labels_path(data_dir, candidate))) {
        dense_source = candidate;
        break;
      }
    }
    if (dense_source.empty()) {
      throw ValidationError(
          "combined labels need dense ones first: run `label --source oracle` "
          "(or --source lvlm) on this dataset");
    }
    std::vector<data::RewardLabels> dense = data::read_labels(data_dir, dense_source);
    std::map<std::string, const data::RewardLabels*> by_id;
    for (const auto& l : dense) by_id[l.trajectory_id] = &l;
    std::vector<data::RewardLabels> combined;
    combined.reserve(trajs.size());
    for (const auto& t : trajs) {
      auto it = by_id.find(t.id);
      if (it == by_id.end()) {
        throw ValidationError("dense labels (" + dense_source + ") missing trajectory " + t.id);
      }
      combined.push_back(annot::combine_with_sparse(*it->second, "combined"));
    }
    data::write_labels(data_dir, source, combined);
    std::printf("combined %s + terminal bonus for %zu trajectories\n", dense_source.c_str(),
                combined.size());
    return;
  }

  // Backends are only needed for the annotator-driven sources.
  std::unique_ptr<annot::AnnotatorBackend> owned;
  std::unique_ptr<annot::CachedBackend> cached;
  annot::AnnotatorBackend* backend = nullptr;
  if (source == "oracle") {
    owned = std::make_unique<annot::OracleBackend>(cfg.annotator.scale_max, cfg.oracle_noise_std,
                                                   derive_seed(cfg.seed, "oracle"));
    backend = owned.get();
  } else if (source == "lvlm") {
    if (cfg.http.base_url.empty()) {
      throw ValidationError("lvlm labels need http.base_url (config or --http.base_url=...)");
    }
    owned = std::make_unique<annot::HttpBackend>(cfg.http);
    backend = owned.get();
    if (!cfg.cache_dir.empty()) {
      cached = std::make_unique<annot::CachedBackend>(*owned, fs::path(cfg.cache_dir));
      backend = cached.get();
    }
  }

  baselines::StubEmbedder embedder;

  const fs::path path = data::labels_path(data_dir, source);
  std::map<std::string, data::RewardLabels> existing;
  if (resume) existing = read_existing_labels(path, source);

  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");

  annot::AnnotateStats stats;
  int reused = 0;
  for (const auto& t : trajs) {
    data::RewardLabels labels;
    if (auto it = existing.find(t.id); it != existing.end()) {
      labels = it->second;
      ++reused;
    } else if (source == "sparse") {
      labels = baselines::sparse_labels(t);
    } else if (source == "frame_sim") {
      labels = baselines::frame_similarity_labels(t, task_of(manifest, t), manifest.env_config,
                                                  embedder);
    } else if (source == "seq_sim") {
      labels = baselines::sequence_similarity_labels(t, task_of(manifest, t), manifest.env_config,
                                                     embedder);
    } else {
      labels = annot::annotate_trajectory(*backend, task_of(manifest, t), t, manifest.env_config,
                                          cfg.annotator, source, &stats);
    }
    // One line per trajectory, flushed, so an interrupted run resumes here.
    out << data::labels_to_json(labels).dump() << '\n';
    out.flush();
  }
  if (!out) throw ValidationError("write failed on " + path.string());
  std::printf("labeled %zu trajectories as '%s' (%d reused", trajs.size(), source.c_str(), reused);
  if (stats.conversations > 0) {
    std::printf(", %d windows, %d conversations", stats.windows, stats.conversations);
  }
  std::printf(") -> %s\n", path.string().c_str());
}

void run_train(const AppConfig& cfg, const fs::path& data_dir, const std::string& source,
               const fs::path& artifact_path) {
  data::DatasetManifest manifest = data::read_manifest(data_dir);
  std::vector<data::Trajectory> trajs = data::read_trajectories(data_dir, manifest);
  std::vector<data::RewardLabels> labels = data::read_labels(data_dir, source);
  data::LabeledDataset dataset(std::move(trajs), labels);

  std::printf("training on %zu transitions (labels: %s, seed %llu)\n", dataset.num_transitions(),
              source.c_str(), static_cast<unsigned long long>(cfg.seed));
  iql::PolicyArtifact artifact = train_iql(
      dataset, manifest.env_config, cfg.iql, cfg.seed,
      [](const iql::Metrics& m) {
        std::printf("update %lld  v_loss %.5f  q_loss %.5f  pi_loss %.5f  adv %.4f\n",
                    static_cast<long long>(m.update), m.v_loss, m.q_loss, m.pi_loss,
                    m.mean_advantage);
      },
      /*metrics_every=*/2000);

  if (artifact_path.has_parent_path()) fs::create_directories(artifact_path.parent_path());
  iql::save_artifact(artifact_path, artifact);
  std::printf("saved policy to %s\n", artifact_path.string().c_str());
}

void run_eval(const AppConfig& cfg, const fs::path& artifact_path, const std::string& method,
              const fs::path& csv_path) {
  iql::PolicyArtifact artifact = iql::load_artifact(artifact_path);
  iql::Policy policy(artifact);

  std::vector<eval::EvalRow> rows;
  for (auto mode : {eval::InitMode::fixed, eval::InitMode::randomized}) {
    // Sampled execution, seeded per pass so reruns are byte-identical.
    auto rng = std::make_shared<std::mt19937_64>(
        derive_seed(artifact.seed, mode == eval::InitMode::fixed ? "act-fixed" : "act-rand"));
    eval::ActFn act = [&policy, rng](const env::TaskSpec& task, const env::GridState& state) {
      return policy.act(task, state, *rng);
    };
    eval::EvalReport report =
        eval::evaluate(act, method, artifact.seed, artifact.env_config, cfg.eval, mode);
    for (const auto& row : report.rows) {
      std::printf("%s  len %d  %s  completion %.3f  (%d episodes)\n", method.c_str(),
                  row.task_length, eval::name_of(row.init_mode), row.mean_completion,
                  row.episodes);
      rows.push_back(row);
    }
  }

  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  eval::export_csv(csv_path, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), csv_path.string().c_str());
}

void run_report(const std::vector<fs::path>& csv_paths, const std::string& baseline,
                const fs::path& out_path) {
  if (csv_paths.empty()) throw ValidationError("report needs at least one --csv");
  std::vector<eval::EvalRow> rows;
  for (const auto& p : csv_paths) {
    std::vector<eval::EvalRow> part = eval::read_csv(p);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  eval::Comparison comparison = eval::compare(rows, baseline);
  std::string text = eval::render_comparison(comparison);
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot open " + out_path.string() + " for writing");
    out << text;
  }
}

}  // namespace rgvlm::cli
