#include "rgvlm/data/dataset.hpp"

#include <fstream>
#include <unordered_map>

#include "rgvlm/common/errors.hpp"

namespace rgvlm::data {

namespace {

nlohmann::json parse_line(const std::string& line, const std::filesystem::path& file,
                          std::size_t lineno) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded())
    throw DataFormatError(file.string() + ":" + std::to_string(lineno) + ": not valid JSON");
  return j;
}

std::ofstream open_for_write(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + p.string() + " for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + p.string() + " for reading");
  return in;
}

}  // namespace

void write_manifest(const std::filesystem::path& dir, const DatasetManifest& m) {
  std::filesystem::create_directories(dir);
  nlohmann::json j = {{"schema_version", m.schema_version},
                      {"count", m.ids.size()},
                      {"ids", m.ids},
                      {"env_config", m.env_config},
                      {"generator_seed", m.generator_seed}};
  auto out = open_for_write(dir / "manifest.json");
  out << j.dump(2) << "\n";
}

DatasetManifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  auto in = open_for_read(path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataFormatError(path.string() + ": not valid JSON");

  DatasetManifest m;
  if (!j.contains("schema_version"))
    throw DataFormatError(path.string() + ": missing schema_version");
  m.schema_version = j["schema_version"].get<int>();
  if (m.schema_version != 1)
    throw DataFormatError(path.string() + ": unsupported schema_version " +
                          std::to_string(m.schema_version));
  try {
    m.ids = j.at("ids").get<std::vector<std::string>>();
    m.env_config = j.at("env_config").get<env::EnvConfig>();
    m.generator_seed = j.at("generator_seed").get<std::uint64_t>();
    if (j.at("count").get<std::size_t>() != m.ids.size())
      throw DataFormatError(path.string() + ": count does not match ids length");
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(path.string() + ": " + e.what());
  }
  return m;
}

nlohmann::json trajectory_to_json(const Trajectory& t) {
  nlohmann::json actions = nlohmann::json::array();
  for (env::Action a : t.actions) actions.push_back(static_cast<int>(a));
  return {{"id", t.id},
          {"instruction", {{"text", t.instruction.text}, {"task_id", t.instruction.task_id}}},
          {"states", t.states},
          {"actions", actions},
          {"meta",
           {{"seed", t.meta.seed},
            {"num_subtasks", t.meta.num_subtasks},
            {"suboptimality", t.meta.suboptimality}}}};
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory t;
  try {
    t.id = j.at("id").get<std::string>();
    t.instruction.text = j.at("instruction").at("text").get<std::string>();
    t.instruction.task_id = j.at("instruction").at("task_id").get<std::string>();
    t.states = j.at("states").get<std::vector<env::GridState>>();
    for (const auto& a : j.at("actions")) {
      int v = a.get<int>();
      if (v < 0 || v >= env::kNumActions)
        throw DataFormatError("trajectory " + t.id + ": action " + std::to_string(v) +
                              " out of range");
      t.actions.push_back(static_cast<env::Action>(v));
    }
    t.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
    t.meta.num_subtasks = j.at("meta").at("num_subtasks").get<int>();
    t.meta.suboptimality = j.at("meta").at("suboptimality").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError("trajectory " + (t.id.empty() ? std::string("<no id>") : t.id) + ": " +
                          e.what());
  }
  if (t.states.size() != t.actions.size() + 1)
    throw DataFormatError("trajectory " + t.id + ": " + std::to_string(t.states.size()) +
                          " states does not match " + std::to_string(t.actions.size()) +
                          " actions");
  return t;
}

void write_trajectories(const std::filesystem::path& dir, const std::vector<Trajectory>& trajs) {
  std::filesystem::create_directories(dir);
  auto out = open_for_write(dir / "trajectories.jsonl");
  for (const auto& t : trajs) out << trajectory_to_json(t).dump() << "\n";
}

std::vector<Trajectory> read_trajectories(const std::filesystem::path& dir,
                                          const DatasetManifest& manifest) {
  const auto path = dir / "trajectories.jsonl";
  auto in = open_for_read(path);
  std::vector<Trajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    out.push_back(trajectory_from_json(parse_line(line, path, lineno)));
  }
  if (out.size() != manifest.ids.size())
    throw DataFormatError(path.string() + ": has " + std::to_string(out.size()) +
                          " trajectories, manifest lists " + std::to_string(manifest.ids.size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].id != manifest.ids[i])
      throw DataFormatError(path.string() + ": line " + std::to_string(i + 1) + " has id " +
                            out[i].id + ", manifest expects " + manifest.ids[i]);
  return out;
}

std::filesystem::path labels_path(const std::filesystem::path& dir, const std::string& source) {
  return dir / "labels" / (source + ".jsonl");
}

nlohmann::json labels_to_json(const RewardLabels& l) {
  return {{"trajectory_id", l.trajectory_id}, {"source", l.source}, {"rewards", l.rewards}};
}

RewardLabels labels_from_json(const nlohmann::json& j) {
  RewardLabels l;
  try {
    l.trajectory_id = j.at("trajectory_id").get<std::string>();
    l.source = j.at("source").get<std::string>();
    l.rewards = j.at("rewards").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError("labels record: " + std::string(e.what()));
  }
  return l;
}

void write_labels(const std::filesystem::path& dir, const std::string& source,
                  const std::vector<RewardLabels>& labels) {
  std::filesystem::create_directories(dir / "labels");
  auto out = open_for_write(labels_path(dir, source));
  for (const auto& l : labels) out << labels_to_json(l).dump() << "\n";
}

std::vector<RewardLabels> read_labels(const std::filesystem::path& dir,
                                      const std::string& source) {
  const auto path = labels_path(dir, source);
  auto in = open_for_read(path);
  std::vector<RewardLabels> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    out.push_back(labels_from_json(parse_line(line, path, lineno)));
  }
  return out;
}

LabeledDataset::LabeledDataset(std::vector<Trajectory> trajectories,
                               const std::vector<RewardLabels>& labels)
    : trajs_(std::move(trajectories)) {
  std::unordered_map<std::string, const RewardLabels*> by_id;
  for (const auto& l : labels) by_id[l.trajectory_id] = &l;

  rewards_.reserve(trajs_.size());
  for (std::size_t k = 0; k < trajs_.size(); ++k) {
    const auto& t = trajs_[k];
    auto it = by_id.find(t.id);
    if (it == by_id.end())
      throw DataFormatError("no reward labels for trajectory " + t.id);
    if (it->second->rewards.size() != t.num_transitions())
      throw DataFormatError("labels for trajectory " + t.id + ": " +
                            std::to_string(it->second->rewards.size()) + " rewards for " +
                            std::to_string(t.num_transitions()) + " transitions");
    rewards_.push_back(it->second->rewards);
    for (std::size_t i = 0; i < t.num_transitions(); ++i)
      index_.push_back({static_cast<int>(k), static_cast<int>(i)});
  }
}

bool LabeledDataset::terminal(TransitionRef ref) const {
  const Trajectory& t = trajs_[ref.traj];
  return t.states[ref.t + 1].subtasks_done >= t.meta.num_subtasks;
}

std::vector<TransitionRef> LabeledDataset::sample_batch(std::mt19937_64& rng,
                                                        std::size_t batch_size) const {
  std::uniform_int_distribution<std::size_t> d(0, index_.size() - 1);
  std::vector<TransitionRef> out;
  out.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) out.push_back(index_[d(rng)]);
  return out;
}

}  // namespace rgvlm::data
