#include "rgvlm/eval/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/rng.hpp"
#include "rgvlm/env/env.hpp"
#include "rgvlm/env/task_gen.hpp"

namespace rgvlm::eval {

const char* name_of(InitMode m) { return m == InitMode::fixed ? "fixed" : "randomized"; }

namespace {

InitMode init_mode_from(const std::string& s) {
  if (s == "fixed") return InitMode::fixed;
  if (s == "randomized") return InitMode::randomized;
  throw DataFormatError("unknown init_mode '" + s + "'");
}

// Uniform start cell that is standable and object-free. Seeded by the task
// and episode only, so every method sees the same randomized starts.
env::GridState randomized_init(const env::TaskSpec& task, std::uint64_t task_seed, int episode) {
  auto rng = make_rng(derive_seed(derive_seed(task_seed, "init"), static_cast<std::uint64_t>(episode)));
  std::uniform_int_distribution<int> dx(0, task.board.width - 1);
  std::uniform_int_distribution<int> dy(0, task.board.height - 1);
  env::GridState state = task.initial;
  for (int tries = 0; tries < 1000; ++tries) {
    env::GridPos p{dx(rng), dy(rng)};
    if (env::blocks_agent(task.board, state, p)) continue;
    bool on_object = false;
    for (const auto& q : state.object_pos) on_object |= q == p;
    if (on_object) continue;
    state.agent = p;
    return state;
  }
  return state;  // pathological boards: keep the fixed start
}

}  // namespace

double completion_fraction(const env::TaskSpec& task, const env::GridState& final_state) {
  if (task.subtasks.empty()) return 1.0;
  return static_cast<double>(final_state.subtasks_done) / static_cast<double>(task.subtasks.size());
}

EvalReport evaluate(const ActFn& act, const std::string& method, std::uint64_t seed,
                    const env::EnvConfig& env_cfg, const EvalConfig& cfg, InitMode init_mode) {
  EvalReport report;
  for (int length : cfg.task_lengths) {
    double total = 0;
    int episodes = 0;
    for (int k = 0; k < cfg.tasks_per_length; ++k) {
      const std::uint64_t task_seed =
          cfg.task_seed_offset + static_cast<std::uint64_t>(length) * 10000 + k;
      const env::TaskSpec task = env::generate_task(env_cfg, task_seed, length);
      const int max_steps =
          cfg.max_steps > 0 ? cfg.max_steps : 4 * (env_cfg.width + env_cfg.height) * length;

      for (int ep = 0; ep < cfg.episodes_per_task; ++ep) {
        env::GridState state = init_mode == InitMode::randomized
                                   ? randomized_init(task, task_seed, ep)
                                   : task.initial;
        for (int t = 0; t < max_steps; ++t) {
          const env::StepOutcome out = env::step(task, state, act(task, state));
          state = out.next;
          if (out.done) break;
        }
        total += completion_fraction(task, state);
        ++episodes;
      }
    }
    EvalRow row;
    row.method = method;
    row.seed = seed;
    row.task_length = length;
    row.init_mode = init_mode;
    row.mean_completion = episodes > 0 ? total / episodes : 0.0;
    row.episodes = episodes;
    report.rows.push_back(row);
  }
  return report;
}

double generalization_drop(double fixed_mean, double randomized_mean) {
  if (fixed_mean <= 0.0) return 0.0;
  return (fixed_mean - randomized_mean) / fixed_mean;
}

Comparison compare(const std::vector<EvalRow>& rows, const std::string& baseline_method) {
  Comparison c;
  c.baseline = baseline_method;

  std::vector<std::string> order;
  for (const auto& r : rows) {
    bool seen = false;
    for (const auto& m : order) seen |= m == r.method;
    if (!seen) order.push_back(r.method);
  }

  struct Acc {
    double sum = 0;
    int n = 0;
    double mean() const { return n > 0 ? sum / n : 0.0; }
  };

  for (const auto& method : order) {
    MethodSummary s;
    s.method = method;
    std::map<int, Acc> fixed_by_len;
    Acc fixed_all, rand_all;
    for (const auto& r : rows) {
      if (r.method != method) continue;
      if (r.init_mode == InitMode::fixed) {
        fixed_by_len[r.task_length].sum += r.mean_completion * r.episodes;
        fixed_by_len[r.task_length].n += r.episodes;
        fixed_all.sum += r.mean_completion * r.episodes;
        fixed_all.n += r.episodes;
      } else {
        rand_all.sum += r.mean_completion * r.episodes;
        rand_all.n += r.episodes;
      }
    }
    for (const auto& [len, acc] : fixed_by_len) s.mean_by_length[len] = acc.mean();
    s.fixed_mean = fixed_all.mean();
    s.randomized_mean = rand_all.mean();
    s.drop = generalization_drop(s.fixed_mean, s.randomized_mean);
    c.methods.push_back(s);
  }

  const MethodSummary* base = nullptr;
  for (const auto& m : c.methods)
    if (m.method == baseline_method) base = &m;
  if (base) {
    for (auto& m : c.methods) {
      for (const auto& [len, mean] : m.mean_by_length) {
        auto it = base->mean_by_length.find(len);
        if (it != base->mean_by_length.end() && it->second > 0.0)
          m.ratio_by_length[len] = mean / it->second;
        else
          m.ratio_by_length[len] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return c;
}

void export_csv(const std::filesystem::path& path, const std::vector<EvalRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << "method,seed,task_length,init_mode,mean_completion,episodes\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.mean_completion);
    out << r.method << ',' << r.seed << ',' << r.task_length << ',' << name_of(r.init_mode) << ','
        << buf << ',' << r.episodes << "\n";
  }
}

std::vector<EvalRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string() + " for reading");

  std::string line;
  if (!std::getline(in, line) ||
      line != "method,seed,task_length,init_mode,mean_completion,episodes")
    throw DataFormatError(path.string() + ": unexpected CSV header");

  std::vector<EvalRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw DataFormatError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    EvalRow r;
    try {
      r.method = fields[0];
      r.seed = std::stoull(fields[1]);
      r.task_length = std::stoi(fields[2]);
      r.init_mode = init_mode_from(fields[3]);
      r.mean_completion = std::stod(fields[4]);
      r.episodes = std::stoi(fields[5]);
    } catch (const std::logic_error&) {
      throw DataFormatError(path.string() + ":" + std::to_string(lineno) + ": bad field value");
    }
    rows.push_back(r);
  }
  return rows;
}

std::string render_comparison(const Comparison& c) {
  std::ostringstream os;
  os << "baseline: " << c.baseline << "\n\n";
  os << "method            ";
  if (!c.methods.empty())
    for (const auto& [len, _] : c.methods.front().mean_by_length) os << "  len" << len;
  os << "   fixed    rand    drop\n";
  char buf[64];
  for (const auto& m : c.methods) {
    std::snprintf(buf, sizeof(buf), "%-18s", m.method.c_str());
    os << buf;
    for (const auto& [_, mean] : m.mean_by_length) {
      std::snprintf(buf, sizeof(buf), " %6.3f", mean);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), " %7.3f %7.3f %7.3f\n", m.fixed_mean, m.randomized_mean,
                  m.drop);
    os << buf;
    if (m.method != c.baseline && !m.ratio_by_length.empty()) {
      os << "  vs " << c.baseline << "      ";
      for (const auto& [_, ratio] : m.ratio_by_length) {
        if (std::isnan(ratio))
          os << "    n/a";
        else {
          std::snprintf(buf, sizeof(buf), " %6.2fx", ratio);
          os << buf;
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace rgvlm::eval
