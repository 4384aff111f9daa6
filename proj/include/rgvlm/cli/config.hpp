#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rgvlm/annot/annotator.hpp"
#include "rgvlm/annot/http_backend.hpp"
#include "rgvlm/env/types.hpp"
#include "rgvlm/eval/eval.hpp"
#include "rgvlm/iql/iql.hpp"

namespace rgvlm::cli {

// Knobs for the scripted demonstration generator.
struct GeneratorConfig {
  int count = 500;
  int min_subtasks = 1;
  int max_subtasks = 4;
  // Probability per step that the demonstrator takes a random move instead
  // of the planned one. 0 gives near-optimal data.
  double suboptimality = 0.2;
};

void to_json(nlohmann::json& j, const GeneratorConfig& c);
void from_json(const nlohmann::json& j, GeneratorConfig& c);

// Everything the tool needs, in one place. Loadable from a JSON file and
// patchable from the command line with dotted-path overrides.
struct AppConfig {
  env::EnvConfig env;
  GeneratorConfig generator;
  annot::AnnotatorConfig annotator;
  annot::HttpBackendConfig http;
  iql::IqlConfig iql;
  eval::EvalConfig eval;
  std::uint64_t seed = 1;
  // Standard deviation of the score jitter in the scripted annotator
  // backend; 0 keeps its scores exact.
  double oracle_noise_std = 0.0;
  // Response cache directory for remote annotation; empty disables caching.
  std::string cache_dir;
};

void to_json(nlohmann::json& j, const AppConfig& c);
void from_json(const nlohmann::json& j, AppConfig& c);

// Applies one "path.to.field=value" override onto a JSON document. The value
// is parsed as JSON when possible (numbers, bools, arrays) and treated as a
// bare string otherwise. Throws ValidationError on a malformed spec.
void apply_override(nlohmann::json& doc, const std::string& spec);

// Loads the config file (if non-empty), then applies overrides in order.
// Each override is "a.b.c=value", optionally with a leading "--".
AppConfig load_config(const std::filesystem::path& config_file,
                      const std::vector<std::string>& overrides);

}  // namespace rgvlm::cli
