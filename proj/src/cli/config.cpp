#include "rgvlm/cli/config.hpp"

#include <fstream>

#include "rgvlm/common/errors.hpp"

namespace rgvlm::cli {

void to_json(nlohmann::json& j, const GeneratorConfig& c) {
  j = nlohmann::json{{"count", c.count},
                     {"min_subtasks", c.min_subtasks},
                     {"max_subtasks", c.max_subtasks},
                     {"suboptimality", c.suboptimality}};
}

void from_json(const nlohmann::json& j, GeneratorConfig& c) {
  c = GeneratorConfig{};
  if (j.contains("count")) j.at("count").get_to(c.count);
  if (j.contains("min_subtasks")) j.at("min_subtasks").get_to(c.min_subtasks);
  if (j.contains("max_subtasks")) j.at("max_subtasks").get_to(c.max_subtasks);
  if (j.contains("suboptimality")) j.at("suboptimality").get_to(c.suboptimality);
}

void to_json(nlohmann::json& j, const AppConfig& c) {
  j = nlohmann::json{{"env", c.env},
                     {"generator", c.generator},
                     {"annotator", c.annotator},
                     {"http", c.http},
                     {"iql", c.iql},
                     {"eval", c.eval},
                     {"seed", c.seed},
                     {"oracle_noise_std", c.oracle_noise_std},
                     {"cache_dir", c.cache_dir}};
}

void from_json(const nlohmann::json& j, AppConfig& c) {
  c = AppConfig{};
  if (j.contains("env")) j.at("env").get_to(c.env);
  if (j.contains("generator")) j.at("generator").get_to(c.generator);
  if (j.contains("annotator")) j.at("annotator").get_to(c.annotator);
  if (j.contains("http")) j.at("http").get_to(c.http);
  if (j.contains("iql")) j.at("iql").get_to(c.iql);
  if (j.contains("eval")) j.at("eval").get_to(c.eval);
  if (j.contains("seed")) j.at("seed").get_to(c.seed);
  if (j.contains("oracle_noise_std")) j.at("oracle_noise_std").get_to(c.oracle_noise_std);
  if (j.contains("cache_dir")) j.at("cache_dir").get_to(c.cache_dir);
}

void apply_override(nlohmann::json& doc, const std::string& spec) {
  std::string s = spec;
  if (s.rfind("--", 0) == 0) s = s.substr(2);
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("bad override '" + spec + "' (expected path.to.field=value)");
  }
  std::string path = s.substr(0, eq);
  std::string value = s.substr(eq + 1);

  // Dots to a JSON pointer: iql.gamma -> /iql/gamma.
  std::string pointer;
  for (char ch : path) pointer += (ch == '.') ? '/' : ch;
  pointer.insert(pointer.begin(), '/');

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;  // bare strings need no quoting on the command line
  }
  try {
    nlohmann::json::json_pointer ptr(pointer);
    // The document always starts from the full default config, so every real
    // field is present; a missing path means a typo, not a new setting.
    if (!doc.contains(ptr)) {
      throw ValidationError("unknown config field '" + path + "' in override '" + spec + "'");
    }
    doc[ptr] = std::move(parsed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad override '" + spec + "': " + e.what());
  }
}

AppConfig load_config(const std::filesystem::path& config_file,
                      const std::vector<std::string>& overrides) {
  nlohmann::json doc = nlohmann::json(AppConfig{});
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ValidationError("cannot open config file " + config_file.string());
    nlohmann::json from_file;
    try {
      in >> from_file;
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("config file " + config_file.string() + ": " + e.what());
    }
    // A partial file is fine: unspecified fields keep their defaults.
    doc.update(from_file, /*merge_objects=*/true);
  }
  for (const auto& spec : overrides) apply_override(doc, spec);
  try {
    return doc.get<AppConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

}  // namespace rgvlm::cli
