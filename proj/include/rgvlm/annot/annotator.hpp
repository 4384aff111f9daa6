#pragma once

#include <json.hpp>

#include "rgvlm/annot/backend.hpp"
#include "rgvlm/annot/parse.hpp"
#include "rgvlm/data/trajectory.hpp"

namespace rgvlm::annot {

struct AnnotatorConfig {
  int window_size = 8;
  int scale_max = 10;
  int grid_columns = 3;  // frames per row in the composed image
  int max_retries = 3;
  int retry_base_ms = 50;
  int concurrency = 1;  // windows annotated in parallel
  PromptTemplates templates;
};

inline void to_json(nlohmann::json& j, const AnnotatorConfig& c) {
  j = {{"window_size", c.window_size},
       {"scale_max", c.scale_max},
       {"grid_columns", c.grid_columns},
       {"max_retries", c.max_retries},
       {"retry_base_ms", c.retry_base_ms},
       {"concurrency", c.concurrency},
       {"templates", c.templates}};
}

inline void from_json(const nlohmann::json& j, AnnotatorConfig& c) {
  AnnotatorConfig d;
  c.window_size = j.value("window_size", d.window_size);
  c.scale_max = j.value("scale_max", d.scale_max);
  c.grid_columns = j.value("grid_columns", d.grid_columns);
  c.max_retries = j.value("max_retries", d.max_retries);
  c.retry_base_ms = j.value("retry_base_ms", d.retry_base_ms);
  c.concurrency = j.value("concurrency", d.concurrency);
  c.templates = j.value("templates", d.templates);
}

struct AnnotateStats {
  int windows = 0;
  int conversations = 0;  // two per window: analysis, then scoring
};

// Windowed two-stage annotation of one trajectory. Frames are rendered from
// the symbolic states; each window is sent as (analysis request, scoring
// request conditioned on the analysis); scores are parsed and normalized by
// scale_max into per-transition rewards. ParseErrors are re-thrown with the
// trajectory id prepended. Results are deterministic for deterministic
// backends regardless of concurrency.
data::RewardLabels annotate_trajectory(AnnotatorBackend& backend, const env::TaskSpec& task,
                                       const data::Trajectory& trajectory,
                                       const env::EnvConfig& env_cfg, const AnnotatorConfig& cfg,
                                       const std::string& source,
                                       AnnotateStats* stats = nullptr);

// The dense labels plus a terminal bonus of +1 on the final transition.
data::RewardLabels combine_with_sparse(const data::RewardLabels& dense,
                                       const std::string& source);

}  // namespace rgvlm::annot
