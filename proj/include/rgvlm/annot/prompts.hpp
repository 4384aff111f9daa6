#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "rgvlm/annot/windows.hpp"
#include "rgvlm/env/render.hpp"

namespace rgvlm::annot {

struct ChatMessage {
  std::string role;  // "user" or "assistant"
  std::string text;
  std::vector<std::vector<std::uint8_t>> images;  // PNG bytes, sent after the text
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
};

// The two query texts. Placeholders: {instruction}, {num_frames},
// {num_actions}, {scale_max}. Overridable through the annotator config so
// prompt wording can be tuned without a rebuild.
struct PromptTemplates {
  std::string stage1 =
      "An agent in a grid world was given the instruction: \"{instruction}\". "
      "The attached image contains {num_frames} consecutive observations of the agent, "
      "stamped 1 to {num_frames} in reading order. Frame i shows the state before the "
      "agent's i-th action in this segment and frame i+1 the state right after it; there "
      "are {num_actions} actions in total. Describe what the agent did in each step and "
      "whether it made progress toward the instruction.";
  std::string stage2 =
      "Based on your analysis, rate each of the {num_actions} actions on a scale from "
      "0 to {scale_max}, where 0 means the action made no progress toward the instruction "
      "and {scale_max} means it completed a part of it. Answer with one line per action, "
      "in exactly the format \"Action i: score\".";
};

inline void to_json(nlohmann::json& j, const PromptTemplates& t) {
  j = {{"stage1", t.stage1}, {"stage2", t.stage2}};
}

inline void from_json(const nlohmann::json& j, PromptTemplates& t) {
  PromptTemplates d;
  t.stage1 = j.value("stage1", d.stage1);
  t.stage2 = j.value("stage2", d.stage2);
}

std::string fill_template(std::string tpl,
                          const std::vector<std::pair<std::string, std::string>>& subs);

// Tile the frames into one image, `columns` per row, each tile stamped with
// its 1-based frame number in the top-left corner.
env::Image compose_grid(const std::vector<env::Image>& frames, int columns);

// Stage 1: single user message, instruction plus the composed frame grid.
ChatRequest stage1_request(const PromptTemplates& templates, const std::string& instruction,
                           const env::Image& grid, const Window& window, int scale_max);

// Stage 2 extends the stage-1 conversation with the model's analysis and the
// scoring request, so the scores are conditioned on the analysis.
ChatRequest stage2_request(const ChatRequest& stage1, const std::string& stage1_response,
                           const PromptTemplates& templates, const Window& window, int scale_max);

}  // namespace rgvlm::annot
