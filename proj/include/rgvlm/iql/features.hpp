#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "rgvlm/env/env.hpp"
#include "rgvlm/env/instructions.hpp"
#include "rgvlm/env/types.hpp"

namespace rgvlm::iql {

// Sparse feature encoding of (state, instruction) pairs.
//
// The observation vector has two blocks: rows [0, state_dim) encode the
// state, rows [state_dim, obs_dim) the instruction bag-of-words. Entity
// slots are keyed by identity (kind x color for objects, kind for
// receptacles), not by board index, so the same instruction token always
// lines up with the same feature rows across different layouts. Entity
// positions enter exclusively through agent-relative features (offsets,
// distance, direction and adjacency flags); there are deliberately no
// per-cell entity channels. Absolute planes let the nets key behavior to
// individual boards, which fits the demonstrations but collapses on unseen
// layouts; the relative encoding forces the instruction-to-entity rule that
// transfers. Local passability of the four neighbor cells is provided so a
// policy can sidestep walls, receptacles and closed doors reactively.
//
// Each slot is emitted twice: once unconditionally and once gated on the
// instruction naming that entity (color and kind for objects, kind for
// receptacles, "door" for the door). Learning "move toward the entity the
// instruction names" from bag-of-words alone means discovering a
// token-conjunction-by-slot interaction, which small MLPs only find with
// far more boards than a desk-scale dataset has; grounding the mention in
// the encoding makes that rule low-order and lets values and policies
// concentrate on credit assignment instead of lexical binding.
class FeatureCodec {
 public:
  explicit FeatureCodec(const env::EnvConfig& cfg) : w_(cfg.width), h_(cfg.height) {
    agent_off_ = 0;                            // x, y and distance to each border
    blocked_off_ = agent_off_ + kAgentFeats;   // up/down/left/right passability
    door_open_off_ = blocked_off_ + 4;
    carry_off_ = door_open_off_ + 1;           // carrying flag + combo one-hot
    progress_off_ = carry_off_ + 1 + kNumCombos;
    slots_off_ = progress_off_ + kProgressDims;
    gated_off_ = slots_off_ + kNumSlots * kSlotFeats;
    state_dim_ = gated_off_ + kNumSlots * kSlotFeats;
    instr_dim_ = static_cast<int>(env::vocabulary().size()) + 1;
  }

  int state_dim() const { return state_dim_; }
  int instr_dim() const { return instr_dim_; }
  int obs_dim() const { return state_dim_ + instr_dim_; }

  using Entries = std::vector<std::pair<int, float>>;

  // Which slots the instruction names. Objects need both their color and
  // kind tokens, receptacles their kind token, the door the word "door".
  std::vector<bool> mentions(const std::string& text) const {
    std::vector<bool> m(kNumSlots, false);
    const std::vector<std::string> tokens = env::tokenize(text);
    auto has = [&tokens](const char* word) {
      for (const auto& t : tokens)
        if (t == word) return true;
      return false;
    };
    for (int k = 0; k < env::kNumObjectKinds; ++k)
      for (int c = 0; c < env::kNumColors; ++c)
        m[static_cast<std::size_t>(k * env::kNumColors + c)] =
            has(env::name_of(static_cast<env::ObjectKind>(k))) &&
            has(env::name_of(static_cast<env::Color>(c)));
    for (int r = 0; r < env::kNumReceptacleKinds; ++r)
      m[static_cast<std::size_t>(kNumCombos + r)] =
          has(env::name_of(static_cast<env::ReceptacleKind>(r)));
    m[kNumCombos + env::kNumReceptacleKinds] = has("door");
    return m;
  }

  Entries encode_state(const env::BoardSpec& board, const env::GridState& s,
                       const std::vector<bool>& mentioned) const {
    Entries e;
    e.reserve(64);

    const float fw = static_cast<float>(w_ - 1), fh = static_cast<float>(h_ - 1);
    if (s.agent.x != 0) e.emplace_back(agent_off_ + 0, static_cast<float>(s.agent.x) / fw);
    if (s.agent.y != 0) e.emplace_back(agent_off_ + 1, static_cast<float>(s.agent.y) / fh);
    if (s.agent.x != w_ - 1)
      e.emplace_back(agent_off_ + 2, static_cast<float>(w_ - 1 - s.agent.x) / fw);
    if (s.agent.y != h_ - 1)
      e.emplace_back(agent_off_ + 3, static_cast<float>(h_ - 1 - s.agent.y) / fh);

    static constexpr int kDx[4] = {0, 0, -1, 1};  // matches the action order
    static constexpr int kDy[4] = {-1, 1, 0, 0};
    for (int d = 0; d < 4; ++d) {
      const env::GridPos p{s.agent.x + kDx[d], s.agent.y + kDy[d]};
      if (env::blocks_agent(board, s, p)) e.emplace_back(blocked_off_ + d, 1.0f);
    }

    auto slot = [&](int idx, env::GridPos target) {
      push_slot(e, slots_off_, idx, s.agent, target);
      if (idx < static_cast<int>(mentioned.size()) && mentioned[static_cast<std::size_t>(idx)])
        push_slot(e, gated_off_, idx, s.agent, target);
    };
    for (std::size_t i = 0; i < board.objects.size(); ++i)
      slot(combo_of(board.objects[i]), s.object_pos[i]);
    for (const auto& r : board.receptacles) slot(kNumCombos + static_cast<int>(r.kind), r.pos);
    for (std::size_t d = 0; d < board.doors.size(); ++d) {
      if (d == 0 && s.door_open[d]) e.emplace_back(door_open_off_, 1.0f);
      if (d == 0) slot(kNumCombos + env::kNumReceptacleKinds, board.doors[d].pos);
    }

    if (s.carried >= 0) {
      e.emplace_back(carry_off_, 1.0f);
      e.emplace_back(carry_off_ + 1 + combo_of(board.objects[s.carried]), 1.0f);
    }

    const int prog = std::min(s.subtasks_done, kProgressDims - 1);
    e.emplace_back(progress_off_ + prog, 1.0f);
    return e;
  }

  // Rows are already offset into the instruction block.
  Entries encode_instruction(const std::string& text) const {
    Entries e;
    const std::vector<int> bag = env::bag_of_words(text);
    for (std::size_t i = 0; i < bag.size(); ++i)
      if (bag[i] != 0) e.emplace_back(state_dim_ + static_cast<int>(i), static_cast<float>(bag[i]));
    return e;
  }

  static constexpr int kAgentFeats = 4;
  static constexpr int kNumCombos = env::kNumObjectKinds * env::kNumColors;
  static constexpr int kNumSlots = kNumCombos + env::kNumReceptacleKinds + 1;  // + door
  static constexpr int kSlotFeats = 10;
  static constexpr int kProgressDims = 9;

 private:
  static int combo_of(const env::ObjectSpec& o) {
    return static_cast<int>(o.kind) * env::kNumColors + static_cast<int>(o.color);
  }

  // present, dx, dy, distance, four direction flags, adjacent, colocated
  void push_slot(Entries& e, int block_off, int slot, env::GridPos agent,
                 env::GridPos target) const {
    const int base = block_off + slot * kSlotFeats;
    const float denom = static_cast<float>(std::max(w_, h_));
    const int dx = target.x - agent.x;
    const int dy = target.y - agent.y;
    const int dist = std::abs(dx) + std::abs(dy);
    e.emplace_back(base + 0, 1.0f);
    if (dx != 0) e.emplace_back(base + 1, static_cast<float>(dx) / denom);
    if (dy != 0) e.emplace_back(base + 2, static_cast<float>(dy) / denom);
    if (dist != 0) e.emplace_back(base + 3, static_cast<float>(dist) / static_cast<float>(w_ + h_));
    if (dx < 0) e.emplace_back(base + 4, 1.0f);
    if (dx > 0) e.emplace_back(base + 5, 1.0f);
    if (dy < 0) e.emplace_back(base + 6, 1.0f);
    if (dy > 0) e.emplace_back(base + 7, 1.0f);
    if (dist == 1) e.emplace_back(base + 8, 1.0f);
    if (dist == 0) e.emplace_back(base + 9, 1.0f);
  }

  int w_, h_;
  int agent_off_, blocked_off_, door_open_off_, carry_off_, progress_off_, slots_off_, gated_off_;
  int state_dim_, instr_dim_;
};

}  // namespace rgvlm::iql
