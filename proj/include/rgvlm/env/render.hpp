#pragma once

#include <cstdint>
#include <vector>

#include "rgvlm/env/types.hpp"

namespace rgvlm::env {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::uint8_t* px(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
  const std::uint8_t* px(int x, int y) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
};

// Rasterize a state at cell_px pixels per cell. The image is a faithful
// observation: entity kinds/colors, door state, the carried object (as a
// marker strip on the agent's cell) and subtask progress (magenta pips along
// the bottom row) are all recoverable from pixels alone.
Image render(const BoardSpec& board, const GridState& state, int cell_px);

}  // namespace rgvlm::env
