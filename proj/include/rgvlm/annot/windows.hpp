#pragma once

#include <cstddef>
#include <vector>

namespace rgvlm::annot {

// Transitions [start, start + count) of one trajectory.
struct Window {
  int start = 0;
  int count = 0;
};

// Consecutive fixed-size windows; the last one holds the remainder.
std::vector<Window> partition_windows(std::size_t num_transitions, int window_size);

}  // namespace rgvlm::annot
