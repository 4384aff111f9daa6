#include "rgvlm/annot/windows.hpp"

#include "rgvlm/common/errors.hpp"

namespace rgvlm::annot {

std::vector<Window> partition_windows(std::size_t num_transitions, int window_size) {
  if (window_size < 1)
    throw ValidationError("partition_windows: window_size must be positive, got " +
                          std::to_string(window_size));
  std::vector<Window> out;
  const int n = static_cast<int>(num_transitions);
  for (int start = 0; start < n; start += window_size)
    out.push_back({start, std::min(window_size, n - start)});
  return out;
}

}  // namespace rgvlm::annot
