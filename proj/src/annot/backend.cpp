#include "rgvlm/annot/backend.hpp"

#include <chrono>
#include <thread>

#include "rgvlm/common/errors.hpp"

namespace rgvlm::annot {

std::string query_backend(AnnotatorBackend& backend, const ChatRequest& request,
                          const WindowContext& ctx, int max_retries, int base_delay_ms) {
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.complete(request, ctx);
    } catch (const BackendError&) {
      if (attempt >= max_retries) throw;
      const auto delay = std::chrono::milliseconds(base_delay_ms) * (1 << attempt);
      std::this_thread::sleep_for(delay);
    }
  }
}

}  // namespace rgvlm::annot
