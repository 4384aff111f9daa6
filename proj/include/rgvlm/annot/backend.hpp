#pragma once

#include <string>

#include "rgvlm/annot/prompts.hpp"
#include "rgvlm/annot/windows.hpp"
#include "rgvlm/data/trajectory.hpp"
#include "rgvlm/env/types.hpp"

namespace rgvlm::annot {

// Which trajectory slice a request is about. Remote backends only look at
// the request; the oracle backend uses the symbolic view to compute its
// answers directly.
struct WindowContext {
  const data::Trajectory* trajectory = nullptr;
  const env::TaskSpec* task = nullptr;
  Window window;
};

class AnnotatorBackend {
 public:
  virtual ~AnnotatorBackend() = default;

  // One model turn: the conversation so far, answer text back. Throws
  // BackendError on failure (the caller retries).
  virtual std::string complete(const ChatRequest& request, const WindowContext& ctx) = 0;

  // Stable identity string mixed into cache keys, so cached answers are
  // never reused across models or settings.
  virtual std::string fingerprint() const = 0;
};

// complete() with exponential backoff; rethrows the last BackendError after
// max_retries extra attempts.
std::string query_backend(AnnotatorBackend& backend, const ChatRequest& request,
                          const WindowContext& ctx, int max_retries, int base_delay_ms);

}  // namespace rgvlm::annot
