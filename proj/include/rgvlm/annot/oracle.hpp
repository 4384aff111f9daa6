#pragma once

#include <cstdint>

#include "rgvlm/annot/backend.hpp"

namespace rgvlm::annot {

// Hermetic stand-in for a vision-language model. It answers from the
// symbolic trajectory: each action's score is the environment's shaped
// reward scaled to [0, scale_max], rounded, optionally jittered with
// Gaussian noise (deterministic per trajectory and window, independent of
// query order). With noise_std = 0 the scores are exact, which is what the
// pipeline-equivalence checks rely on.
class OracleBackend : public AnnotatorBackend {
 public:
  OracleBackend(int scale_max, double noise_std, std::uint64_t seed)
      : scale_max_(scale_max), noise_std_(noise_std), seed_(seed) {}

  std::string complete(const ChatRequest& request, const WindowContext& ctx) override;
  std::string fingerprint() const override;

 private:
  int scale_max_;
  double noise_std_;
  std::uint64_t seed_;
};

}  // namespace rgvlm::annot
