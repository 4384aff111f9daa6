#pragma once

#include <Eigen/Dense>
#include <string>

#include "rgvlm/env/render.hpp"

namespace rgvlm::baselines {

// Joint image/text embedding interface for the similarity baselines.
// Embeddings are unit-norm so dot products are cosine similarities.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual Eigen::VectorXf embed_image(const env::Image& image) = 0;
  virtual Eigen::VectorXf embed_text(const std::string& text) = 0;
};

// Deterministic stand-in for a pretrained joint encoder. It reads the
// progress pips out of the rendered frame, so frames showing more completed
// subtasks land closer to the instruction embedding — the qualitative
// property the similarity baselines assume of a real encoder. The remaining
// coordinates are small content-keyed noise, so distinct inputs still get
// distinct embeddings.
class StubEmbedder : public EmbeddingProvider {
 public:
  static constexpr int kDim = 64;
  static constexpr int kProgressDims = 7;

  int dim() const override { return kDim; }
  Eigen::VectorXf embed_image(const env::Image& image) override;
  Eigen::VectorXf embed_text(const std::string& text) override;
};

}  // namespace rgvlm::baselines
