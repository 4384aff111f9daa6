#include "rgvlm/baselines/embedder.hpp"

#include <random>

#include "rgvlm/common/rng.hpp"

namespace rgvlm::baselines {

namespace {

constexpr float kNoiseScale = 0.05f;

// Fill dims [kProgressDims, kDim) with unit Gaussians keyed on the content
// hash, then scale down; keeps embeddings distinct without drowning the
// progress signal.
void add_noise(Eigen::VectorXf& v, std::uint64_t key) {
  auto rng = make_rng(key);
  std::normal_distribution<float> g(0.0f, 1.0f);
  for (int i = StubEmbedder::kProgressDims; i < StubEmbedder::kDim; ++i)
    v[i] = kNoiseScale * g(rng);
}

}  // namespace

Eigen::VectorXf StubEmbedder::embed_image(const env::Image& image) {
  // progress pips: magenta pixels along the bottom row
  int pips = 0;
  for (int x = 0; x < image.width; ++x) {
    const std::uint8_t* p = image.px(x, image.height - 1);
    if (p[0] == 255 && p[1] == 0 && p[2] == 255) ++pips;
  }

  Eigen::VectorXf v = Eigen::VectorXf::Zero(kDim);
  const int k = std::min(pips, kProgressDims);
  for (int i = 0; i < k; ++i) v[i] = 1.0f;

  const std::uint64_t key = fnv1a(std::string_view(
      reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size()));
  add_noise(v, key);
  return v.normalized();
}

Eigen::VectorXf StubEmbedder::embed_text(const std::string& text) {
  Eigen::VectorXf v = Eigen::VectorXf::Zero(kDim);
  for (int i = 0; i < kProgressDims; ++i) v[i] = 1.0f;  // "fully done" anchor
  add_noise(v, fnv1a(text));
  return v.normalized();
}

}  // namespace rgvlm::baselines
