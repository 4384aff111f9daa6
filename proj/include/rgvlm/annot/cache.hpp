#pragma once

#include <filesystem>

#include "rgvlm/annot/backend.hpp"

namespace rgvlm::annot {

// Content-addressed response cache in front of another backend. The key is
// a SHA-256 over the inner backend's fingerprint and the full request
// (roles, texts, image bytes), so a hit is only possible for a bit-identical
// query to the same model. One JSON file per response; writes go through a
// temp file + rename so concurrent annotators never see partial entries.
class CachedBackend : public AnnotatorBackend {
 public:
  CachedBackend(AnnotatorBackend& inner, std::filesystem::path dir);

  std::string complete(const ChatRequest& request, const WindowContext& ctx) override;
  std::string fingerprint() const override { return inner_.fingerprint(); }

  std::string cache_key(const ChatRequest& request) const;

 private:
  AnnotatorBackend& inner_;
  std::filesystem::path dir_;
};

}  // namespace rgvlm::annot
