#pragma once

#include <json.hpp>

#include <string>

#include "rgvlm/annot/backend.hpp"

namespace rgvlm::annot {

struct HttpBackendConfig {
  std::string base_url;  // e.g. "http://localhost:8808"
  std::string model = "default";
  double temperature = 0.0;
  std::string api_key_env = "RGVLM_API_KEY";  // bearer token, optional
  int timeout_seconds = 120;
};

inline void to_json(nlohmann::json& j, const HttpBackendConfig& c) {
  j = nlohmann::json{{"base_url", c.base_url},
                     {"model", c.model},
                     {"temperature", c.temperature},
                     {"api_key_env", c.api_key_env},
                     {"timeout_seconds", c.timeout_seconds}};
}

inline void from_json(const nlohmann::json& j, HttpBackendConfig& c) {
  c = HttpBackendConfig{};
  if (j.contains("base_url")) j.at("base_url").get_to(c.base_url);
  if (j.contains("model")) j.at("model").get_to(c.model);
  if (j.contains("temperature")) j.at("temperature").get_to(c.temperature);
  if (j.contains("api_key_env")) j.at("api_key_env").get_to(c.api_key_env);
  if (j.contains("timeout_seconds")) j.at("timeout_seconds").get_to(c.timeout_seconds);
}

// Talks to a chat endpoint at POST {base_url}/chat. Request body:
//   {"model": ..., "temperature": ...,
//    "messages": [{"role": "user"|"assistant",
//                  "content": [{"kind": "text", "text": ...},
//                              {"kind": "image", "media_type": "image/png",
//                               "data_base64": ...}]}]}
// Response body: {"content": "..."}. Anything but HTTP 200 with that shape
// becomes a BackendError.
class HttpBackend : public AnnotatorBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  std::string complete(const ChatRequest& request, const WindowContext& ctx) override;
  std::string fingerprint() const override;

 private:
  HttpBackendConfig cfg_;
  std::string api_key_;
};

}  // namespace rgvlm::annot
