#include "rgvlm/annot/http_backend.hpp"

#include <httplib.h>

#include <cstdlib>
#include <sstream>

#include "rgvlm/common/base64.hpp"
#include "rgvlm/common/errors.hpp"

namespace rgvlm::annot {

HttpBackend::HttpBackend(HttpBackendConfig config) : cfg_(std::move(config)) {
  if (cfg_.base_url.empty()) throw ValidationError("http backend: base_url is required");
  if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
}

std::string HttpBackend::fingerprint() const {
  std::ostringstream os;
  os << "http:model=" << cfg_.model << ":temperature=" << cfg_.temperature;
  return os.str();
}

std::string HttpBackend::complete(const ChatRequest& request, const WindowContext&) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& msg : request.messages) {
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"kind", "text"}, {"text", msg.text}});
    for (const auto& png : msg.images)
      content.push_back({{"kind", "image"},
                         {"media_type", "image/png"},
                         {"data_base64", base64_encode(png)}});
    messages.push_back({{"role", msg.role}, {"content", content}});
  }
  const nlohmann::json body = {
      {"model", cfg_.model}, {"temperature", cfg_.temperature}, {"messages", messages}};

  httplib::Client client(cfg_.base_url);
  client.set_connection_timeout(cfg_.timeout_seconds);
  client.set_read_timeout(cfg_.timeout_seconds);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post("/chat", headers, body.dump(), "application/json");
  if (!res)
    throw BackendError("http backend: no response from " + cfg_.base_url + " (" +
                       httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw BackendError("http backend: " + cfg_.base_url + "/chat returned status " +
                       std::to_string(res->status));

  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("content") || !reply["content"].is_string())
    throw BackendError("http backend: response is not {\"content\": string}");
  return reply["content"].get<std::string>();
}

}  // namespace rgvlm::annot
