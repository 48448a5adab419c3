#pragma once

// Messages-API adapter. Request/response translation is kept in free
// functions so it can be exercised without a network.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "anthroreg/harness.hpp"

namespace anthroreg {

inline constexpr std::string_view kApiKeyEnv = "ANTHROPIC_API_KEY";
inline constexpr std::string_view kAnthropicVersion = "2023-06-01";

/// Request body. `system` is omitted entirely when absent; temperature is
/// always sent explicitly.
inline nlohmann::json build_messages_body(const ChatRequest& req) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : req.messages) {
    msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  nlohmann::json body = {{"model", req.model},
                         {"max_tokens", req.max_tokens},
                         {"temperature", req.temperature},
                         {"messages", msgs}};
  if (req.system) body["system"] = *req.system;
  return body;
}

inline bool retryable_status(int status) {
  return status == 408 || status == 409 || status == 429 || (status >= 500 && status <= 599);
}

/// Translates an HTTP response into a ChatResponse or a TransportError.
inline ChatResponse parse_messages_response(int status, std::string_view body,
                                            std::optional<std::string> retry_after = std::nullopt) {
  if (status != 200) {
    std::optional<std::chrono::milliseconds> wait;
    if (retry_after) {
      try {
        wait = std::chrono::milliseconds(
            static_cast<long long>(std::stod(*retry_after) * 1000.0));
      } catch (const std::exception&) {
      }
    }
    std::string msg = "HTTP " + std::to_string(status);
    try {
      const auto j = nlohmann::json::parse(body);
      if (j.contains("error")) msg += ": " + j.at("error").value("message", j.at("error").dump());
    } catch (const nlohmann::json::exception&) {
    }
    throw TransportError(msg, retryable_status(status), wait);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed response body: ") + e.what(), true);
  }
  ChatResponse r;
  r.text.clear();
  if (j.contains("content") && j.at("content").is_array()) {
    for (const auto& block : j.at("content")) {
      if (block.value("type", "") == "text") r.text += block.value("text", "");
    }
  }
  r.stop_reason = j.value("stop_reason", "");
  return r;
}

class AnthropicClient : public ChatClient {
 public:
  explicit AnthropicClient(std::string api_key,
                           std::string base_url = "https://api.anthropic.com",
                           std::chrono::seconds timeout = std::chrono::seconds(600))
      : api_key_(std::move(api_key)), base_url_(std::move(base_url)), timeout_(timeout) {}

  /// Reads the key from ANTHROPIC_API_KEY; throws if unset.
  static AnthropicClient from_env() {
    const char* key = std::getenv(std::string(kApiKeyEnv).c_str());
    if (key == nullptr || *key == '\0') {
      throw std::runtime_error(std::string(kApiKeyEnv) + " is not set");
    }
    return AnthropicClient(key);
  }

  ChatResponse send(const ChatRequest& req) override {
    httplib::Client cli(base_url_);
    cli.set_connection_timeout(std::chrono::seconds(30));
    cli.set_read_timeout(timeout_);
    cli.set_write_timeout(std::chrono::seconds(60));
    const httplib::Headers headers = {{"x-api-key", api_key_},
                                      {"anthropic-version", std::string(kAnthropicVersion)}};
    auto res = cli.Post("/v1/messages", headers, build_messages_body(req).dump(),
                        "application/json");
    if (!res) throw TransportError("transport: " + httplib::to_string(res.error()), true);
    std::optional<std::string> retry_after;
    if (res->has_header("retry-after")) retry_after = res->get_header_value("retry-after");
    return parse_messages_response(res->status, res->body, retry_after);
  }

 private:
  std::string api_key_;
  std::string base_url_;
  std::chrono::seconds timeout_;
};

}  // namespace anthroreg
