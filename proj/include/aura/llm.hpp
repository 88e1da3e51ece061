#pragma once

// Chat-completion client used by the LLM-backed classifier, question
// generator, and simulated users. Speaks the OpenAI-compatible
// /v1/chat/completions wire format.

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "aura/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace aura {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  bool json_response = false;  // ask for a JSON object reply
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Returns the assistant message content; throws LlmError on failure.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct LlmConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  std::string api_key_env = "AURA_LLM_API_KEY";
  double timeout_seconds = 30.0;
  int retries = 1;
};

inline nlohmann::json to_wire(const LlmConfig& cfg, const ChatRequest& req) {
  nlohmann::json body;
  body["model"] = cfg.model;
  body["temperature"] = req.temperature;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : req.messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  if (req.json_response) body["response_format"] = {{"type", "json_object"}};
  return body;
}

/// Extracts choices[0].message.content from a completion response body.
inline std::string parse_completion(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw LlmError("completion response is not JSON");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LlmError(std::string("unexpected completion shape: ") + e.what());
  }
}

class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(LlmConfig cfg) : cfg_(std::move(cfg)) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
  }

  std::string complete(const ChatRequest& request) override {
    const std::string body = to_wire(cfg_, request).dump();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
      try {
        return post_once(body);
      } catch (const LlmError& e) {
        last_error = e.what();
      }
    }
    throw LlmError("chat completion failed after " +
                   std::to_string(cfg_.retries + 1) + " attempt(s): " +
                   last_error);
  }

  const LlmConfig& config() const { return cfg_; }

 private:
  std::string post_once(const std::string& body) {
    httplib::Client cli(cfg_.endpoint);
    const auto timeout = std::chrono::duration<double>(cfg_.timeout_seconds);
    cli.set_connection_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_read_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_write_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (!api_key_.empty())
      headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = cli.Post(cfg_.path, headers, body, "application/json");
    if (!res)
      throw LlmError("transport error: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw LlmError("HTTP " + std::to_string(res->status) + ": " +
                     res->body.substr(0, 200));
    return parse_completion(res->body);
  }

  LlmConfig cfg_;
  std::string api_key_;
};

}  // namespace aura
