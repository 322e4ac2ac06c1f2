// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdlib>
#include <regex>

#include "cimc/llm.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cimc {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string basePath;
};

Endpoint split_url(const std::string& url) {
  static const std::regex kUrl{R"(^(https?://[^/]+)(/.*)?$)"};
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) throw ChatError(ChatErrc::TransportError, "malformed endpoint URL '" + url + "'");
  std::string base = m[2].matched ? m[2].str() : std::string{};
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {m[1].str(), base};
}

}  // namespace

std::string_view to_string(ChatErrc code) noexcept {
  switch (code) {
    case ChatErrc::TransportError: return "TransportError";
    case ChatErrc::HttpStatusError: return "HttpStatusError";
    case ChatErrc::EmptyCompletion: return "EmptyCompletion";
    case ChatErrc::Timeout: return "Timeout";
    case ChatErrc::MissingApiKey: return "MissingApiKey";
  }
  return "Unknown";
}

ChatError::ChatError(ChatErrc code, const std::string& what, int httpStatus)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), status_(httpStatus) {}

std::string chat_request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages) {
  nlohmann::ordered_json j;
  j["model"] = config.modelName;
  j["messages"] = nlohmann::ordered_json::array();
  for (const auto& msg : messages) j["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
  if (!config.omitTemperature) j["temperature"] = config.temperature;
  j["max_tokens"] = config.maxOutputTokens;
  j["stream"] = false;
  return j.dump();
}

std::string parse_chat_response(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw ChatError(ChatErrc::TransportError, "response body is not JSON");
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty())
    throw ChatError(ChatErrc::EmptyCompletion, "response has no choices");
  const auto& first = (*choices)[0];
  std::string content;
  if (first.contains("message") && first["message"].contains("content") && first["message"]["content"].is_string())
    content = first["message"]["content"].get<std::string>();
  if (content.empty()) throw ChatError(ChatErrc::EmptyCompletion, "first choice has no message content");
  return content;
}

HttpChatBackend::HttpChatBackend(LlmConfig config) : config_(std::move(config)) {}

std::string HttpChatBackend::complete(const std::vector<ChatMessage>& messages) {
  const Endpoint ep = split_url(config_.endpointBaseUrl);
  httplib::Headers headers;
  if (!config_.apiKeyEnvVar.empty()) {
    const char* key = std::getenv(config_.apiKeyEnvVar.c_str());
    if (key == nullptr || *key == '\0')
      throw ChatError(ChatErrc::MissingApiKey, "environment variable " + config_.apiKeyEnvVar + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Client client(ep.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeoutSeconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(ep.basePath + "/chat/completions", headers, chat_request_body(config_, messages),
                         "application/json");
  if (!res) {
    const auto err = res.error();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= config_.timeoutSeconds))
      throw ChatError(ChatErrc::Timeout, "no response within " + std::to_string(config_.timeoutSeconds) + " s");
    throw ChatError(ChatErrc::TransportError, httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300)
    throw ChatError(ChatErrc::HttpStatusError,
                    "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200), res->status);
  return parse_chat_response(res->body);
}

ScriptedChatBackend::ScriptedChatBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}

std::string ScriptedChatBackend::complete(const std::vector<ChatMessage>& messages) {
  seen_.push_back(messages);
  if (replies_.empty()) throw ChatError(ChatErrc::EmptyCompletion, "scripted backend has no replies");
  std::size_t i = std::min(calls_, replies_.size() - 1);
  ++calls_;
  if (replies_[i].empty()) throw ChatError(ChatErrc::EmptyCompletion, "scripted reply is empty");
  return replies_[i];
}

std::string chat_complete(const LlmConfig& config, const PromptBundle& bundle) {
  HttpChatBackend backend(config);
  return backend.complete({{"system", bundle.systemText}, {"user", bundle.userText}});
}

}  // namespace cimc
