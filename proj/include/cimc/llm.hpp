// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cimc/cim.hpp"
#include "cimc/compiler.hpp"
#include "cimc/ecore.hpp"

namespace cimc {

struct FewShotExample {
  std::string metamodelText;  // PlantUML
  std::string specText;
  std::string cimText;
};

/// Loads examples from `dir/<name>/` folders (sorted by name), each holding
/// `metamodel.ecore` or `metamodel.puml`, `spec.txt` and `cim.json`. Every
/// example CIM must parse without error diagnostics.
std::vector<FewShotExample> load_examples(const std::filesystem::path& dir);

struct LlmConfig {
  std::string provider = "openai";  // "openai" (any chat-completions endpoint) or "mock"
  std::string endpointBaseUrl = "http://localhost:11434/v1";
  std::string modelName;
  double temperature = 0.0;
  bool omitTemperature = false;
  int maxOutputTokens = 4096;
  std::string apiKeyEnvVar;  // empty: no Authorization header
  int maxRetries = 2;
  double timeoutSeconds = 120.0;
  bool retryOnCompileErrors = false;
  std::vector<std::string> mockResponses;  // provider "mock" only
};

/// Reads the JSON config. Rejects inline secrets and out-of-range values.
LlmConfig load_llm_config(std::string_view jsonText);

struct PromptBundle {
  std::string systemText;
  std::string userText;
};

/// The few-shot system/user prompt pair. `cimTemplate` fills the template
/// slot; examples are embedded in order.
PromptBundle build_prompt(std::string_view metamodelPuml, std::string_view spec,
                          std::span<const FewShotExample> examples, std::string_view cimTemplate = cim_template());

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

enum class ChatErrc { TransportError, HttpStatusError, EmptyCompletion, Timeout, MissingApiKey };

std::string_view to_string(ChatErrc code) noexcept;

class ChatError : public std::runtime_error {
 public:
  ChatError(ChatErrc code, const std::string& what, int httpStatus = 0);
  ChatErrc code() const noexcept { return code_; }
  int http_status() const noexcept { return status_; }

 private:
  ChatErrc code_;
  int status_;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Assistant text for the conversation. Throws ChatError.
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Chat-completions over HTTP(S). Each call opens its own connection, so one
/// backend may serve concurrent requests.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(LlmConfig config);
  std::string complete(const std::vector<ChatMessage>& messages) override;

 private:
  LlmConfig config_;
};

/// Replays canned replies in order; the last one repeats once exhausted.
class ScriptedChatBackend final : public ChatBackend {
 public:
  explicit ScriptedChatBackend(std::vector<std::string> replies);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::size_t calls() const noexcept { return calls_; }
  const std::vector<std::vector<ChatMessage>>& conversations() const noexcept { return seen_; }

 private:
  std::vector<std::string> replies_;
  std::size_t calls_ = 0;
  std::vector<std::vector<ChatMessage>> seen_;
};

/// Request body for a chat-completions call.
std::string chat_request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages);
/// Assistant content from a chat-completions response body.
std::string parse_chat_response(std::string_view body);

std::string chat_complete(const LlmConfig& config, const PromptBundle& bundle);

struct GenerationTrace {
  PromptBundle promptBundle;
  std::vector<std::string> rawResponses;
  std::vector<std::string> retryReasons;
  int attempts = 0;
  std::optional<ConceptualInstanceModel> finalCim;
  std::vector<Diagnostic> cimDiagnostics;
  std::optional<CompileReport> report;
  std::optional<std::string> failure;  // set iff generation failed

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Corrective user turn appended after an unusable reply.
std::string retry_message(std::string_view errorCode);

/// Renders the metamodel, prompts, extracts and parses the CIM (retrying up
/// to config.maxRetries times), then compiles it. Never throws for model or
/// transport failures; those end up in trace.failure.
GenerationTrace generate_instance_model(const MetaModel& m, std::string_view spec,
                                        std::span<const FewShotExample> examples, const LlmConfig& config,
                                        ChatBackend& backend);

/// Trace as JSON (prompts, raw responses, attempts, diagnostics).
std::string trace_to_json(const GenerationTrace& trace);

}  // namespace cimc
