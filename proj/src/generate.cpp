// SPDX-License-Identifier: Apache-2.0

#include "cimc/llm.hpp"
#include "cimc/plantuml.hpp"
#include "json_util.hpp"

namespace cimc {

std::string retry_message(std::string_view errorCode) {
  std::string s = "Your previous output was not a single valid JSON object conforming to the template. Error: ";
  s += errorCode;
  s += ". Output only the JSON object.";
  return s;
}

GenerationTrace generate_instance_model(const MetaModel& m, std::string_view spec,
                                        std::span<const FewShotExample> examples, const LlmConfig& config,
                                        ChatBackend& backend) {
  GenerationTrace trace;
  trace.promptBundle = build_prompt(render_plantuml(m).text, spec, examples);
  std::vector<ChatMessage> messages{{"system", trace.promptBundle.systemText}, {"user", trace.promptBundle.userText}};

  const int maxAttempts = config.maxRetries + 1;
  while (trace.attempts < maxAttempts) {
    ++trace.attempts;
    std::string reply;
    try {
      reply = backend.complete(messages);
    } catch (const ChatError& e) {
      trace.failure = std::string("GenerationFailed: ") + e.what();
      return trace;
    } catch (const std::exception& e) {
      trace.failure = std::string("GenerationFailed: TransportError: ") + e.what();
      return trace;
    }
    trace.rawResponses.push_back(reply);

    std::string reason;
    try {
      auto parsed = parse_cim(extract_json_payload(reply));
      auto structural = validate_structure(parsed.model);
      parsed.diagnostics.insert(parsed.diagnostics.end(), structural.begin(), structural.end());
      CompileReport report = compile(m, parsed.model);
      const bool compileErrors = report.has_errors();
      trace.finalCim = std::move(parsed.model);
      trace.cimDiagnostics = std::move(parsed.diagnostics);
      trace.report = std::move(report);
      if (!config.retryOnCompileErrors || !compileErrors) return trace;
      reason = "CompileErrors";
    } catch (const CimError& e) {
      reason = std::string(to_string(e.code()));
    }

    trace.retryReasons.push_back(reason);
    if (trace.attempts < maxAttempts) {
      messages.push_back({"assistant", reply});
      messages.push_back({"user", retry_message(reason)});
    }
  }
  // A compile-error retry that ran out keeps its last compiled result.
  if (!trace.report) trace.failure = "GenerationFailed: " + trace.retryReasons.back();
  return trace;
}

std::string trace_to_json(const GenerationTrace& trace) {
  detail::ojson j;
  j["ok"] = trace.ok();
  j["attempts"] = trace.attempts;
  j["failure"] = trace.failure ? detail::ojson(*trace.failure) : detail::ojson(nullptr);
  j["prompt"] = {{"system", trace.promptBundle.systemText}, {"user", trace.promptBundle.userText}};
  j["rawResponses"] = trace.rawResponses;
  j["retryReasons"] = trace.retryReasons;
  j["cim"] = trace.finalCim ? detail::ojson::parse(write_cim(*trace.finalCim)) : detail::ojson(nullptr);
  j["cimDiagnostics"] = detail::diagnostics_json(trace.cimDiagnostics);
  if (trace.report) {
    const auto& c = trace.report->elementCounts;
    auto count = [](const ElementCount& e) { return detail::ojson{{"accepted", e.accepted}, {"attempted", e.attempted}}; };
    j["compile"] = {{"ga", trace.report->ga().str()},
                    {"objects", count(c.objects)},
                    {"attributes", count(c.attributes)},
                    {"associations", count(c.associations)},
                    {"diagnostics", detail::diagnostics_json(trace.report->diagnostics)}};
  } else {
    j["compile"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace cimc
