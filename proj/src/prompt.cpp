// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cimc/llm.hpp"
#include "cimc/plantuml.hpp"
#include "json.hpp"

namespace cimc {

namespace {

constexpr std::string_view kTaskPreamble =
    "You are given a meta-model, which defines ONLY the allowed classes, attributes, and associations. "
    "Additionally, you are provided with a scenario description, which explicitly specifies the valid instances "
    "and relationships. Your task is to generate a Conceptual Instance Model by structuring the information from "
    "the scenario description strictly according to the provided meta-model and Json template.";

constexpr std::string_view kStrictRules =
    "### STRICT RULES\n"
    "- DO NOT infer missing details.\n"
    "- ONLY include what is explicitly provided in the scenario.\n"
    "- ONLY include what is explicitly provided in the meta model.\n"
    "- DO NOT create objects from abstract class.\n";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append_block(std::string& out, std::string_view metamodel, std::string_view spec) {
  out += "Meta-model information:\n";
  out += metamodel;
  out += "\n\nScenario description:\n";
  out += spec;
  out += "\n\nGenerated Conceptual Instance Model:\n";
}

}  // namespace

PromptBundle build_prompt(std::string_view metamodelPuml, std::string_view spec,
                          std::span<const FewShotExample> examples, std::string_view cimTemplate) {
  PromptBundle b;
  auto& sys = b.systemText;
  sys += kTaskPreamble;
  sys += "\n\n";
  sys += kStrictRules;
  sys += "\n### Output Json Format - Conceptual Instance Model (STRICT TEMPLATE)\n";
  sys += cimTemplate;
  sys += "\n";
  if (!examples.empty()) {
    sys += "\n### Few-shot Examples\n";
    sys += "You are provided with the following few-shot examples to help you understand the task.\n";
    for (const auto& ex : examples) {
      sys += "\n#### Example\n";
      append_block(sys, ex.metamodelText, ex.specText);
      sys += ex.cimText;
      if (!ex.cimText.empty() && ex.cimText.back() != '\n') sys += '\n';
    }
  }
  b.userText = "#### Please generate the Conceptual Instance Model follow the template\n";
  append_block(b.userText, metamodelPuml, spec);
  return b;
}

std::vector<FewShotExample> load_examples(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("examples directory not found: " + dir.string());
  std::vector<std::filesystem::path> folders;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_directory()) folders.push_back(e.path());
  std::sort(folders.begin(), folders.end());
  std::vector<FewShotExample> out;
  for (const auto& f : folders) {
    FewShotExample ex;
    if (std::filesystem::exists(f / "metamodel.puml")) {
      ex.metamodelText = read_file(f / "metamodel.puml");
    } else {
      auto m = parse_ecore(read_file(f / "metamodel.ecore"));
      ex.metamodelText = render_plantuml(m).text;
    }
    ex.specText = read_file(f / "spec.txt");
    ex.cimText = read_file(f / "cim.json");
    auto parsed = parse_cim(ex.cimText);
    if (has_errors(parsed.diagnostics))
      throw std::runtime_error("example " + f.filename().string() + ": cim.json has error diagnostics");
    out.push_back(std::move(ex));
  }
  return out;
}

LlmConfig load_llm_config(std::string_view jsonText) {
  auto j = nlohmann::json::parse(jsonText);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (j.contains("apiKey") || j.contains("api_key"))
    throw std::invalid_argument("config must not contain an API key; name an environment variable in apiKeyEnvVar");
  LlmConfig c;
  c.provider = j.value("provider", c.provider);
  c.endpointBaseUrl = j.value("endpointBaseUrl", c.endpointBaseUrl);
  c.modelName = j.value("modelName", c.modelName);
  c.temperature = j.value("temperature", c.temperature);
  c.omitTemperature = j.value("omitTemperature", c.omitTemperature);
  c.maxOutputTokens = j.value("maxOutputTokens", c.maxOutputTokens);
  c.apiKeyEnvVar = j.value("apiKeyEnvVar", c.apiKeyEnvVar);
  c.maxRetries = j.value("maxRetries", c.maxRetries);
  c.timeoutSeconds = j.value("timeoutSeconds", c.timeoutSeconds);
  c.retryOnCompileErrors = j.value("retryOnCompileErrors", c.retryOnCompileErrors);
  if (j.contains("mockResponses")) c.mockResponses = j["mockResponses"].get<std::vector<std::string>>();
  if (c.provider != "openai" && c.provider != "mock") throw std::invalid_argument("unknown provider '" + c.provider + "'");
  if (c.temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  if (c.maxOutputTokens <= 0) throw std::invalid_argument("maxOutputTokens must be positive");
  if (c.maxRetries < 0) throw std::invalid_argument("maxRetries must be >= 0");
  if (c.timeoutSeconds <= 0) throw std::invalid_argument("timeoutSeconds must be positive");
  return c;
}

}  // namespace cimc
