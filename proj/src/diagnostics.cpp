// SPDX-License-Identifier: Apache-2.0

#include "cimc/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json_util.hpp"

namespace cimc {

namespace {

constexpr std::array<std::pair<DiagCode, std::string_view>, 28> kCodeNames{{
    {DiagCode::UnsupportedConstruct, "UnsupportedConstruct"},
    {DiagCode::UnknownDataType, "UnknownDataType"},
    {DiagCode::UnknownKey, "UnknownKey"},
    {DiagCode::MissingTypeField, "MissingTypeField"},
    {DiagCode::MalformedObject, "MalformedObject"},
    {DiagCode::MalformedAttribute, "MalformedAttribute"},
    {DiagCode::MalformedLink, "MalformedLink"},
    {DiagCode::AssociationsAlias, "AssociationsAlias"},
    {DiagCode::NullValue, "NullValue"},
    {DiagCode::DuplicateInstanceId, "DuplicateInstanceId"},
    {DiagCode::DanglingTargetId, "DanglingTargetId"},
    {DiagCode::SelfComposition, "SelfComposition"},
    {DiagCode::UnknownClass, "UnknownClass"},
    {DiagCode::AbstractClass, "AbstractClass"},
    {DiagCode::OwnerMissing, "OwnerMissing"},
    {DiagCode::UnknownAttribute, "UnknownAttribute"},
    {DiagCode::ValueCoercionFailed, "ValueCoercionFailed"},
    {DiagCode::TypeMismatchDeclared, "TypeMismatchDeclared"},
    {DiagCode::UpperBoundExceeded, "UpperBoundExceeded"},
    {DiagCode::UnknownReference, "UnknownReference"},
    {DiagCode::KindMismatch, "KindMismatch"},
    {DiagCode::DanglingTarget, "DanglingTarget"},
    {DiagCode::TypeNonConforming, "TypeNonConforming"},
    {DiagCode::AssociatedClassMismatch, "AssociatedClassMismatch"},
    {DiagCode::DuplicateLink, "DuplicateLink"},
    {DiagCode::SecondContainer, "SecondContainer"},
    {DiagCode::ContainmentCycle, "ContainmentCycle"},
    {DiagCode::LowerBoundViolated, "LowerBoundViolated"},
}};

Diagnostic make(Severity s, DiagCode code, std::string detail, std::optional<std::string> id,
                std::optional<std::string> feature) {
  Diagnostic d;
  d.severity = s;
  d.code = code;
  d.detail = std::move(detail);
  d.instanceId = std::move(id);
  d.featureName = std::move(feature);
  return d;
}

}  // namespace

std::string_view to_string(DiagCode code) noexcept {
  for (const auto& [c, name] : kCodeNames)
    if (c == code) return name;
  return "Unknown";
}

std::string_view to_string(Severity severity) noexcept {
  return severity == Severity::Error ? "error" : "warning";
}

std::optional<DiagCode> diag_code_from_string(std::string_view name) noexcept {
  for (const auto& [c, n] : kCodeNames)
    if (n == name) return c;
  return std::nullopt;
}

Diagnostic warning(DiagCode code, std::string detail, std::optional<std::string> instanceId,
                   std::optional<std::string> featureName) {
  return make(Severity::Warning, code, std::move(detail), std::move(instanceId),
              std::move(featureName));
}

Diagnostic error(DiagCode code, std::string detail, std::optional<std::string> instanceId,
                 std::optional<std::string> featureName) {
  return make(Severity::Error, code, std::move(detail), std::move(instanceId),
              std::move(featureName));
}

bool has_errors(std::span<const Diagnostic> diags) noexcept {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::size_t error_count(std::span<const Diagnostic> diags) noexcept {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); }));
}

std::size_t count_code(std::span<const Diagnostic> diags, DiagCode code) noexcept {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [code](const Diagnostic& d) { return d.code == code; }));
}

std::string to_jsonl(std::span<const Diagnostic> diags) {
  std::string out;
  for (const auto& d : diags) {
    out += detail::diagnostic_json(d).dump();
    out += '\n';
  }
  return out;
}

std::vector<Diagnostic> from_jsonl(std::string_view text) {
  std::vector<Diagnostic> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    Diagnostic d;
    d.severity = j.at("severity").get<std::string>() == "error" ? Severity::Error : Severity::Warning;
    auto code = diag_code_from_string(j.at("code").get<std::string>());
    if (!code) throw std::runtime_error("unknown diagnostic code in log: " + j.at("code").dump());
    d.code = *code;
    if (!j.at("instanceId").is_null()) d.instanceId = j["instanceId"].get<std::string>();
    if (!j.at("featureName").is_null()) d.featureName = j["featureName"].get<std::string>();
    d.detail = j.at("detail").get<std::string>();
    out.push_back(std::move(d));
  }
  return out;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string s{to_string(d.severity)};
  s += '[';
  s += to_string(d.code);
  s += ']';
  if (d.instanceId) {
    s += ' ';
    s += *d.instanceId;
    if (d.featureName) {
      s += '.';
      s += *d.featureName;
    }
  }
  s += ": ";
  s += d.detail;
  return s;
}

}  // namespace cimc
