// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cimc {

enum class Severity { Warning, Error };

/// Closed set of diagnostic codes produced anywhere in the pipeline.
enum class DiagCode {
  // metamodel loading
  UnsupportedConstruct,
  UnknownDataType,
  // conceptual instance model parsing / structure
  UnknownKey,
  MissingTypeField,
  MalformedObject,
  MalformedAttribute,
  MalformedLink,
  AssociationsAlias,
  NullValue,
  DuplicateInstanceId,
  DanglingTargetId,
  SelfComposition,
  // instance compiler
  UnknownClass,
  AbstractClass,
  OwnerMissing,
  UnknownAttribute,
  ValueCoercionFailed,
  TypeMismatchDeclared,
  UpperBoundExceeded,
  UnknownReference,
  KindMismatch,
  DanglingTarget,
  TypeNonConforming,
  AssociatedClassMismatch,
  DuplicateLink,
  SecondContainer,
  ContainmentCycle,
  LowerBoundViolated,
};

std::string_view to_string(DiagCode code) noexcept;
std::string_view to_string(Severity severity) noexcept;
std::optional<DiagCode> diag_code_from_string(std::string_view name) noexcept;

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::UnknownKey;
  std::optional<std::string> instanceId;
  std::optional<std::string> featureName;
  std::string detail;
  // Position of the offending entry inside its owner's attribute or link
  // list. Distinguishes repeated rejections of the same feature.
  std::optional<std::size_t> elementIndex;

  bool is_error() const noexcept { return severity == Severity::Error; }
};

Diagnostic warning(DiagCode code, std::string detail,
                   std::optional<std::string> instanceId = std::nullopt,
                   std::optional<std::string> featureName = std::nullopt);
Diagnostic error(DiagCode code, std::string detail,
                 std::optional<std::string> instanceId = std::nullopt,
                 std::optional<std::string> featureName = std::nullopt);

bool has_errors(std::span<const Diagnostic> diags) noexcept;
std::size_t error_count(std::span<const Diagnostic> diags) noexcept;
std::size_t count_code(std::span<const Diagnostic> diags, DiagCode code) noexcept;

/// One JSON object per line: severity, code, instanceId, featureName, detail.
std::string to_jsonl(std::span<const Diagnostic> diags);
std::vector<Diagnostic> from_jsonl(std::string_view text);

/// Single-line human rendering, e.g. "error[UnknownClass] cpu1: ...".
std::string format_diagnostic(const Diagnostic& d);

}  // namespace cimc
