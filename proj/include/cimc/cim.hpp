// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cimc/diagnostics.hpp"

namespace cimc {

struct AttributeSpec {
  std::string dataType;  // as written by the model, may be empty
  std::string attributeName;
  std::string value;  // canonical string form of the JSON scalar

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

struct LinkSpec {
  std::string associationName;
  std::string associatedClassName;
  std::string targetInstanceID;

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

struct ObjectSpec {
  std::string type;
  std::vector<AttributeSpec> attributes;
  std::vector<LinkSpec> compositions;
  std::vector<LinkSpec> references;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

/// Conceptual instance model: instance ids mapped to object specs, in source
/// order.
class ConceptualInstanceModel {
 public:
  using Entry = std::pair<std::string, ObjectSpec>;

  /// Returns false (and leaves the model unchanged) when the id exists.
  bool insert(std::string id, ObjectSpec spec);
  void insert_or_assign(std::string id, ObjectSpec spec);

  const ObjectSpec* find(std::string_view id) const noexcept;
  bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const ConceptualInstanceModel&, const ConceptualInstanceModel&) = default;

 private:
  std::vector<Entry> entries_;
};

enum class CimErrc { InvalidJson, NotAJsonObject, NoJsonFound };

std::string_view to_string(CimErrc code) noexcept;

class CimError : public std::runtime_error {
 public:
  CimError(CimErrc code, const std::string& what);
  CimErrc code() const noexcept { return code_; }

 private:
  CimErrc code_;
};

struct CimParseResult {
  ConceptualInstanceModel model;
  std::vector<Diagnostic> diagnostics;
  std::size_t sourceObjects = 0;
  std::size_t droppedObjects = 0;
};

/// First balanced JSON object in an LLM reply, after Markdown fence lines are
/// removed. Throws CimError(NoJsonFound) when no candidate parses.
std::string extract_json_payload(std::string_view llmOutput);

/// Throws CimError for invalid JSON or a non-object top level. Problems
/// inside individual objects are reported as diagnostics instead.
CimParseResult parse_cim(std::string_view jsonText);

/// Metamodel-independent checks: dangling instance ids and self-composition.
std::vector<Diagnostic> validate_structure(const ConceptualInstanceModel& cim);

/// Deterministic pretty-printed JSON in the template layout.
std::string write_cim(const ConceptualInstanceModel& cim);

/// The JSON template shown to the model in the system prompt.
std::string_view cim_template() noexcept;

}  // namespace cimc
