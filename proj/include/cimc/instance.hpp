// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cimc/ecore.hpp"

namespace cimc {

struct EnumLiteral {
  std::string literal;
  friend bool operator==(const EnumLiteral&, const EnumLiteral&) = default;
};

/// Typed attribute value after coercion against the metamodel.
using Value = std::variant<std::int64_t, double, bool, std::string, EnumLiteral>;

/// Canonical text: integers in plain decimal, floats in shortest round-trip
/// form, booleans lowercase, enum literals and strings verbatim.
std::string render_value(const Value& v);

/// Parses raw text into the given data type; nullopt when it does not fit.
std::optional<Value> coerce_value(std::string_view raw, const DataType& type, const MetaModel& m);

struct ContainerLink {
  std::string parentId;
  std::string feature;
  friend bool operator==(const ContainerLink&, const ContainerLink&) = default;
};

struct InstanceObject {
  std::string id;
  std::string eClass;
  std::size_t classIndex = 0;  // into MetaModel::classes()
  std::map<std::string, std::vector<Value>> attrValues;
  // Containment and cross references alike, in link order.
  std::map<std::string, std::vector<std::string>> refTargets;
  std::optional<ContainerLink> container;

  const std::vector<Value>* values(std::string_view feature) const;
  const std::vector<std::string>* targets(std::string_view feature) const;
};

class InstanceModel {
 public:
  /// Returns nullptr when the id is already taken.
  InstanceObject* add(InstanceObject obj);

  InstanceObject* find(std::string_view id) noexcept;
  const InstanceObject* find(std::string_view id) const noexcept;

  std::span<const InstanceObject> objects() const noexcept { return objects_; }
  std::span<InstanceObject> objects() noexcept { return objects_; }
  std::size_t size() const noexcept { return objects_.size(); }
  bool empty() const noexcept { return objects_.empty(); }

  const std::vector<std::string>& roots() const noexcept { return roots_; }
  /// Roots are exactly the objects without container, in object order.
  void recompute_roots();

 private:
  std::vector<InstanceObject> objects_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> roots_;
};

/// Object ids in document order: pre-order over the containment forest,
/// roots first-to-last, children by containment feature then link order.
std::vector<std::string> document_order(const InstanceModel& model, const MetaModel& m);

}  // namespace cimc
