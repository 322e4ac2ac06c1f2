// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cimc/diagnostics.hpp"

namespace cimc {

/// Upper bound value meaning "no limit" (Ecore's -1).
inline constexpr int kUnbounded = -1;

enum class DataKind { String, Int, Float, Boolean, Enum };

struct DataType {
  DataKind kind = DataKind::String;
  std::string enumName;  // set iff kind == Enum

  friend bool operator==(const DataType&, const DataType&) = default;
};

std::string to_string(const DataType& t);

struct EAttribute {
  std::string name;
  DataType type;
  int lowerBound = 0;
  int upperBound = 1;

  bool many() const noexcept { return upperBound == kUnbounded || upperBound > 1; }
};

struct EReference {
  std::string name;
  std::string targetClass;  // simple name as written in the metamodel
  std::size_t targetIndex = 0;
  bool containment = false;
  int lowerBound = 0;
  int upperBound = 1;

  bool many() const noexcept { return upperBound == kUnbounded || upperBound > 1; }
};

struct EClass {
  std::string name;
  std::string qualifiedName;  // "pkg.sub.Name"
  std::size_t index = 0;      // position in MetaModel::classes()
  std::size_t package = 0;
  bool isAbstract = false;
  bool isInterface = false;
  std::vector<std::string> superTypes;
  std::vector<std::size_t> superIndices;
  std::vector<EAttribute> attributes;
  std::vector<EReference> references;
};

struct EEnum {
  std::string name;
  std::string qualifiedName;
  std::size_t package = 0;
  std::vector<std::string> literals;

  bool has_literal(std::string_view lit) const noexcept;
};

enum class ClassifierKind { Class, Enum, DataType };

struct ClassifierHandle {
  ClassifierKind kind;
  std::size_t index;
};

struct EPackage {
  std::string name;
  std::string nsURI;
  std::string nsPrefix;
  std::optional<std::size_t> parent;
  std::vector<ClassifierHandle> classifiers;  // declaration order
  std::vector<std::size_t> subpackages;
};

/// Own plus inherited features, supertypes first.
struct FeatureSet {
  std::vector<const EAttribute*> attributes;
  std::vector<const EReference*> references;

  const EAttribute* attribute(std::string_view name) const noexcept;
  const EReference* reference(std::string_view name) const noexcept;
};

enum class EcoreErrc { MalformedXml, MissingNsURI, UnresolvableTypeRef, InheritanceCycle, DuplicateName, InvalidEnum, InvalidBounds };

std::string_view to_string(EcoreErrc code) noexcept;

class EcoreError : public std::runtime_error {
 public:
  EcoreError(EcoreErrc code, const std::string& what);
  EcoreErrc code() const noexcept { return code_; }

 private:
  EcoreErrc code_;
};

/// Parsed Ecore package tree. Immutable after construction; feature tables
/// hold pointers into the instance, so it is movable but not copyable.
class MetaModel {
 public:
  MetaModel() = default;
  MetaModel(const MetaModel&) = delete;
  MetaModel& operator=(const MetaModel&) = delete;
  MetaModel(MetaModel&&) noexcept = default;
  MetaModel& operator=(MetaModel&&) noexcept = default;

  const EPackage& root_package() const { return packages_.front(); }
  std::span<const EPackage> packages() const noexcept { return packages_; }
  std::span<const EClass> classes() const noexcept { return classes_; }
  std::span<const EEnum> enums() const noexcept { return enums_; }
  const EPackage& package_of(const EClass& c) const { return packages_[c.package]; }

  /// Simple-name lookup over the root package and all subpackages, pre-order.
  const EClass* find_class(std::string_view name) const noexcept;
  const EEnum* find_enum(std::string_view name) const noexcept;
  const EClass* find_class_qualified(std::string_view qualified) const noexcept;
  const EPackage* find_package_by_uri(std::string_view nsURI) const noexcept;

  const FeatureSet& features(const EClass& c) const { return features_[c.index]; }
  /// True when sub equals super or inherits from it transitively.
  bool conforms(const EClass& sub, const EClass& super) const noexcept;

 private:
  friend class EcoreReader;
  std::vector<EPackage> packages_;
  std::vector<EClass> classes_;
  std::vector<EEnum> enums_;
  std::vector<std::string> dataTypes_;  // locally declared EDataTypes, by qualified name
  std::map<std::string, ClassifierHandle, std::less<>> bySimpleName_;
  std::map<std::string, ClassifierHandle, std::less<>> byQualifiedName_;
  std::vector<FeatureSet> features_;
  std::vector<std::vector<bool>> ancestors_;  // ancestors_[sub][super]
};

/// Parses `.ecore` XML. Unsupported constructs are skipped and reported as
/// warnings in `warnings` when given.
MetaModel parse_ecore(std::string_view ecoreXml, std::vector<Diagnostic>* warnings = nullptr);

using ResolvedClassifier = std::variant<std::monostate, const EClass*, const EEnum*>;

/// Exact, case-sensitive lookup; std::monostate means not found.
ResolvedClassifier resolve_classifier(const MetaModel& m, std::string_view name) noexcept;

const FeatureSet& all_features(const EClass& c, const MetaModel& m);

inline bool is_instantiable(const EClass& c) noexcept { return !c.isAbstract && !c.isInterface; }

}  // namespace cimc
