// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cimc/compiler.hpp"
#include "cimc/ecore.hpp"
#include "cimc/instance.hpp"

namespace cimc {

inline constexpr std::string_view kXmiUri = "http://www.omg.org/XMI";
inline constexpr std::string_view kXsiUri = "http://www.w3.org/2001/XMLSchema-instance";

enum class XmiErrc {
  MalformedXml,
  NoNamespace,
  NamespaceMismatch,
  UnknownElementClass,
  UnknownFeature,
  AbstractClass,
  InvalidValue,
  TypeNonConforming,
  MultiplicityViolation,
  UnresolvableFragmentPath,
};

std::string_view to_string(XmiErrc code) noexcept;

class XmiError : public std::runtime_error {
 public:
  XmiError(XmiErrc code, const std::string& what);
  XmiErrc code() const noexcept { return code_; }

 private:
  XmiErrc code_;
};

/// XMI 2.0 text. A sole root becomes the document element; several roots
/// (or none) are wrapped in xmi:XMI. Cross references are fragment paths.
std::string serialize_xmi(const InstanceModel& model, const MetaModel& m);
std::string serialize_xmi(const CompileReport& report, const MetaModel& m);

/// Inverse of serialize_xmi. Object ids of the result are their fragment
/// paths. Throws XmiError when the document does not conform to `m`.
InstanceModel parse_xmi(std::string_view xmiText, const MetaModel& m);

}  // namespace cimc
