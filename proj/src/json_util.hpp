// SPDX-License-Identifier: Apache-2.0
// Internal JSON helpers shared by the library sources.

#pragma once

#include <span>

#include "cimc/diagnostics.hpp"
#include "json.hpp"

namespace cimc::detail {

using ojson = nlohmann::ordered_json;

inline ojson diagnostic_json(const Diagnostic& d) {
  ojson j;
  j["severity"] = to_string(d.severity);
  j["code"] = to_string(d.code);
  j["instanceId"] = d.instanceId ? ojson(*d.instanceId) : ojson(nullptr);
  j["featureName"] = d.featureName ? ojson(*d.featureName) : ojson(nullptr);
  j["detail"] = d.detail;
  return j;
}

inline ojson diagnostics_json(std::span<const Diagnostic> diags) {
  ojson arr = ojson::array();
  for (const auto& d : diags) arr.push_back(diagnostic_json(d));
  return arr;
}

}  // namespace cimc::detail
