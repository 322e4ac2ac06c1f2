// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cimc/cim.hpp"
#include "cimc/diagnostics.hpp"
#include "cimc/ecore.hpp"
#include "cimc/instance.hpp"
#include "cimc/ratio.hpp"

namespace cimc {

struct ElementCount {
  std::size_t accepted = 0;
  std::size_t attempted = 0;

  Ratio ratio() const noexcept { return {static_cast<std::int64_t>(accepted), static_cast<std::int64_t>(attempted)}; }
  ElementCount& operator+=(const ElementCount& o) noexcept {
    accepted += o.accepted;
    attempted += o.attempted;
    return *this;
  }
};

struct ElementCounts {
  ElementCount objects;
  ElementCount attributes;
  ElementCount associations;

  ElementCount total() const noexcept {
    ElementCount t = objects;
    t += attributes;
    t += associations;
    return t;
  }
};

struct CompileReport {
  InstanceModel model;
  std::vector<Diagnostic> diagnostics;
  ElementCounts elementCounts;

  /// Grammatical accuracy: accepted over attempted elements, 1 when nothing
  /// was attempted.
  Ratio ga() const noexcept { return elementCounts.total().ratio(); }
  bool has_errors() const noexcept { return cimc::has_errors(diagnostics); }
};

enum class LinkKind { Composition, Reference };

struct Instantiation {
  InstanceModel objects;
  std::vector<Diagnostic> diagnostics;
};

/// First phase: one object per CIM entry whose type is a concrete class.
Instantiation instantiate_objects(const MetaModel& m, const ConceptualInstanceModel& cim);

/// Second phase, per attribute entry. `index` is the entry's position in
/// its owner's attribute list.
bool set_attribute(InstanceObject& owner, const AttributeSpec& spec, const MetaModel& m,
                   std::vector<Diagnostic>& diags, std::size_t index = 0);

/// Second phase, per link entry. The owner must be in `objects`.
bool set_association(InstanceModel& objects, std::string_view ownerId, const LinkSpec& spec, LinkKind kind,
                     const MetaModel& m, std::vector<Diagnostic>& diags, std::size_t index = 0);

/// Both phases over the whole CIM, then root computation and lower-bound
/// warnings. Always produces a report.
CompileReport compile(const MetaModel& m, const ConceptualInstanceModel& cim);

}  // namespace cimc
