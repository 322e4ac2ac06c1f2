// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "cimc/ecore.hpp"

namespace cimc {

struct PlantUmlDoc {
  std::string text;
};

/// Class-diagram rendering of a metamodel, used as prompt context. Output is
/// a pure function of the metamodel; no skinparams or layout hints.
PlantUmlDoc render_plantuml(const MetaModel& m);

/// Quotes an identifier when PlantUML would not accept it bare.
std::string plantuml_name(const std::string& name);

}  // namespace cimc
