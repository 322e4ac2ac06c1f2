// SPDX-License-Identifier: Apache-2.0

#include "cimc/plantuml.hpp"

#include <cctype>

namespace cimc {

namespace {

std::string multiplicity(int lower, int upper) {
  std::string hi = upper == kUnbounded ? "*" : std::to_string(upper);
  return std::to_string(lower) + ".." + hi;
}

std::string type_name(const EAttribute& a) {
  std::string t = a.type.kind == DataKind::Enum ? plantuml_name(a.type.enumName) : to_string(a.type);
  if (a.many() || a.lowerBound > 1) t += " [" + multiplicity(a.lowerBound, a.upperBound) + "]";
  return t;
}

}  // namespace

std::string plantuml_name(const std::string& name) {
  bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front()));
  for (unsigned char c : name)
    if (!std::isalnum(c) && c != '_') plain = false;
  return plain ? name : "\"" + name + "\"";
}

PlantUmlDoc render_plantuml(const MetaModel& m) {
  const auto& root = m.root_package();
  std::string out = "@startuml\n";
  out += "' metamodel " + root.name + " (" + root.nsURI + ")\n";

  // Pre-order over packages keeps declaration order across subpackages.
  std::vector<std::size_t> order;
  auto walk = [&](auto&& self, std::size_t p) -> void {
    order.push_back(p);
    for (auto s : m.packages()[p].subpackages) self(self, s);
  };
  walk(walk, 0);

  std::vector<const EClass*> classes;
  for (auto p : order) {
    for (const auto& h : m.packages()[p].classifiers) {
      if (h.kind == ClassifierKind::Class) {
        const auto& c = m.classes()[h.index];
        classes.push_back(&c);
        out += (c.isAbstract || c.isInterface) ? "abstract class " : "class ";
        out += plantuml_name(c.name) + " {\n";
        for (const auto& a : c.attributes) out += "  " + a.name + " : " + type_name(a) + "\n";
        out += "}\n";
      } else if (h.kind == ClassifierKind::Enum) {
        const auto& e = m.enums()[h.index];
        out += "enum " + plantuml_name(e.name) + " {\n";
        for (const auto& lit : e.literals) out += "  " + lit + "\n";
        out += "}\n";
      }
    }
  }
  for (const auto* c : classes)
    for (const auto& s : c->superTypes) out += plantuml_name(s) + " <|-- " + plantuml_name(c->name) + "\n";
  for (const auto* c : classes) {
    for (const auto& r : c->references) {
      const std::string mult = "\"" + multiplicity(r.lowerBound, r.upperBound) + "\"";
      if (r.containment)
        out += plantuml_name(c->name) + " \"1\" *-- " + mult + " " + plantuml_name(r.targetClass) + " : " + r.name + "\n";
      else
        out += plantuml_name(c->name) + " --> " + mult + " " + plantuml_name(r.targetClass) + " : " + r.name + "\n";
    }
  }
  out += "@enduml\n";
  return {std::move(out)};
}

}  // namespace cimc
