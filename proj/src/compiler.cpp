// SPDX-License-Identifier: Apache-2.0

#include "cimc/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace cimc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Maps the free-form dataType label an LLM writes onto a kind. nullopt when
// the label names nothing recognisable.
std::optional<DataType> declared_type(std::string_view label, const MetaModel& m) {
  std::string l = lower(label);
  if (l == "string" || l == "str" || l == "text" || l == "estring") return DataType{DataKind::String, {}};
  if (l == "int" || l == "integer" || l == "long" || l == "short" || l == "eint" || l == "elong" || l == "eshort" ||
      l == "ebiginteger" || l == "biginteger" || l == "eintegerobject")
    return DataType{DataKind::Int, {}};
  if (l == "float" || l == "double" || l == "real" || l == "decimal" || l == "efloat" || l == "edouble")
    return DataType{DataKind::Float, {}};
  if (l == "boolean" || l == "bool" || l == "eboolean") return DataType{DataKind::Boolean, {}};
  for (const auto& e : m.enums())
    if (lower(e.name) == l) return DataType{DataKind::Enum, e.name};
  return std::nullopt;
}

bool declared_agrees(std::string_view label, const DataType& actual, const MetaModel& m) {
  if (label.empty()) return true;
  if (actual.kind == DataKind::Enum && (lower(label) == "enum" || lower(label) == "eenum")) return true;
  auto d = declared_type(label, m);
  return d && *d == actual;
}

bool within_upper(std::size_t current, int upper) { return upper == kUnbounded || current < static_cast<std::size_t>(upper); }

Diagnostic at(Diagnostic d, std::size_t index) {
  d.elementIndex = index;
  return d;
}

}  // namespace

Instantiation instantiate_objects(const MetaModel& m, const ConceptualInstanceModel& cim) {
  Instantiation out;
  for (const auto& [id, spec] : cim) {
    auto resolved = resolve_classifier(m, spec.type);
    if (std::holds_alternative<std::monostate>(resolved)) {
      out.diagnostics.push_back(error(DiagCode::UnknownClass, "class '" + spec.type + "' is not in the metamodel", id));
      continue;
    }
    if (std::holds_alternative<const EEnum*>(resolved)) {
      out.diagnostics.push_back(error(DiagCode::UnknownClass, "'" + spec.type + "' is an enumeration, not a class", id));
      continue;
    }
    const EClass& c = *std::get<const EClass*>(resolved);
    if (!is_instantiable(c)) {
      out.diagnostics.push_back(error(DiagCode::AbstractClass,
                                      "class '" + c.name + "' is " + (c.isInterface ? "an interface" : "abstract"), id));
      continue;
    }
    InstanceObject obj;
    obj.id = id;
    obj.eClass = c.name;
    obj.classIndex = c.index;
    out.objects.add(std::move(obj));
  }
  return out;
}

bool set_attribute(InstanceObject& owner, const AttributeSpec& spec, const MetaModel& m,
                   std::vector<Diagnostic>& diags, std::size_t index) {
  const EClass& cls = m.classes()[owner.classIndex];
  const auto& fs = m.features(cls);
  const EAttribute* attr = fs.attribute(spec.attributeName);
  if (!attr) {
    std::string why = fs.reference(spec.attributeName) ? "' is a reference of '" : "' is not an attribute of '";
    diags.push_back(at(error(DiagCode::UnknownAttribute, "'" + spec.attributeName + why + cls.name + "'", owner.id,
                             spec.attributeName),
                       index));
    return false;
  }
  if (!declared_agrees(spec.dataType, attr->type, m))
    diags.push_back(at(warning(DiagCode::TypeMismatchDeclared,
                               "declared '" + spec.dataType + "' but the metamodel says " + to_string(attr->type), owner.id,
                               attr->name),
                       index));
  auto value = coerce_value(spec.value, attr->type, m);
  if (!value) {
    diags.push_back(at(error(DiagCode::ValueCoercionFailed,
                             "value \"" + spec.value + "\" is not a valid " + to_string(attr->type), owner.id, attr->name),
                       index));
    return false;
  }
  auto& slot = owner.attrValues[attr->name];
  if (!within_upper(slot.size(), attr->upperBound)) {
    diags.push_back(at(error(DiagCode::UpperBoundExceeded,
                             "attribute already holds " + std::to_string(slot.size()) + " value(s), upper bound " +
                                 std::to_string(attr->upperBound),
                             owner.id, attr->name),
                       index));
    if (slot.empty()) owner.attrValues.erase(attr->name);
    return false;
  }
  slot.push_back(std::move(*value));
  return true;
}

bool set_association(InstanceModel& objects, std::string_view ownerId, const LinkSpec& spec, LinkKind kind,
                     const MetaModel& m, std::vector<Diagnostic>& diags, std::size_t index) {
  InstanceObject* owner = objects.find(ownerId);
  const std::string id(ownerId);
  if (!owner) {
    diags.push_back(at(error(DiagCode::OwnerMissing, "owner was not instantiated", id, spec.associationName), index));
    return false;
  }
  const EClass& cls = m.classes()[owner->classIndex];
  const auto& fs = m.features(cls);
  const EReference* ref = fs.reference(spec.associationName);
  auto reject = [&](DiagCode code, std::string why) {
    diags.push_back(at(error(code, std::move(why), id, spec.associationName), index));
    return false;
  };
  if (!ref) {
    std::string why = fs.attribute(spec.associationName) ? "' is an attribute of '" : "' is not a reference of '";
    return reject(DiagCode::UnknownReference, "'" + spec.associationName + why + cls.name + "'");
  }
  const bool wantContainment = kind == LinkKind::Composition;
  if (ref->containment != wantContainment)
    diags.push_back(at(warning(DiagCode::KindMismatch,
                               std::string("listed as a ") + (wantContainment ? "composition" : "reference") +
                                   " but the metamodel declares a " + (ref->containment ? "containment" : "cross reference"),
                               id, ref->name),
                       index));

  InstanceObject* target = objects.find(spec.targetInstanceID);
  if (!target) return reject(DiagCode::DanglingTarget, "target \"" + spec.targetInstanceID + "\" does not exist");
  if (!spec.associatedClassName.empty() && spec.associatedClassName != target->eClass)
    diags.push_back(at(warning(DiagCode::AssociatedClassMismatch,
                               "link says '" + spec.associatedClassName + "' but \"" + target->id + "\" is a '" +
                                   target->eClass + "'",
                               id, ref->name),
                       index));
  const EClass& targetCls = m.classes()[target->classIndex];
  if (!m.conforms(targetCls, m.classes()[ref->targetIndex]))
    return reject(DiagCode::TypeNonConforming,
                  "'" + targetCls.name + "' does not conform to '" + ref->targetClass + "'");

  auto& slot = owner->refTargets[ref->name];
  auto rejectAndTidy = [&](DiagCode code, std::string why) {
    if (slot.empty()) owner->refTargets.erase(ref->name);
    return reject(code, std::move(why));
  };
  if (std::find(slot.begin(), slot.end(), target->id) != slot.end())
    return rejectAndTidy(DiagCode::DuplicateLink, "\"" + target->id + "\" is already linked");
  if (!within_upper(slot.size(), ref->upperBound))
    return rejectAndTidy(DiagCode::UpperBoundExceeded,
                         "reference already holds " + std::to_string(slot.size()) + " target(s), upper bound " +
                             std::to_string(ref->upperBound));
  if (ref->containment) {
    if (target->container)
      return rejectAndTidy(DiagCode::SecondContainer,
                           "\"" + target->id + "\" is already contained by \"" + target->container->parentId + "\"");
    for (const InstanceObject* p = owner; p != nullptr;
         p = p->container ? objects.find(p->container->parentId) : nullptr) {
      if (p == target)
        return rejectAndTidy(DiagCode::ContainmentCycle, "containing \"" + target->id + "\" would close a cycle");
    }
    target->container = ContainerLink{owner->id, ref->name};
  }
  slot.push_back(target->id);
  return true;
}

CompileReport compile(const MetaModel& m, const ConceptualInstanceModel& cim) {
  CompileReport report;
  auto inst = instantiate_objects(m, cim);
  report.model = std::move(inst.objects);
  report.diagnostics = std::move(inst.diagnostics);
  auto& counts = report.elementCounts;
  counts.objects = {report.model.size(), cim.size()};

  for (const auto& [id, spec] : cim) {
    InstanceObject* owner = report.model.find(id);
    std::size_t element = 0;
    for (const auto& a : spec.attributes) {
      ++counts.attributes.attempted;
      if (!owner) {
        report.diagnostics.push_back(
            at(error(DiagCode::OwnerMissing, "owner was not instantiated", id, a.attributeName), element));
      } else if (set_attribute(*owner, a, m, report.diagnostics, element)) {
        ++counts.attributes.accepted;
      }
      ++element;
    }
    auto links = [&](const std::vector<LinkSpec>& list, LinkKind kind) {
      for (const auto& l : list) {
        ++counts.associations.attempted;
        if (set_association(report.model, id, l, kind, m, report.diagnostics, element)) ++counts.associations.accepted;
        ++element;
      }
    };
    links(spec.compositions, LinkKind::Composition);
    links(spec.references, LinkKind::Reference);
  }

  for (const auto& o : report.model.objects()) {
    const auto& fs = m.features(m.classes()[o.classIndex]);
    for (const auto* a : fs.attributes) {
      const auto* v = o.values(a->name);
      std::size_t n = v ? v->size() : 0;
      if (n < static_cast<std::size_t>(a->lowerBound))
        report.diagnostics.push_back(warning(DiagCode::LowerBoundViolated,
                                             "needs at least " + std::to_string(a->lowerBound) + " value(s), has " +
                                                 std::to_string(n),
                                             o.id, a->name));
    }
    for (const auto* r : fs.references) {
      const auto* t = o.targets(r->name);
      std::size_t n = t ? t->size() : 0;
      if (n < static_cast<std::size_t>(r->lowerBound))
        report.diagnostics.push_back(warning(DiagCode::LowerBoundViolated,
                                             "needs at least " + std::to_string(r->lowerBound) + " target(s), has " +
                                                 std::to_string(n),
                                             o.id, r->name));
    }
  }
  report.model.recompute_roots();
  return report;
}

}  // namespace cimc
