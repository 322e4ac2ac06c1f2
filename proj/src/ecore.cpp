// SPDX-License-Identifier: Apache-2.0

#include "cimc/ecore.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "cimc/xml.hpp"

namespace cimc {

namespace {

constexpr std::string_view kXsiUri = "http://www.w3.org/2001/XMLSchema-instance";
constexpr std::string_view kBuiltinPrefix = "http://www.eclipse.org/emf/2002/Ecore#//";

struct BuiltinType {
  std::string_view name;
  DataKind kind;
};

// EMF data types with a direct scalar counterpart. Everything else maps to
// string with a warning.
constexpr BuiltinType kBuiltins[] = {
    {"EString", DataKind::String},        {"EInt", DataKind::Int},
    {"EBigInteger", DataKind::Int},       {"ELong", DataKind::Int},
    {"EShort", DataKind::Int},            {"EIntegerObject", DataKind::Int},
    {"ELongObject", DataKind::Int},       {"EShortObject", DataKind::Int},
    {"EFloat", DataKind::Float},          {"EDouble", DataKind::Float},
    {"EFloatObject", DataKind::Float},    {"EDoubleObject", DataKind::Float},
    {"EBoolean", DataKind::Boolean},      {"EBooleanObject", DataKind::Boolean},
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_bound(const xml::Element& e, std::string_view key, int fallback) {
  const auto* v = e.attribute(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    int b = std::stoi(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing");
    return b;
  } catch (const std::exception&) {
    throw EcoreError(EcoreErrc::InvalidBounds, "bound " + std::string(key) + "=\"" + *v + "\" is not an integer (line " +
                                                   std::to_string(e.line) + ")");
  }
}

bool flag(const xml::Element& e, std::string_view key) { return e.attribute_or(key, "false") == "true"; }

}  // namespace

std::string to_string(const DataType& t) {
  switch (t.kind) {
    case DataKind::String: return "string";
    case DataKind::Int: return "int";
    case DataKind::Float: return "float";
    case DataKind::Boolean: return "boolean";
    case DataKind::Enum: return "enum:" + t.enumName;
  }
  return "string";
}

bool EEnum::has_literal(std::string_view lit) const noexcept {
  return std::find(literals.begin(), literals.end(), lit) != literals.end();
}

const EAttribute* FeatureSet::attribute(std::string_view name) const noexcept {
  for (const auto* a : attributes)
    if (a->name == name) return a;
  return nullptr;
}

const EReference* FeatureSet::reference(std::string_view name) const noexcept {
  for (const auto* r : references)
    if (r->name == name) return r;
  return nullptr;
}

std::string_view to_string(EcoreErrc code) noexcept {
  switch (code) {
    case EcoreErrc::MalformedXml: return "MalformedXml";
    case EcoreErrc::MissingNsURI: return "MissingNsURI";
    case EcoreErrc::UnresolvableTypeRef: return "UnresolvableTypeRef";
    case EcoreErrc::InheritanceCycle: return "InheritanceCycle";
    case EcoreErrc::DuplicateName: return "DuplicateName";
    case EcoreErrc::InvalidEnum: return "InvalidEnum";
    case EcoreErrc::InvalidBounds: return "InvalidBounds";
  }
  return "Unknown";
}

EcoreError::EcoreError(EcoreErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

const EClass* MetaModel::find_class(std::string_view name) const noexcept {
  auto it = bySimpleName_.find(name);
  if (it == bySimpleName_.end() || it->second.kind != ClassifierKind::Class) return nullptr;
  return &classes_[it->second.index];
}

const EEnum* MetaModel::find_enum(std::string_view name) const noexcept {
  auto it = bySimpleName_.find(name);
  if (it == bySimpleName_.end() || it->second.kind != ClassifierKind::Enum) return nullptr;
  return &enums_[it->second.index];
}

const EClass* MetaModel::find_class_qualified(std::string_view qualified) const noexcept {
  auto it = byQualifiedName_.find(qualified);
  if (it == byQualifiedName_.end() || it->second.kind != ClassifierKind::Class) return nullptr;
  return &classes_[it->second.index];
}

const EPackage* MetaModel::find_package_by_uri(std::string_view nsURI) const noexcept {
  for (const auto& p : packages_)
    if (p.nsURI == nsURI) return &p;
  return nullptr;
}

bool MetaModel::conforms(const EClass& sub, const EClass& super) const noexcept {
  return ancestors_[sub.index][super.index];
}

/// Builds a MetaModel from the DOM in three passes: declare classifiers,
/// resolve type references, then derive inheritance tables.
class EcoreReader {
 public:
  explicit EcoreReader(std::vector<Diagnostic>* warnings) : warnings_(warnings) {}

  MetaModel read(std::string_view text) {
    xml::Element root;
    try {
      root = xml::parse(text);
    } catch (const xml::ParseError& e) {
      throw EcoreError(EcoreErrc::MalformedXml, e.what());
    }
    detect_prefixes(root);
    const xml::Element* pkg = &root;
    if (root.local_name() == "XMI") {
      auto it = std::find_if(root.children.begin(), root.children.end(),
                             [](const xml::Element& c) { return c.local_name() == "EPackage"; });
      if (it == root.children.end()) throw EcoreError(EcoreErrc::MalformedXml, "no EPackage in document");
      detect_prefixes(*it);
      warn("document holds several roots; only the first EPackage is used");
      pkg = &*it;
    } else if (root.local_name() != "EPackage") {
      throw EcoreError(EcoreErrc::MalformedXml, "root element <" + root.name + "> is not an EPackage");
    }
    read_package(*pkg, std::nullopt, "");
    resolve();
    build_inheritance();
    return std::move(m_);
  }

 private:
  struct PendingFeature {
    std::size_t cls;
    bool isReference;
    std::size_t slot;
    std::string eType;
    long line;
  };

  void warn(std::string detail) {
    if (warnings_) warnings_->push_back(warning(DiagCode::UnsupportedConstruct, std::move(detail)));
  }

  void detect_prefixes(const xml::Element& e) {
    for (const auto& [k, v] : e.attributes) {
      if (k.rfind("xmlns:", 0) != 0) continue;
      if (v == kXsiUri) xsiType_ = k.substr(6) + ":type";
    }
  }

  std::string_view xsi_kind(const xml::Element& e) const {
    const auto* t = e.attribute(xsiType_);
    if (!t) return {};
    std::string_view v = *t;
    auto colon = v.find(':');
    return colon == std::string_view::npos ? v : v.substr(colon + 1);
  }

  void read_package(const xml::Element& e, std::optional<std::size_t> parent, const std::string& qualifier) {
    EPackage p;
    p.name = e.attribute_or("name", "");
    p.nsURI = e.attribute_or("nsURI", "");
    p.nsPrefix = e.attribute_or("nsPrefix", p.name);
    p.parent = parent;
    if (p.nsURI.empty())
      throw EcoreError(EcoreErrc::MissingNsURI, "package '" + p.name + "' has no nsURI");
    if (p.nsPrefix.empty()) p.nsPrefix = "model";
    const std::size_t self = m_.packages_.size();
    const std::string qual = qualifier.empty() ? p.name : qualifier + "." + p.name;
    m_.packages_.push_back(std::move(p));
    if (parent) m_.packages_[*parent].subpackages.push_back(self);

    std::set<std::string, std::less<>> names;
    for (const auto& child : e.children) {
      auto local = child.local_name();
      if (local == "eClassifiers") {
        read_classifier(child, self, qual, names);
      } else if (local == "eSubpackages") {
        read_package(child, self, qual);
      } else {
        warn("ignored <" + child.name + "> in package '" + qual + "' (line " + std::to_string(child.line) + ")");
      }
    }
  }

  void read_classifier(const xml::Element& e, std::size_t pkg, const std::string& qual,
                       std::set<std::string, std::less<>>& names) {
    std::string name = e.attribute_or("name", "");
    if (name.empty()) throw EcoreError(EcoreErrc::MalformedXml, "classifier without name (line " + std::to_string(e.line) + ")");
    if (!names.insert(name).second)
      throw EcoreError(EcoreErrc::DuplicateName, "classifier '" + name + "' declared twice in package '" + qual + "'");
    const std::string qualified = qual + "." + name;
    auto kind = xsi_kind(e);
    ClassifierHandle h{};
    if (kind == "EClass") {
      h = {ClassifierKind::Class, m_.classes_.size()};
      EClass c;
      c.name = name;
      c.qualifiedName = qualified;
      c.index = h.index;
      c.package = pkg;
      c.isAbstract = flag(e, "abstract");
      c.isInterface = flag(e, "interface");
      if (const auto* st = e.attribute("eSuperTypes")) superRefs_.push_back({h.index, split_ws(*st), e.line});
      m_.classes_.push_back(std::move(c));
      for (const auto& f : e.children) read_feature(f, h.index, qualified);
    } else if (kind == "EEnum") {
      h = {ClassifierKind::Enum, m_.enums_.size()};
      EEnum en;
      en.name = name;
      en.qualifiedName = qualified;
      en.package = pkg;
      for (const auto& lit : e.children) {
        if (lit.local_name() != "eLiterals") {
          warn("ignored <" + lit.name + "> in enum '" + qualified + "'");
          continue;
        }
        std::string ln = lit.attribute_or("name", lit.attribute_or("literal", ""));
        if (ln.empty()) throw EcoreError(EcoreErrc::InvalidEnum, "enum '" + qualified + "' has an unnamed literal");
        if (en.has_literal(ln)) throw EcoreError(EcoreErrc::InvalidEnum, "enum '" + qualified + "' repeats literal '" + ln + "'");
        en.literals.push_back(std::move(ln));
      }
      if (en.literals.empty()) throw EcoreError(EcoreErrc::InvalidEnum, "enum '" + qualified + "' has no literals");
      m_.enums_.push_back(std::move(en));
    } else if (kind == "EDataType") {
      h = {ClassifierKind::DataType, m_.dataTypes_.size()};
      m_.dataTypes_.push_back(qualified);
    } else {
      throw EcoreError(EcoreErrc::MalformedXml,
                       "classifier '" + qualified + "' has unsupported kind '" + std::string(kind) + "'");
    }
    m_.packages_[pkg].classifiers.push_back(h);
    m_.bySimpleName_.emplace(name, h);
    m_.byQualifiedName_.emplace(qualified, h);
  }

  void read_feature(const xml::Element& f, std::size_t cls, const std::string& owner) {
    auto local = f.local_name();
    if (local != "eStructuralFeatures") {
      warn("ignored <" + f.name + "> in class '" + owner + "' (line " + std::to_string(f.line) + ")");
      return;
    }
    auto kind = xsi_kind(f);
    std::string name = f.attribute_or("name", "");
    if (name.empty()) throw EcoreError(EcoreErrc::MalformedXml, "unnamed feature in '" + owner + "'");
    const auto* eType = f.attribute("eType");
    if (!eType) {
      bool generic = std::any_of(f.children.begin(), f.children.end(),
                                 [](const xml::Element& c) { return c.local_name() == "eGenericType"; });
      if (generic) {
        warn("feature '" + owner + "." + name + "' uses a generic type and is ignored");
        return;
      }
      throw EcoreError(EcoreErrc::UnresolvableTypeRef, "feature '" + owner + "." + name + "' has no eType");
    }
    for (const auto& c : f.children) warn("ignored <" + c.name + "> in feature '" + owner + "." + name + "'");
    int lower = parse_bound(f, "lowerBound", 0);
    int upper = parse_bound(f, "upperBound", 1);
    if (upper == -2) upper = kUnbounded;  // ETypedElement.UNSPECIFIED_MULTIPLICITY
    if (lower < 0 || upper < kUnbounded || (upper != kUnbounded && lower > upper))
      throw EcoreError(EcoreErrc::InvalidBounds, "feature '" + owner + "." + name + "' has bounds " +
                                                     std::to_string(lower) + ".." + std::to_string(upper));
    auto& c = m_.classes_[cls];
    if (kind == "EAttribute") {
      c.attributes.push_back(EAttribute{name, {}, lower, upper});
      pending_.push_back({cls, false, c.attributes.size() - 1, *eType, f.line});
    } else if (kind == "EReference") {
      EReference r;
      r.name = name;
      r.containment = flag(f, "containment");
      r.lowerBound = lower;
      r.upperBound = upper;
      c.references.push_back(std::move(r));
      pending_.push_back({cls, true, c.references.size() - 1, *eType, f.line});
    } else {
      warn("ignored feature '" + owner + "." + name + "' of kind '" + std::string(kind) + "'");
    }
  }

  // "#//Name", "#//sub/Name", optionally preceded by "ecore:EClass " style
  // type tags, or a built-in Ecore href.
  std::optional<ClassifierHandle> resolve_local(const std::string& href) const {
    if (href.rfind("#//", 0) != 0) return std::nullopt;
    std::string path = href.substr(3);
    std::string qual = m_.packages_.front().name;
    std::size_t pos = 0;
    while (true) {
      auto slash = path.find('/', pos);
      qual += "." + path.substr(pos, slash == std::string::npos ? std::string::npos : slash - pos);
      if (slash == std::string::npos) break;
      pos = slash + 1;
    }
    auto it = m_.byQualifiedName_.find(qual);
    if (it == m_.byQualifiedName_.end()) return std::nullopt;
    return it->second;
  }

  static std::string last_token(const std::string& raw) {
    auto toks = split_ws(raw);
    return toks.empty() ? std::string{} : toks.back();
  }

  void resolve() {
    for (const auto& p : pending_) {
      const std::string href = last_token(p.eType);
      auto& cls = m_.classes_[p.cls];
      auto fail = [&](const std::string& why) {
        throw EcoreError(EcoreErrc::UnresolvableTypeRef,
                         "eType \"" + p.eType + "\" of '" + cls.qualifiedName + "' (line " + std::to_string(p.line) + ") " + why);
      };
      if (p.isReference) {
        auto h = resolve_local(href);
        if (!h || h->kind != ClassifierKind::Class) fail("does not name a class of this metamodel");
        auto& r = cls.references[p.slot];
        r.targetIndex = h->index;
        r.targetClass = m_.classes_[h->index].name;
        continue;
      }
      auto& a = cls.attributes[p.slot];
      if (href.rfind(kBuiltinPrefix, 0) == 0) {
        std::string_view builtin = std::string_view(href).substr(kBuiltinPrefix.size());
        auto it = std::find_if(std::begin(kBuiltins), std::end(kBuiltins),
                               [&](const BuiltinType& b) { return b.name == builtin; });
        if (it != std::end(kBuiltins)) {
          a.type = {it->kind, {}};
        } else {
          a.type = {DataKind::String, {}};
          unknown_type(cls, a, std::string(builtin));
        }
        continue;
      }
      auto h = resolve_local(href);
      if (!h) fail("is neither a local classifier nor a built-in Ecore type");
      if (h->kind == ClassifierKind::Enum) {
        a.type = {DataKind::Enum, m_.enums_[h->index].name};
      } else if (h->kind == ClassifierKind::DataType) {
        a.type = {DataKind::String, {}};
        unknown_type(cls, a, m_.dataTypes_[h->index]);
      } else {
        fail("names a class; attributes need a data type");
      }
    }
    for (const auto& s : superRefs_) {
      auto& cls = m_.classes_[s.cls];
      for (const auto& tok : s.hrefs) {
        if (tok.find('#') == std::string::npos) continue;  // "ecore:EClass" tag before an href
        auto h = resolve_local(tok);
        if (!h || h->kind != ClassifierKind::Class)
          throw EcoreError(EcoreErrc::UnresolvableTypeRef,
                           "eSuperTypes entry \"" + tok + "\" of '" + cls.qualifiedName + "' does not name a class");
        cls.superIndices.push_back(h->index);
        cls.superTypes.push_back(m_.classes_[h->index].name);
      }
    }
  }

  void unknown_type(const EClass& c, const EAttribute& a, const std::string& type) {
    if (warnings_)
      warnings_->push_back(warning(DiagCode::UnknownDataType,
                                   "data type '" + type + "' of '" + c.qualifiedName + "." + a.name + "' is treated as string"));
  }

  void build_inheritance() {
    const std::size_t n = m_.classes_.size();
    // Colors: 0 unvisited, 1 on stack, 2 done.
    std::vector<int> color(n, 0);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
      color[i] = 1;
      for (auto s : m_.classes_[i].superIndices) {
        if (color[s] == 1)
          throw EcoreError(EcoreErrc::InheritanceCycle, "class '" + m_.classes_[s].qualifiedName + "' inherits from itself");
        if (color[s] == 0) visit(s);
      }
      color[i] = 2;
    };
    for (std::size_t i = 0; i < n; ++i)
      if (color[i] == 0) visit(i);

    m_.ancestors_.assign(n, std::vector<bool>(n, false));
    m_.features_.assign(n, FeatureSet{});
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<bool> seen(n, false);
      auto& fs = m_.features_[i];
      std::function<void(std::size_t)> collect = [&](std::size_t c) {
        if (seen[c]) return;
        seen[c] = true;
        for (auto s : m_.classes_[c].superIndices) collect(s);
        for (const auto& a : m_.classes_[c].attributes) fs.attributes.push_back(&a);
        for (const auto& r : m_.classes_[c].references) fs.references.push_back(&r);
      };
      collect(i);
      m_.ancestors_[i] = seen;
      std::set<std::string_view> names;
      auto check = [&](std::string_view name) {
        if (!names.insert(name).second)
          throw EcoreError(EcoreErrc::DuplicateName,
                           "feature '" + std::string(name) + "' is declared twice in the hierarchy of '" +
                               m_.classes_[i].qualifiedName + "'");
      };
      for (const auto* a : fs.attributes) check(a->name);
      for (const auto* r : fs.references) check(r->name);
    }
  }

  struct SuperRef {
    std::size_t cls;
    std::vector<std::string> hrefs;
    long line;
  };

  std::vector<Diagnostic>* warnings_;
  std::string xsiType_ = "xsi:type";
  MetaModel m_;
  std::vector<PendingFeature> pending_;
  std::vector<SuperRef> superRefs_;
};

MetaModel parse_ecore(std::string_view ecoreXml, std::vector<Diagnostic>* warnings) {
  return EcoreReader(warnings).read(ecoreXml);
}

ResolvedClassifier resolve_classifier(const MetaModel& m, std::string_view name) noexcept {
  if (const auto* c = m.find_class(name)) return c;
  if (const auto* e = m.find_enum(name)) return e;
  return std::monostate{};
}

const FeatureSet& all_features(const EClass& c, const MetaModel& m) { return m.features(c); }

}  // namespace cimc
