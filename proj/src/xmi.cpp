// SPDX-License-Identifier: Apache-2.0

#include "cimc/xmi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cimc/xml.hpp"

namespace cimc {

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string qualified_tag(const MetaModel& m, const EClass& c) { return m.package_of(c).nsPrefix + ":" + c.name; }

class XmiWriter {
 public:
  XmiWriter(const InstanceModel& model, const MetaModel& m) : model_(model), m_(m) {}

  std::string write() {
    const auto& roots = model_.roots();
    const bool single = roots.size() == 1;
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (const auto* o = model_.find(roots[i])) assign_paths(*o, single ? "/" : "/" + std::to_string(i));

    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (single) {
      const auto* root = model_.find(roots.front());
      write_object(*root, qualified_tag(m_, m_.classes()[root->classIndex]), {}, 0, true);
      return std::move(out_);
    }
    out_ += "<xmi:XMI" + namespace_attributes();
    if (roots.empty()) {
      out_ += "/>\n";
      return std::move(out_);
    }
    out_ += ">\n";
    for (const auto& id : roots) {
      const auto* o = model_.find(id);
      write_object(*o, qualified_tag(m_, m_.classes()[o->classIndex]), {}, 1, false);
    }
    out_ += "</xmi:XMI>\n";
    return std::move(out_);
  }

 private:
  void assign_paths(const InstanceObject& o, const std::string& path) {
    paths_[o.id] = path;
    for (const auto* r : m_.features(m_.classes()[o.classIndex]).references) {
      if (!r->containment) continue;
      const auto* kids = o.targets(r->name);
      if (!kids) continue;
      for (std::size_t i = 0; i < kids->size(); ++i) {
        std::string seg = path + "/@" + r->name;
        if (r->many()) seg += "." + std::to_string(i);
        if (const auto* k = model_.find((*kids)[i])) assign_paths(*k, seg);
      }
    }
  }

  std::string namespace_attributes() const {
    std::set<std::size_t> used{0};
    for (const auto& o : model_.objects()) used.insert(m_.classes()[o.classIndex].package);
    std::string s = " xmi:version=\"2.0\" xmlns:xmi=\"" + std::string(kXmiUri) + "\" xmlns:xsi=\"" + std::string(kXsiUri) + "\"";
    for (auto p : used) {
      const auto& pkg = m_.packages()[p];
      s += " xmlns:" + pkg.nsPrefix + "=\"" + xml::escape_attribute(pkg.nsURI) + "\"";
    }
    return s;
  }

  void write_object(const InstanceObject& o, const std::string& tag, const std::string& xsiType, int depth, bool docRoot) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    const EClass& cls = m_.classes()[o.classIndex];
    const auto& fs = m_.features(cls);
    out_ += indent + "<" + tag;
    if (docRoot) out_ += namespace_attributes();
    if (!xsiType.empty()) out_ += " xsi:type=\"" + xsiType + "\"";
    for (const auto* a : fs.attributes) {
      const auto* vals = o.values(a->name);
      if (a->many() || !vals || vals->empty()) continue;
      out_ += " " + a->name + "=\"" + xml::escape_attribute(render_value(vals->front())) + "\"";
    }
    for (const auto* r : fs.references) {
      const auto* ts = r->containment ? nullptr : o.targets(r->name);
      if (!ts || ts->empty()) continue;
      std::string joined;
      for (const auto& t : *ts) {
        if (!joined.empty()) joined += ' ';
        joined += paths_.at(t);
      }
      out_ += " " + r->name + "=\"" + xml::escape_attribute(joined) + "\"";
    }

    std::string body;
    std::swap(body, out_);
    const std::string childIndent(static_cast<std::size_t>(depth + 1) * 2, ' ');
    for (const auto* a : fs.attributes) {
      const auto* vals = o.values(a->name);
      if (!a->many() || !vals) continue;
      for (const auto& v : *vals) out_ += childIndent + "<" + a->name + ">" + xml::escape_text(render_value(v)) + "</" + a->name + ">\n";
    }
    for (const auto* r : fs.references) {
      const auto* kids = r->containment ? o.targets(r->name) : nullptr;
      if (!kids) continue;
      for (const auto& k : *kids) {
        const auto* child = model_.find(k);
        const EClass& kc = m_.classes()[child->classIndex];
        write_object(*child, r->name, kc.index == r->targetIndex ? std::string{} : qualified_tag(m_, kc), depth + 1, false);
      }
    }
    std::swap(body, out_);
    if (body.empty()) {
      out_ += "/>\n";
    } else {
      out_ += ">\n" + body + indent + "</" + tag + ">\n";
    }
  }

  const InstanceModel& model_;
  const MetaModel& m_;
  std::unordered_map<std::string, std::string> paths_;
  std::string out_;
};

class XmiReader {
 public:
  explicit XmiReader(const MetaModel& m) : m_(m) {}

  InstanceModel read(std::string_view text) {
    xml::Element doc;
    try {
      doc = xml::parse(text);
    } catch (const xml::ParseError& e) {
      throw XmiError(XmiErrc::MalformedXml, e.what());
    }
    Namespaces ns;
    ns = scoped(ns, doc);
    if (doc.local_name() == "XMI" && uri_of(ns, doc.prefix(), doc.line) == kXmiUri) {
      std::size_t i = 0;
      for (const auto& e : doc.children) {
        Namespaces inner = scoped(ns, e);
        read_object(e, class_for_qname(inner, e.name, e.line), "/" + std::to_string(i++), std::nullopt, inner);
      }
    } else {
      read_object(doc, class_for_qname(ns, doc.name, doc.line), "/", std::nullopt, ns);
    }
    resolve_references();
    model_.recompute_roots();
    return std::move(model_);
  }

 private:
  using Namespaces = std::map<std::string, std::string, std::less<>>;

  struct Pending {
    std::string owner;
    const EReference* ref;
    std::vector<std::string> tokens;
    long line;
  };

  [[noreturn]] static void fail(XmiErrc code, const std::string& what, long line) {
    throw XmiError(code, what + " (line " + std::to_string(line) + ")");
  }

  static Namespaces scoped(const Namespaces& outer, const xml::Element& e) {
    Namespaces ns = outer;
    for (const auto& [k, v] : e.attributes)
      if (k.rfind("xmlns:", 0) == 0) ns[k.substr(6)] = v;
    return ns;
  }

  static std::string uri_of(const Namespaces& ns, std::string_view prefix, long line) {
    auto it = ns.find(prefix);
    if (it == ns.end()) fail(XmiErrc::NamespaceMismatch, "undeclared namespace prefix '" + std::string(prefix) + "'", line);
    return it->second;
  }

  std::string prefix_for(const Namespaces& ns, std::string_view uri) const {
    for (const auto& [p, u] : ns)
      if (u == uri) return p;
    return {};
  }

  const EClass& class_for_qname(const Namespaces& ns, std::string_view qname, long line) const {
    auto colon = qname.find(':');
    if (colon == std::string_view::npos)
      fail(XmiErrc::UnknownElementClass, "type '" + std::string(qname) + "' has no namespace prefix", line);
    const std::string uri = uri_of(ns, qname.substr(0, colon), line);
    const EPackage* pkg = m_.find_package_by_uri(uri);
    if (!pkg) fail(XmiErrc::NamespaceMismatch, "namespace '" + uri + "' does not belong to the metamodel", line);
    const std::string_view name = qname.substr(colon + 1);
    for (const auto& h : pkg->classifiers)
      if (h.kind == ClassifierKind::Class && m_.classes()[h.index].name == name) return m_.classes()[h.index];
    fail(XmiErrc::UnknownElementClass, "no class '" + std::string(name) + "' in package '" + pkg->name + "'", line);
  }

  void add_value(InstanceObject& o, const EAttribute& a, std::string_view raw, long line) {
    auto v = coerce_value(raw, a.type, m_);
    if (!v) fail(XmiErrc::InvalidValue, "\"" + std::string(raw) + "\" is not a valid " + to_string(a.type) + " for '" + a.name + "'", line);
    auto& slot = o.attrValues[a.name];
    if (a.upperBound != kUnbounded && slot.size() >= static_cast<std::size_t>(a.upperBound))
      fail(XmiErrc::MultiplicityViolation, "too many values for '" + a.name + "'", line);
    slot.push_back(std::move(*v));
  }

  void read_object(const xml::Element& e, const EClass& cls, const std::string& path, std::optional<ContainerLink> container,
                   const Namespaces& ns) {
    if (!is_instantiable(cls)) fail(XmiErrc::AbstractClass, "class '" + cls.name + "' cannot be instantiated", e.line);
    const std::string xmiPrefix = prefix_for(ns, kXmiUri);
    const std::string xsiPrefix = prefix_for(ns, kXsiUri);
    const auto& fs = m_.features(cls);

    InstanceObject obj;
    obj.id = path;
    obj.eClass = cls.name;
    obj.classIndex = cls.index;
    obj.container = std::move(container);
    InstanceObject* self = model_.add(std::move(obj));
    if (!self) fail(XmiErrc::UnresolvableFragmentPath, "duplicate object path " + path, e.line);
    aliases_[path] = path;
    const std::size_t selfIndex = model_.size() - 1;
    auto me = [&]() -> InstanceObject& { return model_.objects()[selfIndex]; };

    for (const auto& [key, value] : e.attributes) {
      std::string_view k = key;
      if (k == "xmlns" || k.rfind("xmlns:", 0) == 0) continue;
      auto colon = k.find(':');
      if (colon != std::string_view::npos) {
        auto p = k.substr(0, colon);
        if (p == xmiPrefix || p == xsiPrefix) continue;
      }
      if (const auto* a = fs.attribute(k)) {
        if (a->many()) {
          for (const auto& tok : split_ws(value)) add_value(me(), *a, tok, e.line);
        } else {
          add_value(me(), *a, value, e.line);
        }
      } else if (const auto* r = fs.reference(k); r && !r->containment) {
        pending_.push_back({path, r, split_ws(value), e.line});
      } else {
        fail(XmiErrc::UnknownFeature, "'" + key + "' is not an attribute or cross reference of '" + cls.name + "'", e.line);
      }
    }

    std::map<std::string, std::size_t> childCount;
    for (const auto& c : e.children) {
      const std::string feature{c.local_name()};
      if (const auto* a = fs.attribute(feature)) {
        add_value(me(), *a, c.text, c.line);
        continue;
      }
      const auto* r = fs.reference(feature);
      if (!r || !r->containment)
        fail(XmiErrc::UnknownFeature, "<" + c.name + "> is not a containment or attribute of '" + cls.name + "'", c.line);
      Namespaces inner = scoped(ns, c);
      const EClass* childCls = &m_.classes()[r->targetIndex];
      const std::string innerXsi = prefix_for(inner, kXsiUri);
      if (const auto* t = c.attribute(innerXsi.empty() ? "xsi:type" : innerXsi + ":type")) {
        childCls = &class_for_qname(inner, *t, c.line);
        if (!m_.conforms(*childCls, m_.classes()[r->targetIndex]))
          fail(XmiErrc::TypeNonConforming, "'" + childCls->name + "' does not conform to '" + r->targetClass + "'", c.line);
      }
      std::size_t idx = childCount[feature]++;
      if (r->upperBound != kUnbounded && idx >= static_cast<std::size_t>(r->upperBound))
        fail(XmiErrc::MultiplicityViolation, "too many children in '" + feature + "'", c.line);
      std::string childPath = path + "/@" + feature;
      if (r->many()) childPath += "." + std::to_string(idx);
      else aliases_[childPath + ".0"] = childPath;
      me().refTargets[feature].push_back(childPath);
      read_object(c, *childCls, childPath, ContainerLink{path, feature}, inner);
    }
  }

  void resolve_references() {
    for (const auto& p : pending_) {
      for (auto tok : p.tokens) {
        if (!tok.empty() && tok.front() == '#') tok.erase(0, 1);
        auto it = aliases_.find(tok);
        if (it == aliases_.end()) fail(XmiErrc::UnresolvableFragmentPath, "no object at '" + tok + "'", p.line);
        const InstanceObject* target = model_.find(it->second);
        const EClass& tc = m_.classes()[target->classIndex];
        if (!m_.conforms(tc, m_.classes()[p.ref->targetIndex]))
          fail(XmiErrc::TypeNonConforming, "'" + tc.name + "' does not conform to '" + p.ref->targetClass + "'", p.line);
        auto& slot = model_.find(p.owner)->refTargets[p.ref->name];
        if (std::find(slot.begin(), slot.end(), target->id) != slot.end())
          fail(XmiErrc::InvalidValue, "'" + p.ref->name + "' lists '" + tok + "' twice", p.line);
        if (p.ref->upperBound != kUnbounded && slot.size() >= static_cast<std::size_t>(p.ref->upperBound))
          fail(XmiErrc::MultiplicityViolation, "too many targets for '" + p.ref->name + "'", p.line);
        slot.push_back(target->id);
      }
    }
  }

  const MetaModel& m_;
  InstanceModel model_;
  std::unordered_map<std::string, std::string> aliases_;  // fragment path -> object id
  std::vector<Pending> pending_;
};

}  // namespace

std::string_view to_string(XmiErrc code) noexcept {
  switch (code) {
    case XmiErrc::MalformedXml: return "MalformedXml";
    case XmiErrc::NoNamespace: return "NoNamespace";
    case XmiErrc::NamespaceMismatch: return "NamespaceMismatch";
    case XmiErrc::UnknownElementClass: return "UnknownElementClass";
    case XmiErrc::UnknownFeature: return "UnknownFeature";
    case XmiErrc::AbstractClass: return "AbstractClass";
    case XmiErrc::InvalidValue: return "InvalidValue";
    case XmiErrc::TypeNonConforming: return "TypeNonConforming";
    case XmiErrc::MultiplicityViolation: return "MultiplicityViolation";
    case XmiErrc::UnresolvableFragmentPath: return "UnresolvableFragmentPath";
  }
  return "Unknown";
}

XmiError::XmiError(XmiErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::string serialize_xmi(const InstanceModel& model, const MetaModel& m) {
  if (m.packages().empty() || m.root_package().nsURI.empty())
    throw XmiError(XmiErrc::NoNamespace, "metamodel has no namespace URI");
  return XmiWriter(model, m).write();
}

std::string serialize_xmi(const CompileReport& report, const MetaModel& m) { return serialize_xmi(report.model, m); }

InstanceModel parse_xmi(std::string_view xmiText, const MetaModel& m) { return XmiReader(m).read(xmiText); }

}  // namespace cimc
