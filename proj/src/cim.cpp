// SPDX-License-Identifier: Apache-2.0

#include "cimc/cim.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cimc {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTemplate = R"({
 "<InstanceID>": {
  "type": "<ClassName>",
  "attributes": [
   {
    "dataType": "<DataType>",
    "attributeName": "<AttributeName>",
    "value": "<Value>"
   }
  ],
  "associations": {
   "compositions": [
    {
     "associationName": "<AssociationName>",
     "associatedClassName": "<ClassName>",
     "instanceID": "<InstanceID>"
    }
   ],
   "references": [
    {
     "associationName": "<AssociationName>",
     "associatedClassName": "<ClassName>",
     "instanceID": "<InstanceID>"
    }
   ]
  }
 }
})";

std::string strip_fence_lines(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto pos = line.find_first_not_of(" \t");
    if (pos != std::string::npos && line.compare(pos, 3, "```") == 0) line.clear();
    if (!first) out += '\n';
    out += line;
    first = false;
  }
  return out;
}

// End index (inclusive) of the object opening at `start`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t start) {
  int depth = 0;
  bool inString = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (inString) {
      if (c == '\\') ++i;
      else if (c == '"') inString = false;
      continue;
    }
    if (c == '"') inString = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

std::optional<std::string> string_field(const ojson& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

class CimReader {
 public:
  CimParseResult read(std::string_view text) {
    std::vector<std::string> topKeys;
    ojson root;
    try {
      root = ojson::parse(text, [&](int depth, ojson::parse_event_t ev, ojson& parsed) {
        if (depth == 1 && ev == ojson::parse_event_t::key) topKeys.push_back(parsed.get<std::string>());
        return true;
      });
    } catch (const ojson::parse_error& e) {
      throw CimError(CimErrc::InvalidJson, e.what());
    }
    if (!root.is_object()) throw CimError(CimErrc::NotAJsonObject, std::string("top-level JSON value is ") + root.type_name());

    std::set<std::string> seen;
    for (const auto& k : topKeys)
      if (!seen.insert(k).second)
        res_.diagnostics.push_back(warning(DiagCode::DuplicateInstanceId,
                                           "instance id defined more than once; the last definition is used", k));

    res_.sourceObjects = root.size();
    for (const auto& [id, body] : root.items()) read_object(id, body);
    res_.droppedObjects = res_.sourceObjects - res_.model.size();
    return std::move(res_);
  }

 private:
  void diag(Diagnostic d) { res_.diagnostics.push_back(std::move(d)); }

  void read_object(const std::string& id, const ojson& body) {
    if (!body.is_object()) {
      diag(error(DiagCode::MalformedObject, std::string("object spec is a JSON ") + body.type_name(), id));
      return;
    }
    auto type = string_field(body, "type");
    if (!type || type->empty()) {
      diag(error(DiagCode::MissingTypeField, "object has no non-empty \"type\"; dropped", id));
      return;
    }
    ObjectSpec spec;
    spec.type = *type;
    for (const auto& [key, value] : body.items()) {
      if (key == "type") continue;
      if (key == "attributes") {
        read_attributes(id, value, spec);
      } else if (key == "associations") {
        read_associations(id, value, spec);
      } else if (key == "compositions" || key == "references") {
        diag(warning(DiagCode::AssociationsAlias, "\"" + key + "\" outside \"associations\" accepted", id));
        read_links(id, key, value, key == "compositions" ? spec.compositions : spec.references);
      } else {
        diag(warning(DiagCode::UnknownKey, "ignored key \"" + key + "\"", id));
      }
    }
    res_.model.insert(id, std::move(spec));
  }

  void read_attributes(const std::string& id, const ojson& arr, ObjectSpec& spec) {
    if (!arr.is_array()) {
      diag(error(DiagCode::MalformedAttribute, "\"attributes\" is not a list", id));
      return;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& a = arr[i];
      auto bad = [&](std::string why, std::optional<std::string> feature = std::nullopt) {
        auto d = error(DiagCode::MalformedAttribute, std::move(why), id, std::move(feature));
        d.elementIndex = i;
        diag(std::move(d));
      };
      if (!a.is_object()) {
        bad("attribute entry is not an object");
        continue;
      }
      auto name = string_field(a, "attributeName");
      if (!name || name->empty()) {
        bad("attribute entry without \"attributeName\"");
        continue;
      }
      AttributeSpec as;
      as.attributeName = *name;
      as.dataType = string_field(a, "dataType").value_or("");
      auto v = a.find("value");
      if (v == a.end() || v->is_null()) {
        diag(warning(DiagCode::NullValue, "missing or null value read as empty string", id, *name));
      } else if (v->is_string()) {
        as.value = v->get<std::string>();
      } else if (v->is_boolean()) {
        as.value = v->get<bool>() ? "true" : "false";
      } else if (v->is_number()) {
        as.value = v->dump();
      } else {
        bad("value is a JSON " + std::string(v->type_name()) + ", expected a scalar", *name);
        continue;
      }
      for (const auto& [k, _] : a.items())
        if (k != "attributeName" && k != "dataType" && k != "value")
          diag(warning(DiagCode::UnknownKey, "ignored attribute key \"" + k + "\"", id, *name));
      spec.attributes.push_back(std::move(as));
    }
  }

  void read_associations(const std::string& id, const ojson& obj, ObjectSpec& spec) {
    if (!obj.is_object()) {
      diag(error(DiagCode::MalformedLink, "\"associations\" is not an object", id));
      return;
    }
    for (const auto& [key, value] : obj.items()) {
      if (key == "compositions") read_links(id, key, value, spec.compositions);
      else if (key == "references") read_links(id, key, value, spec.references);
      else diag(warning(DiagCode::UnknownKey, "ignored association key \"" + key + "\"", id));
    }
  }

  void read_links(const std::string& id, const std::string& section, const ojson& arr, std::vector<LinkSpec>& out) {
    if (arr.is_null()) return;
    if (!arr.is_array()) {
      diag(error(DiagCode::MalformedLink, "\"" + section + "\" is not a list", id));
      return;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& l = arr[i];
      auto name = l.is_object() ? string_field(l, "associationName") : std::nullopt;
      auto target = l.is_object() ? string_field(l, "instanceID") : std::nullopt;
      if (!name || name->empty() || !target || target->empty()) {
        auto d = error(DiagCode::MalformedLink,
                       section + " entry needs non-empty \"associationName\" and \"instanceID\"", id, name);
        d.elementIndex = i;
        diag(std::move(d));
        continue;
      }
      LinkSpec ls{*name, string_field(l, "associatedClassName").value_or(""), *target};
      for (const auto& [k, _] : l.items())
        if (k != "associationName" && k != "associatedClassName" && k != "instanceID")
          diag(warning(DiagCode::UnknownKey, "ignored link key \"" + k + "\"", id, *name));
      out.push_back(std::move(ls));
    }
  }

  CimParseResult res_;
};

ojson link_json(const LinkSpec& l) {
  ojson j;
  j["associationName"] = l.associationName;
  j["associatedClassName"] = l.associatedClassName;
  j["instanceID"] = l.targetInstanceID;
  return j;
}

}  // namespace

bool ConceptualInstanceModel::insert(std::string id, ObjectSpec spec) {
  if (contains(id)) return false;
  entries_.emplace_back(std::move(id), std::move(spec));
  return true;
}

void ConceptualInstanceModel::insert_or_assign(std::string id, ObjectSpec spec) {
  for (auto& [k, v] : entries_)
    if (k == id) {
      v = std::move(spec);
      return;
    }
  entries_.emplace_back(std::move(id), std::move(spec));
}

const ObjectSpec* ConceptualInstanceModel::find(std::string_view id) const noexcept {
  for (const auto& [k, v] : entries_)
    if (k == id) return &v;
  return nullptr;
}

std::string_view to_string(CimErrc code) noexcept {
  switch (code) {
    case CimErrc::InvalidJson: return "InvalidJson";
    case CimErrc::NotAJsonObject: return "NotAJsonObject";
    case CimErrc::NoJsonFound: return "NoJsonFound";
  }
  return "Unknown";
}

CimError::CimError(CimErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::string extract_json_payload(std::string_view llmOutput) {
  const std::string text = strip_fence_lines(llmOutput);
  for (std::size_t start = text.find('{'); start != std::string::npos; start = text.find('{', start + 1)) {
    auto end = balanced_end(text, start);
    if (end == std::string::npos) continue;
    std::string candidate = text.substr(start, end - start + 1);
    if (ojson::accept(candidate)) return candidate;
  }
  throw CimError(CimErrc::NoJsonFound, "no balanced JSON object in model output");
}

CimParseResult parse_cim(std::string_view jsonText) { return CimReader{}.read(jsonText); }

std::vector<Diagnostic> validate_structure(const ConceptualInstanceModel& cim) {
  std::vector<Diagnostic> out;
  for (const auto& [id, spec] : cim) {
    auto check = [&](const std::vector<LinkSpec>& links, bool composition) {
      for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        if (!cim.contains(l.targetInstanceID)) {
          auto d = error(DiagCode::DanglingTargetId, "link targets unknown instance id \"" + l.targetInstanceID + "\"", id,
                         l.associationName);
          d.elementIndex = i;
          out.push_back(std::move(d));
        } else if (composition && l.targetInstanceID == id) {
          auto d = error(DiagCode::SelfComposition, "object composes itself", id, l.associationName);
          d.elementIndex = i;
          out.push_back(std::move(d));
        }
      }
    };
    check(spec.compositions, true);
    check(spec.references, false);
  }
  return out;
}

std::string write_cim(const ConceptualInstanceModel& cim) {
  ojson root = ojson::object();
  for (const auto& [id, spec] : cim) {
    ojson o;
    o["type"] = spec.type;
    o["attributes"] = ojson::array();
    for (const auto& a : spec.attributes) {
      ojson aj;
      aj["dataType"] = a.dataType;
      aj["attributeName"] = a.attributeName;
      aj["value"] = a.value;
      o["attributes"].push_back(std::move(aj));
    }
    ojson assoc;
    assoc["compositions"] = ojson::array();
    assoc["references"] = ojson::array();
    for (const auto& l : spec.compositions) assoc["compositions"].push_back(link_json(l));
    for (const auto& l : spec.references) assoc["references"].push_back(link_json(l));
    o["associations"] = std::move(assoc);
    root[id] = std::move(o);
  }
  return root.dump(1) + "\n";
}

std::string_view cim_template() noexcept { return kTemplate; }

}  // namespace cimc
