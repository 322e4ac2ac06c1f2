// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <unordered_map>

#include "cimc/evaluator.hpp"

namespace cimc {

namespace {

constexpr char kSep = '\x1f';

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::optional<std::string> name_like(const InstanceObject& o) {
  for (const char* attr : {"name", "id", "label"}) {
    const auto* vs = o.values(attr);
    if (vs == nullptr || vs->empty()) continue;
    std::string v = trim(render_value(vs->front()));
    if (!v.empty()) return v;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CanonicalElementSet::Tuple> CanonicalElementSet::tuples() const {
  std::vector<Tuple> out;
  out.reserve(size());
  for (const auto& o : objects) out.emplace_back("O", o.key(), "");
  for (const auto& a : attributes) out.emplace_back("A", objects[a.owner].key() + kSep + a.name, a.value);
  for (const auto& r : associations)
    out.emplace_back("R", objects[r.owner].key() + kSep + r.name, objects[r.target].key());
  std::sort(out.begin(), out.end());
  return out;
}

CanonicalElementSet canonicalize(const InstanceModel& model, const MetaModel& m) {
  CanonicalElementSet set;
  std::unordered_map<std::string, std::size_t> index;
  std::unordered_map<std::string, std::size_t> ordinals;
  const auto order = document_order(model, m);
  for (const auto& id : order) {
    const InstanceObject& o = *model.find(id);
    CanonicalObject c;
    c.className = o.eClass;
    if (auto n = name_like(o)) {
      c.nameKey = std::move(*n);
    } else {
      c.nameKey = o.eClass + "#" + std::to_string(ordinals[o.eClass]++);
      c.ordinal = true;
      ++set.ordinalSignatures;
    }
    index.emplace(id, set.objects.size());
    set.objects.push_back(std::move(c));
  }
  for (const auto& id : order) {
    const InstanceObject& o = *model.find(id);
    const std::size_t owner = index.at(id);
    for (const auto& [name, values] : o.attrValues)
      for (const auto& v : values) set.attributes.push_back({owner, name, render_value(v)});
    for (const auto& [name, targets] : o.refTargets)
      for (const auto& t : targets) set.associations.push_back({owner, name, index.at(t)});
  }
  return set;
}

}  // namespace cimc
