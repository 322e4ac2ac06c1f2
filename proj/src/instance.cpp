// SPDX-License-Identifier: Apache-2.0

#include "cimc/instance.hpp"

#include <charconv>
#include <cmath>
#include <regex>

namespace cimc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

}  // namespace

std::string render_value(const Value& v) {
  return std::visit(overloaded{
                        [](std::int64_t i) { return std::to_string(i); },
                        [](double d) {
                          char buf[64];
                          auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
                          return std::string(buf, end);
                        },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const std::string& s) { return s; },
                        [](const EnumLiteral& e) { return e.literal; },
                    },
                    v);
}

std::optional<Value> coerce_value(std::string_view raw, const DataType& type, const MetaModel& m) {
  static const std::regex kInt{R"([+-]?[0-9]+)"};
  static const std::regex kFloat{R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?)"};
  switch (type.kind) {
    case DataKind::String:
      return Value{std::string(raw)};
    case DataKind::Int: {
      if (!std::regex_match(raw.begin(), raw.end(), kInt)) return std::nullopt;
      std::string_view digits = raw;
      if (digits.front() == '+') digits.remove_prefix(1);
      std::int64_t out = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
      return Value{out};
    }
    case DataKind::Float: {
      if (!std::regex_match(raw.begin(), raw.end(), kFloat)) return std::nullopt;
      std::string_view digits = raw;
      if (digits.front() == '+') digits.remove_prefix(1);
      double out = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || !std::isfinite(out)) return std::nullopt;
      return Value{out};
    }
    case DataKind::Boolean:
      if (iequals(raw, "true")) return Value{true};
      if (iequals(raw, "false")) return Value{false};
      return std::nullopt;
    case DataKind::Enum: {
      const auto* e = m.find_enum(type.enumName);
      if (e == nullptr || !e->has_literal(raw)) return std::nullopt;
      return Value{EnumLiteral{std::string(raw)}};
    }
  }
  return std::nullopt;
}

const std::vector<Value>* InstanceObject::values(std::string_view feature) const {
  auto it = attrValues.find(std::string(feature));
  return it == attrValues.end() ? nullptr : &it->second;
}

const std::vector<std::string>* InstanceObject::targets(std::string_view feature) const {
  auto it = refTargets.find(std::string(feature));
  return it == refTargets.end() ? nullptr : &it->second;
}

InstanceObject* InstanceModel::add(InstanceObject obj) {
  if (index_.count(obj.id)) return nullptr;
  index_.emplace(obj.id, objects_.size());
  objects_.push_back(std::move(obj));
  return &objects_.back();
}

InstanceObject* InstanceModel::find(std::string_view id) noexcept {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &objects_[it->second];
}

const InstanceObject* InstanceModel::find(std::string_view id) const noexcept {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &objects_[it->second];
}

void InstanceModel::recompute_roots() {
  roots_.clear();
  for (const auto& o : objects_)
    if (!o.container) roots_.push_back(o.id);
}

std::vector<std::string> document_order(const InstanceModel& model, const MetaModel& m) {
  std::vector<std::string> out;
  out.reserve(model.size());
  auto visit = [&](auto&& self, const InstanceObject& o) -> void {
    out.push_back(o.id);
    const auto& fs = m.features(m.classes()[o.classIndex]);
    for (const auto* r : fs.references) {
      if (!r->containment) continue;
      const auto* kids = o.targets(r->name);
      if (!kids) continue;
      for (const auto& k : *kids)
        if (const auto* child = model.find(k)) self(self, *child);
    }
  };
  for (const auto& r : model.roots())
    if (const auto* o = model.find(r)) visit(visit, *o);
  return out;
}

}  // namespace cimc
