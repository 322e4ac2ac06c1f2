// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and test-side oracles.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cimc/cim.hpp"
#include "cimc/ecore.hpp"
#include "cimc/evaluator.hpp"
#include "cimc/instance.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cimc::test {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(CIMC_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }

inline MetaModel load_fixture_metamodel(const std::string& name) { return parse_ecore(fixture(name)); }

// Minimal Ecore document around the given classifier elements.
inline std::string ecore_doc(const std::string& body, const std::string& name = "t") {
  return R"(<?xml version="1.0" encoding="UTF-8"?>
<ecore:EPackage xmi:version="2.0" xmlns:xmi="http://www.omg.org/XMI" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xmlns:ecore="http://www.eclipse.org/emf/2002/Ecore" name=")" +
         name + R"(" nsURI="http://example.org/)" + name + R"(" nsPrefix=")" + name + R"(">
)" + body + "\n</ecore:EPackage>\n";
}

// Decimal parse written without the library's helpers.
inline std::optional<std::int64_t> oracle_parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

// True when following container links from any object ever revisits it.
inline bool containment_has_cycle(const InstanceModel& model) {
  for (const auto& o : model.objects()) {
    std::set<std::string> seen{o.id};
    const InstanceObject* cur = &o;
    while (cur->container) {
      if (!seen.insert(cur->container->parentId).second) return true;
      cur = model.find(cur->container->parentId);
      if (cur == nullptr) break;
    }
  }
  return false;
}

// Maximum bipartite matching by exhaustive search over injective assignments.
inline std::size_t brute_force_max_matching(std::size_t left, std::size_t right,
                                            const std::function<bool(std::size_t, std::size_t)>& edge) {
  std::vector<bool> used(right, false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t count) {
    if (count + (left - i) <= best) return;
    if (i == left) {
      best = std::max(best, count);
      return;
    }
    for (std::size_t j = 0; j < right; ++j) {
      if (used[j] || !edge(i, j)) continue;
      used[j] = true;
      go(i + 1, count + 1);
      used[j] = false;
    }
    go(i + 1, count);
  };
  go(0, 0);
  return best;
}

// Random CIMs over a metamodel: concrete classes, well-typed values, a
// containment forest that respects upper bounds, conforming references.
// With `noise`, some elements are deliberately broken.
class RandomCimGenerator {
 public:
  RandomCimGenerator(const MetaModel& m, std::uint32_t seed) : m_(m), rng_(seed) {
    for (const auto& c : m.classes())
      if (is_instantiable(c)) concrete_.push_back(&c);
  }

  ConceptualInstanceModel next(std::size_t maxObjects = 12, bool noise = false) {
    ConceptualInstanceModel cim;
    const std::size_t n = uniform(0, maxObjects);
    std::vector<std::pair<std::string, const EClass*>> objs;
    for (std::size_t i = 0; i < n; ++i) {
      const EClass* c = concrete_[uniform(0, concrete_.size() - 1)];
      objs.emplace_back("o" + std::to_string(i), c);
    }
    std::vector<ObjectSpec> specs(n);
    std::map<std::string, std::map<std::string, std::size_t>> used;  // per owner, per feature
    for (std::size_t i = 0; i < n; ++i) {
      specs[i].type = objs[i].second->name;
      fill_attributes(*objs[i].second, specs[i], i, noise);
    }
    // Containment: each object picks at most one earlier parent.
    for (std::size_t i = 0; i < n; ++i) {
      if (chance(0.3)) continue;
      std::vector<std::pair<std::size_t, const EReference*>> options;
      for (std::size_t p = 0; p < i; ++p)
        for (const auto* r : m_.features(*objs[p].second).references)
          if (r->containment && m_.conforms(*objs[i].second, m_.classes()[r->targetIndex]) &&
              fits(used[objs[p].first][r->name], *r))
            options.emplace_back(p, r);
      if (options.empty()) continue;
      const auto& [p, r] = options[uniform(0, options.size() - 1)];
      ++used[objs[p].first][r->name];
      specs[p].compositions.push_back({r->name, objs[i].second->name, objs[i].first});
    }
    // Cross references.
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto* r : m_.features(*objs[i].second).references) {
        if (r->containment) continue;
        const std::size_t want = r->many() ? uniform(0, 3) : uniform(0, 1);
        for (std::size_t k = 0; k < want; ++k) {
          std::vector<std::size_t> targets;
          for (std::size_t t = 0; t < n; ++t)
            if (m_.conforms(*objs[t].second, m_.classes()[r->targetIndex])) targets.push_back(t);
          if (targets.empty() || !fits(used[objs[i].first][r->name], *r)) break;
          const std::size_t t = targets[uniform(0, targets.size() - 1)];
          bool dup = false;
          for (const auto& l : specs[i].references) dup = dup || (l.associationName == r->name && l.targetInstanceID == objs[t].first);
          if (dup) continue;
          ++used[objs[i].first][r->name];
          specs[i].references.push_back({r->name, objs[t].second->name, objs[t].first});
        }
      }
      if (noise && chance(0.1)) specs[i].references.push_back({"noSuchReference", "X", "o0"});
    }
    if (noise && n > 0 && chance(0.2)) specs[0].type = "NoSuchClass";
    for (std::size_t i = 0; i < n; ++i) cim.insert(objs[i].first, std::move(specs[i]));
    return cim;
  }

 private:
  static std::string type_label(const DataType& t) {
    switch (t.kind) {
      case DataKind::Int: return "EInt";
      case DataKind::Float: return "EDouble";
      case DataKind::Boolean: return "EBoolean";
      case DataKind::Enum: return t.enumName;
      case DataKind::String: break;
    }
    return "EString";
  }

  static bool fits(std::size_t count, const EReference& r) {
    return r.upperBound == kUnbounded || count < static_cast<std::size_t>(r.upperBound);
  }

  void fill_attributes(const EClass& c, ObjectSpec& spec, std::size_t i, bool noise) {
    for (const auto* a : m_.features(c).attributes) {
      if (chance(0.2)) continue;
      const std::size_t count = a->many() ? uniform(1, 3) : 1;
      for (std::size_t k = 0; k < count; ++k)
        spec.attributes.push_back({type_label(a->type), a->name, random_value(*a, i)});
    }
    if (noise && chance(0.15)) spec.attributes.push_back({"EString", "noSuchAttribute", "x"});
    if (noise && chance(0.15)) {
      for (const auto* a : m_.features(c).attributes)
        if (a->type.kind == DataKind::Int) {
          spec.attributes.push_back({"EInt", a->name, "not-a-number"});
          break;
        }
    }
  }

  std::string random_value(const EAttribute& a, std::size_t i) {
    switch (a.type.kind) {
      case DataKind::Int: return std::to_string(static_cast<long long>(uniform(0, 2000)) - 1000);
      case DataKind::Float: {
        static const char* kFloats[] = {"0.5", "2.25", "-3", "1e3", "3.141592653589793", "0.1"};
        return kFloats[uniform(0, 5)];
      }
      case DataKind::Boolean: return chance(0.5) ? "true" : "false";
      case DataKind::Enum: {
        const EEnum* e = m_.find_enum(a.type.enumName);
        return e->literals[uniform(0, e->literals.size() - 1)];
      }
      case DataKind::String: break;
    }
    if (a.name == "name" && chance(0.25)) return "";  // unnamed: ordinal signature
    static const char* kWords[] = {"alpha", "beta", "x & y", "<tag>", "quote \"q\"", "tab\tsep", "ünï"};
    if (a.name == "name") return "n" + std::to_string(i) + (chance(0.2) ? std::string(" ") + kWords[uniform(0, 6)] : "");
    return kWords[uniform(0, 6)];
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  const MetaModel& m_;
  std::mt19937 rng_;
  std::vector<const EClass*> concrete_;
};

// Local chat-completions endpoint with a configurable handler.
class MockChatServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit MockChatServer(Handler handler) {
    server_.Post(R"(/v1/chat/completions)", [this, handler](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        requests_.push_back(req.body);
        headers_.push_back(req.get_header_value("Authorization"));
      }
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockChatServer() {
    server_.stop();
    thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::vector<std::string> requests() {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::vector<std::string> auth_headers() {
    std::lock_guard lock(mu_);
    return headers_;
  }

  static std::string completion(const std::string& content) {
    nlohmann::json j = {{"id", "x"},
                        {"object", "chat.completion"},
                        {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
    return j.dump();
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::string> requests_;
  std::vector<std::string> headers_;
};

}  // namespace cimc::test
