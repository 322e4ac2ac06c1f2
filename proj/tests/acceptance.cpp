// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "cimc/compiler.hpp"
#include "cimc/evaluator.hpp"
#include "cimc/llm.hpp"
#include "cimc/plantuml.hpp"
#include "cimc/xmi.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace cimc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    } else if (!cond) {
      detail += "; " + what;
    }
  }
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::cout << "AC" << n << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << title;
  if (!o.detail.empty()) std::cout << "  [" << o.detail << ']';
  std::cout << std::endl;
}

int run_cli(const std::string& args, const fs::path& logDir) {
  const std::string cmd = std::string("\"") + CIMC_CLI_PATH + "\" " + args + " >\"" + (logDir / "stdout.txt").string() +
                          "\" 2>\"" + (logDir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string obj(const std::string& id, const std::string& type, const std::string& attrs = "",
                const std::string& comps = "", const std::string& refs = "") {
  return "\"" + id + "\": {\"type\": \"" + type + "\", \"attributes\": [" + attrs +
         "], \"associations\": {\"compositions\": [" + comps + "], \"references\": [" + refs + "]}}";
}

std::string at(const std::string& name, const std::string& value, const std::string& type = "") {
  return "{\"dataType\": \"" + type + "\", \"attributeName\": \"" + name + "\", \"value\": \"" + value + "\"}";
}

std::string link(const std::string& name, const std::string& cls, const std::string& target) {
  return "{\"associationName\": \"" + name + "\", \"associatedClassName\": \"" + cls + "\", \"instanceID\": \"" + target +
         "\"}";
}

// All regular files under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = test::read_file(e.path());
  return files;
}

Outcome ac1() {
  Outcome o;
  const auto t0 = Clock::now();
  const MetaModel m = test::load_fixture_metamodel("alloc.ecore");
  const auto parsed = parse_cim(test::fixture("alloc_sample.cim.json"));
  const auto report = compile(m, parsed.model);
  o.require(!has_errors(parsed.diagnostics) && !report.has_errors(), "error diagnostics");
  const InstanceModel back = parse_xmi(serialize_xmi(report, m), m);
  o.require(back.size() == 9, "object count " + std::to_string(back.size()));
  const auto named = [&](const std::string& name) -> const InstanceObject* {
    for (const auto& obj : back.objects())
      if (const auto* v = obj.values("name"); v && std::get<std::string>(v->front()) == name) return &obj;
    return nullptr;
  };
  const auto* core0 = named("core0");
  const auto* vm1 = named("VM1");
  const auto* app1 = named("app1");
  o.require(core0 && vm1 && app1, "named objects missing");
  if (core0 && vm1 && app1) {
    o.require(core0->targets("assignment") && *core0->targets("assignment") == std::vector<std::string>{vm1->id},
              "core0 -> VM1");
    o.require(vm1->targets("hosting") && *vm1->targets("hosting") == std::vector<std::string>{app1->id}, "VM1 -> app1");
  }
  const double s = seconds_since(t0);
  o.require(s < 1.0, "runtime " + std::to_string(s));
  if (o.pass) o.detail = "GA " + report.ga().str() + ", " + std::to_string(s) + " s";
  return o;
}

Outcome ac2() {
  struct Case {
    const char* metamodel;
    std::string cim;
    DiagCode code;
  };
  const std::vector<Case> cases = {
      {"library.ecore", "{" + obj("lib", "Library") + "," + obj("it", "Item") + "}", DiagCode::AbstractClass},
      {"alloc.ecore", "{" + obj("b", "Board") + "," + obj("s", "Spaceship") + "}", DiagCode::UnknownClass},
      {"alloc.ecore", "{" + obj("b", "Board", at("name", "b") + "," + at("color", "red")) + "}", DiagCode::UnknownAttribute},
      {"alloc.ecore", "{" + obj("c", "Core", at("frequency", "fast", "EInt")) + "}", DiagCode::ValueCoercionFailed},
      {"alloc.ecore", "{" + obj("c", "Core", "", "", link("assignment", "VM", "VM9")) + "}", DiagCode::DanglingTarget},
      {"alloc.ecore",
       "{" + obj("b1", "Board", "", link("cpu", "CPU", "cpu0")) + "," + obj("b2", "Board", "", link("cpu", "CPU", "cpu0")) +
           "," + obj("cpu0", "CPU") + "}",
       DiagCode::SecondContainer},
      {"statemachine.ecore",
       "{" + obj("a", "CompositeState", "", link("region", "CompositeState", "b")) + "," +
           obj("b", "CompositeState", "", link("region", "CompositeState", "a")) + "}",
       DiagCode::ContainmentCycle},
  };
  Outcome o;
  for (const auto& c : cases) {
    const MetaModel m = test::load_fixture_metamodel(c.metamodel);
    const auto report = compile(m, parse_cim(c.cim).model);
    std::vector<DiagCode> errors;
    for (const auto& d : report.diagnostics)
      if (d.is_error()) errors.push_back(d.code);
    const auto total = report.elementCounts.total();
    const std::string name(to_string(c.code));
    o.require(errors.size() == 1 && errors[0] == c.code, name + ": wrong diagnostics");
    o.require(total.attempted - total.accepted == 1, name + ": rejected count");
  }
  if (o.pass) o.detail = std::to_string(cases.size()) + " cases";
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t runs = 0, bad = 0;
  for (const char* name : {"alloc.ecore", "library.ecore", "statemachine.ecore"}) {
    const MetaModel m = test::load_fixture_metamodel(name);
    test::RandomCimGenerator gen(m, 4242);
    for (int i = 0; i < 200; ++i, ++runs) {
      const auto report = compile(m, gen.next(12, i % 3 == 0));
      try {
        if (!(canonicalize(parse_xmi(serialize_xmi(report, m), m), m) == canonicalize(report.model, m))) ++bad;
      } catch (const std::exception&) {
        ++bad;
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(bad == 0, std::to_string(bad) + " roundtrip failures");
  o.require(runs >= 500, "too few runs");
  o.require(s < 30.0, "runtime " + std::to_string(s));
  if (o.pass) o.detail = std::to_string(runs) + " models, " + std::to_string(s) + " s";
  return o;
}

CanonicalElementSet random_set(std::mt19937& rng, std::size_t maxObjects) {
  CanonicalElementSet s;
  const std::size_t n = rng() % (maxObjects + 1);
  for (std::size_t i = 0; i < n; ++i)
    s.objects.push_back({std::string(1, static_cast<char>('A' + rng() % 2)), "n" + std::to_string(rng() % 5), false});
  for (std::size_t i = 0; n > 0 && i < 2 * n; ++i) {
    if (rng() % 2) s.attributes.push_back({rng() % n, "v", std::to_string(rng() % 3)});
    if (rng() % 2) s.associations.push_back({rng() % n, "r", rng() % n});
  }
  return s;
}

Outcome ac4() {
  Outcome o;
  CanonicalElementSet g, t;
  for (int i = 0; i < 10; ++i) g.objects.push_back({"A", "a" + std::to_string(i), false});
  for (int i = 0; i < 6; ++i) t.objects.push_back({"A", "a" + std::to_string(i), false});
  t.objects.push_back({"A", "b0", false});
  t.objects.push_back({"A", "b1", false});
  const auto r = compute_metrics(match_elements(g, t), g, t).overall;
  o.require(r.sp == Ratio{3, 5} && r.sr == Ratio{3, 4} && r.sa == Ratio{1, 2},
            "got " + r.sp.str() + " " + r.sr.str() + " " + r.sa.str());

  const auto id = compute_metrics(match_elements(g, g), g, g).overall;
  o.require(id.sp == Ratio{1, 1} && id.sr == Ratio{1, 1} && id.sa == Ratio{1, 1}, "identity");

  std::mt19937 rng(31337);
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_set(rng, 8);
    const auto b = random_set(rng, 8);
    const auto m = compute_metrics(match_elements(a, b), a, b);
    for (const auto* c : {&m.objects, &m.attributes, &m.associations, &m.overall})
      if (!(c->sa <= c->sp) || !(c->sa <= c->sr)) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " SA bound violations");
  if (o.pass) o.detail = "SP " + r.sp.str() + ", SR " + r.sr.str() + ", SA " + r.sa.str() + "; 1000 random pairs";
  return o;
}

Outcome ac5() {
  Outcome o;
  std::mt19937 rng(8);
  std::size_t mismatches = 0, trials = 0;
  for (int i = 0; i < 2000; ++i, ++trials) {
    const auto g = random_set(rng, 8);
    const auto t = random_set(rng, 8);
    const auto r = match_elements(g, t);
    const std::size_t best = test::brute_force_max_matching(g.objects.size(), t.objects.size(), [&](auto a, auto b) {
      return g.objects[a].key() == t.objects[b].key();
    });
    std::size_t exact = 0;
    for (const auto& [a, b] : r.objectPairs) exact += g.objects[a].key() == t.objects[b].key() ? 1 : 0;
    if (exact != best) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (o.pass) o.detail = std::to_string(trials) + " fixtures";
  return o;
}

// 24 allocation tasks whose canned replies are the given strings.
void write_mock_dataset(const fs::path& root, const std::function<std::string(int)>& reply) {
  fs::remove_all(root);
  for (int i = 0; i < 24; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "task%02d", i);
    const fs::path d = root / name;
    test::write_file(d / "metamodel.ecore", test::fixture("alloc.ecore"));
    test::write_file(d / "spec.txt", "Allocation scenario " + std::to_string(i) + ".");
    test::write_file(d / "reference.xmi", test::fixture("alloc_sample.reference.xmi"));
    test::write_file(d / "mock_responses.json", nlohmann::json::array({reply(i)}).dump());
  }
}

Outcome ac6(const fs::path& tmp) {
  Outcome o;
  const auto t0 = Clock::now();
  const std::string cim = test::fixture("alloc_sample.cim.json");
  BenchmarkOptions opt;
  opt.config = LlmConfig{};
  opt.config->provider = "mock";
  opt.jobs = 4;

  write_mock_dataset(tmp / "vr_all", [&](int) { return cim; });
  const BatchReport all = run_benchmark(tmp / "vr_all", opt);
  o.require(all.vr == Ratio{24, 24}, "all-valid VR " + all.vr.str());

  write_mock_dataset(tmp / "vr_prose", [&](int i) {
    return i == 7 ? std::string("I am sorry, but I cannot describe this system as requested.") : cim;
  });
  const BatchReport one = run_benchmark(tmp / "vr_prose", opt);
  o.require(one.vr == Ratio{23, 24}, "one-prose VR " + one.vr.str());
  o.require(!one.tasks[7].valid && one.tasks[7].failure.has_value(), "task07 should fail generation");

  const double s = seconds_since(t0);
  o.require(s < 10.0, "runtime " + std::to_string(s));
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "VR %s and %s (%.1f%%), %.2f s", all.vr.str().c_str(), one.vr.str().c_str(),
                  one.vr.value() * 100.0, s);
    o.detail = buf;
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto count = [](const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
  };
  const MetaModel alloc = test::load_fixture_metamodel("alloc.ecore");
  const MetaModel lib = test::load_fixture_metamodel("library.ecore");
  const MetaModel sm = test::load_fixture_metamodel("statemachine.ecore");
  const std::vector<FewShotExample> examples = {
      {render_plantuml(lib).text, "A library called Central.", R"({"central": {"type": "Library"}})"},
      {render_plantuml(sm).text, "A door machine.", test::fixture("sm_sample.cim.json")},
  };
  const PromptBundle b = build_prompt(render_plantuml(alloc).text, "One board.", examples);
  for (const char* line : {"DO NOT infer missing details.", "DO NOT create objects from abstract class."})
    o.require(count(b.systemText, line) == 1, std::string("rule line: ") + line);
  o.require(count(b.systemText, "#### Example\n") == 2, "example block count");
  o.require(b.systemText.find(std::string(cim_template())) != std::string::npos, "template");
  return o;
}

Outcome ac8(const fs::path& tmp) {
  Outcome o;
  const fs::path a = tmp / "det_a", b = tmp / "det_b";
  for (const auto& d : {a, b}) fs::create_directories(d);
  const std::string compileArgs =
      "compile --ecore " + q(test::fixture_path("alloc.ecore")) + " --cim " + q(test::fixture_path("alloc_sample.cim.json"));
  o.require(run_cli(compileArgs + " --out " + q(a / "m.xmi") + " --log " + q(a / "d.jsonl"), a) == 0, "compile run 1");
  o.require(run_cli(compileArgs + " --out " + q(b / "m.xmi") + " --log " + q(b / "d.jsonl"), b) == 0, "compile run 2");
  o.require(test::read_file(a / "m.xmi") == test::read_file(b / "m.xmi"), "compile XMI differs");
  o.require(test::read_file(a / "d.jsonl") == test::read_file(b / "d.jsonl"), "compile log differs");

  const std::string cim = test::fixture("alloc_sample.cim.json");
  write_mock_dataset(tmp / "det_ds", [&](int i) { return i % 5 == 0 ? "Here you go:\n" + cim : cim; });
  test::write_file(tmp / "mock.json", R"({"provider": "mock", "maxRetries": 1})");
  const std::string benchArgs = "bench --dataset " + q(tmp / "det_ds") + " --config " + q(tmp / "mock.json") + " --jobs 4";
  o.require(run_cli(benchArgs + " --out " + q(a / "bench"), a) == 0, "bench run 1");
  o.require(run_cli(benchArgs + " --out " + q(b / "bench"), b) == 0, "bench run 2");
  const auto sa = snapshot(a / "bench"), sb = snapshot(b / "bench");
  o.require(!sa.empty() && sa == sb, "bench outputs differ");
  if (o.pass) o.detail = std::to_string(sa.size() + 2) + " files compared";
  return o;
}

Outcome ac9(const fs::path& tmp) {
  Outcome o;
  const fs::path d = tmp / "live";
  fs::create_directories(d);
  nlohmann::json cfg = {{"provider", "openai"}, {"maxRetries", 2}, {"timeoutSeconds", 120}};
  std::optional<test::MockChatServer> local;
  const char* endpoint = std::getenv("CIMC_LIVE_ENDPOINT");
  if (endpoint && *endpoint) {
    cfg["endpointBaseUrl"] = endpoint;
    const char* model = std::getenv("CIMC_LIVE_MODEL");
    cfg["modelName"] = model ? model : "";
    if (const char* keyVar = std::getenv("CIMC_LIVE_API_KEY_ENV")) cfg["apiKeyEnvVar"] = keyVar;
  } else {
    const std::string cim = test::fixture("alloc_sample.cim.json");
    local.emplace([cim](const httplib::Request&, httplib::Response& res) {
      res.set_content(test::MockChatServer::completion("```json\n" + cim + "\n```"), "application/json");
    });
    cfg["endpointBaseUrl"] = local->base_url();
    cfg["modelName"] = "local-mock";
  }
  test::write_file(d / "cfg.json", cfg.dump());
  test::write_file(d / "spec.txt", test::read_file(fs::path(CIMC_FIXTURE_DIR).parent_path().parent_path() / "data" /
                                                   "sample_dataset" / "allocation" / "spec.txt"));
  const int code = run_cli("generate --ecore " + q(test::fixture_path("alloc.ecore")) + " --spec " + q(d / "spec.txt") +
                               " --config " + q(d / "cfg.json") + " --out " + q(d / "g.xmi") + " --trace " +
                               q(d / "trace.json"),
                           d);
  o.require(code == 0 || code == 1, "exit code " + std::to_string(code));
  o.require(fs::exists(d / "trace.json"), "no trace written");
  if (fs::exists(d / "trace.json")) {
    const auto t = nlohmann::json::parse(test::read_file(d / "trace.json"));
    const bool ok = t["ok"].get<bool>();
    o.require(ok ? fs::exists(d / "g.xmi") : t["failure"].get<std::string>().rfind("GenerationFailed", 0) == 0,
              "trace outcome inconsistent");
    if (ok && fs::exists(d / "g.xmi")) {
      const MetaModel m = test::load_fixture_metamodel("alloc.ecore");
      try {
        (void)parse_xmi(test::read_file(d / "g.xmi"), m);
      } catch (const std::exception& e) {
        o.require(false, std::string("XMI does not reparse: ") + e.what());
      }
    }
    if (o.pass) o.detail = std::string(local ? "local endpoint" : "live endpoint") + ", " + (ok ? "valid XMI" : "GenerationFailed");
  }
  return o;
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / ("cimc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  report(1, "allocation model end-to-end", ac1);
  report(2, "compiler guardrails", ac2);
  report(3, "XMI roundtrip property", ac3);
  report(4, "metric identities", ac4);
  report(5, "matching oracle", ac5);
  report(6, "validity rate in mock mode", [&] { return ac6(tmp); });
  report(7, "prompt fidelity", ac7);
  report(8, "determinism of compile and bench", [&] { return ac8(tmp); });
  report(9, "chat endpoint smoke test", [&] { return ac9(tmp); });

  fs::remove_all(tmp);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
