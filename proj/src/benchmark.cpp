// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "cimc/evaluator.hpp"
#include "cimc/xmi.hpp"
#include "json_util.hpp"
#include "metrics_json.hpp"

namespace cimc {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DatasetLayoutError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::unique_ptr<ChatBackend> default_backend(const fs::path& taskDir, const std::string& name,
                                             const BenchmarkOptions& opt) {
  if (opt.backendFactory) return opt.backendFactory(taskDir);
  if (!opt.config)
    throw DatasetLayoutError("task '" + name + "': no generated.xmi or generated.cim.json and no LLM config given");
  if (opt.config->provider == "mock") {
    std::vector<std::string> replies = opt.config->mockResponses;
    if (fs::exists(taskDir / "mock_responses.json"))
      replies = nlohmann::json::parse(slurp(taskDir / "mock_responses.json")).get<std::vector<std::string>>();
    return std::make_unique<ScriptedChatBackend>(std::move(replies));
  }
  return std::make_unique<HttpChatBackend>(*opt.config);
}

void score(TaskResult& t, const InstanceModel& gen, const InstanceModel& truth, const MetaModel& m,
           const CompileReport* report) {
  const auto g = canonicalize(gen, m);
  const auto gt = canonicalize(truth, m);
  t.metrics = compute_metrics(match_elements(g, gt), g, gt, report);
  t.ordinalSignatures = g.ordinalSignatures > 0 || gt.ordinalSignatures > 0;
}

TaskResult run_task(const fs::path& dir, const BenchmarkOptions& opt) {
  TaskResult t;
  t.name = dir.filename().string();
  std::optional<fs::path> out;
  if (opt.outDir) {
    out = *opt.outDir / "tasks" / t.name;
    fs::create_directories(*out);
  }

  MetaModel m = [&] {
    try {
      return parse_ecore(slurp(dir / "metamodel.ecore"));
    } catch (const EcoreError& e) {
      throw DatasetLayoutError("task '" + t.name + "': metamodel.ecore: " + e.what());
    }
  }();
  InstanceModel truth = [&] {
    try {
      return parse_xmi(slurp(dir / "reference.xmi"), m);
    } catch (const XmiError& e) {
      throw DatasetLayoutError("task '" + t.name + "': reference.xmi: " + e.what());
    }
  }();

  if (fs::exists(dir / "generated.xmi")) {
    t.source = "xmi";
    t.generated = true;
    try {
      InstanceModel gen = parse_xmi(slurp(dir / "generated.xmi"), m);
      t.valid = true;
      score(t, gen, truth, m, nullptr);
    } catch (const XmiError& e) {
      t.failure = std::string("InvalidXmi: ") + e.what();
    }
  } else {
    std::optional<CompileReport> report;
    std::vector<Diagnostic> diags;
    if (fs::exists(dir / "generated.cim.json")) {
      t.source = "cim";
      t.attempts = 0;
      try {
        auto parsed = parse_cim(extract_json_payload(slurp(dir / "generated.cim.json")));
        diags = std::move(parsed.diagnostics);
        auto structural = validate_structure(parsed.model);
        diags.insert(diags.end(), structural.begin(), structural.end());
        report = compile(m, parsed.model);
      } catch (const CimError& e) {
        t.failure = std::string("GenerationFailed: ") + e.what();
      }
    } else {
      t.source = "llm";
      auto backend = default_backend(dir, t.name, opt);
      const LlmConfig cfg = opt.config.value_or(LlmConfig{});
      GenerationTrace trace = generate_instance_model(m, slurp(dir / "spec.txt"), opt.examples, cfg, *backend);
      t.attempts = trace.attempts;
      t.failure = trace.failure;
      diags = trace.cimDiagnostics;
      report = trace.report;
      if (out) put(*out / "trace.json", trace_to_json(trace));
    }
    if (report) {
      t.generated = true;
      diags.insert(diags.end(), report->diagnostics.begin(), report->diagnostics.end());
      t.errorDiagnostics = error_count(report->diagnostics);
      const std::string xmi = serialize_xmi(*report, m);
      bool reparsed = false;
      try {
        parse_xmi(xmi, m);
        reparsed = true;
      } catch (const XmiError& e) {
        t.failure = std::string("InvalidXmi: ") + e.what();
      }
      t.valid = reparsed && (!opt.strictValidity || !report->has_errors());
      score(t, report->model, truth, m, &*report);
      if (out) put(*out / "generated.xmi", xmi);
    }
    if (out) put(*out / "diagnostics.jsonl", to_jsonl(diags));
  }
  if (out && t.metrics) put(*out / "metrics.json", metrics_json(*t.metrics));
  return t;
}

void accumulate(MeanMetrics& mean, const std::vector<const CategoryMetrics*>& cats) {
  if (cats.empty()) return;
  double sp = 0, sr = 0, sa = 0, ga = 0;
  std::size_t gaCount = 0;
  for (const auto* c : cats) {
    sp += c->sp.value();
    sr += c->sr.value();
    sa += c->sa.value();
    if (c->ga) {
      ga += c->ga->value();
      ++gaCount;
    }
  }
  const double n = static_cast<double>(cats.size());
  mean.sp = sp / n;
  mean.sr = sr / n;
  mean.sa = sa / n;
  if (gaCount > 0) mean.ga = ga / static_cast<double>(gaCount);
}

std::string fmt(std::optional<double> v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

detail::ojson mean_json(const MeanMetrics& m) {
  auto opt = [](std::optional<double> v) { return v ? detail::ojson(*v) : detail::ojson(nullptr); };
  return detail::ojson{{"GA", opt(m.ga)}, {"SP", opt(m.sp)}, {"SR", opt(m.sr)}, {"SA", opt(m.sa)}};
}

}  // namespace

BatchReport run_benchmark(const fs::path& datasetDir, const BenchmarkOptions& options) {
  if (!fs::is_directory(datasetDir)) throw DatasetLayoutError("dataset directory not found: " + datasetDir.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(datasetDir))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw DatasetLayoutError("dataset " + datasetDir.string() + " contains no tasks");
  for (const auto& d : dirs)
    for (const char* f : {"metamodel.ecore", "spec.txt", "reference.xmi"})
      if (!fs::is_regular_file(d / f))
        throw DatasetLayoutError("task '" + d.filename().string() + "' is missing " + f);

  std::vector<TaskResult> results(dirs.size());
  std::vector<std::exception_ptr> errors(dirs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < dirs.size(); i = next++) {
      try {
        results[i] = run_task(dirs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(options.jobs, 1, static_cast<unsigned>(dirs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  BatchReport b;
  b.taskCount = results.size();
  b.strictValidity = options.strictValidity;
  std::vector<const CategoryMetrics*> ov, ob, at, as;
  for (const auto& t : results) {
    if (t.valid) ++b.validCount;
    if (!t.metrics) continue;
    ov.push_back(&t.metrics->overall);
    ob.push_back(&t.metrics->objects);
    at.push_back(&t.metrics->attributes);
    as.push_back(&t.metrics->associations);
  }
  b.vr = {static_cast<std::int64_t>(b.validCount), static_cast<std::int64_t>(b.taskCount)};
  b.averagedTasks = ov.size();
  accumulate(b.overall, ov);
  accumulate(b.objects, ob);
  accumulate(b.attributes, at);
  accumulate(b.associations, as);
  b.tasks = std::move(results);

  if (options.outDir) {
    put(*options.outDir / "report.json", batch_report_json(b));
    put(*options.outDir / "tasks.csv", tasks_csv(b));
  }
  return b;
}

std::string batch_report_json(const BatchReport& b) {
  detail::ojson j;
  j["taskCount"] = b.taskCount;
  j["validCount"] = b.validCount;
  j["VR"] = detail::ratio_json(b.vr);
  j["strictValidity"] = b.strictValidity;
  j["averagedTasks"] = b.averagedTasks;
  j["mean"] = {{"overall", mean_json(b.overall)},
               {"objects", mean_json(b.objects)},
               {"attributes", mean_json(b.attributes)},
               {"associations", mean_json(b.associations)}};
  j["tasks"] = detail::ojson::array();
  for (const auto& t : b.tasks) {
    detail::ojson tj;
    tj["name"] = t.name;
    tj["source"] = t.source;
    tj["generated"] = t.generated;
    tj["valid"] = t.valid;
    tj["attempts"] = t.attempts;
    tj["failure"] = t.failure ? detail::ojson(*t.failure) : detail::ojson(nullptr);
    tj["errorDiagnostics"] = t.errorDiagnostics;
    tj["ordinalSignatures"] = t.ordinalSignatures;
    tj["metrics"] = t.metrics ? detail::metrics_ojson(*t.metrics) : detail::ojson(nullptr);
    j["tasks"].push_back(std::move(tj));
  }
  return j.dump(2) + "\n";
}

std::string tasks_csv(const BatchReport& b) {
  std::string s = "taskName,valid,status";
  for (const char* cat : {"overall", "objects", "attributes", "associations"})
    for (const char* metric : {"GA", "SP", "SR", "SA"}) s += std::string(",") + metric + "_" + cat;
  s += '\n';
  for (const auto& t : b.tasks) {
    s += t.name;
    s += t.valid ? ",true," : ",false,";
    s += !t.generated ? "failed" : (t.valid ? "ok" : "invalid");
    for (auto cat : {&MetricsReport::overall, &MetricsReport::objects, &MetricsReport::attributes,
                     &MetricsReport::associations}) {
      if (!t.metrics) {
        s += ",,,,";
        continue;
      }
      const CategoryMetrics& c = (*t.metrics).*cat;
      s += ',' + fmt(c.ga ? std::optional<double>(c.ga->value()) : std::nullopt);
      s += ',' + fmt(c.sp.value());
      s += ',' + fmt(c.sr.value());
      s += ',' + fmt(c.sa.value());
    }
    s += '\n';
  }
  return s;
}

}  // namespace cimc
