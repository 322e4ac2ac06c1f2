// SPDX-License-Identifier: Apache-2.0
//
// cimc: metamodel rendering, CIM compilation, LLM generation and evaluation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cimc/cim.hpp"
#include "cimc/compiler.hpp"
#include "cimc/ecore.hpp"
#include "cimc/evaluator.hpp"
#include "cimc/llm.hpp"
#include "cimc/plantuml.hpp"
#include "cimc/xmi.hpp"

namespace fs = std::filesystem;
using namespace cimc;

namespace {

constexpr int kOk = 0;
constexpr int kDiagnosticErrors = 1;
constexpr int kUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// Writes to the file if one was named, else to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

void log_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << format_diagnostic(d) << '\n';
}

MetaModel load_metamodel(const std::string& path) {
  std::vector<Diagnostic> warnings;
  MetaModel m = parse_ecore(read_text(path), &warnings);
  log_diagnostics(warnings);
  return m;
}

LlmConfig load_config(const std::string& path) { return load_llm_config(read_text(path)); }

std::unique_ptr<ChatBackend> make_backend(const LlmConfig& c) {
  if (c.provider == "mock") return std::make_unique<ScriptedChatBackend>(c.mockResponses);
  return std::make_unique<HttpChatBackend>(c);
}

std::vector<Diagnostic> parse_and_check(const std::string& text, ConceptualInstanceModel& out) {
  auto parsed = parse_cim(extract_json_payload(text));
  auto diags = std::move(parsed.diagnostics);
  auto structural = validate_structure(parsed.model);
  diags.insert(diags.end(), structural.begin(), structural.end());
  out = std::move(parsed.model);
  return diags;
}

struct Options {
  std::string ecore, cim, spec, config, out, log, trace, examples, generated, reference, dataset;
  unsigned jobs = 1;
  bool strictValidity = false;
};

int run_ecore2puml(const Options& o) {
  emit(o.out, render_plantuml(load_metamodel(o.ecore)).text);
  return kOk;
}

int run_validate_cim(const Options& o) {
  ConceptualInstanceModel cim;
  auto diags = parse_and_check(read_text(o.cim), cim);
  if (!o.ecore.empty()) {
    const MetaModel m = load_metamodel(o.ecore);
    auto report = compile(m, cim);
    diags.insert(diags.end(), report.diagnostics.begin(), report.diagnostics.end());
    std::cerr << "GA " << report.ga().str() << '\n';
  }
  log_diagnostics(diags);
  if (!o.log.empty()) write_text(o.log, to_jsonl(diags));
  std::cerr << cim.size() << " objects, " << error_count(diags) << " errors\n";
  return has_errors(diags) ? kDiagnosticErrors : kOk;
}

int run_compile(const Options& o) {
  const MetaModel m = load_metamodel(o.ecore);
  ConceptualInstanceModel cim;
  auto diags = parse_and_check(read_text(o.cim), cim);
  auto report = compile(m, cim);
  diags.insert(diags.end(), report.diagnostics.begin(), report.diagnostics.end());
  emit(o.out, serialize_xmi(report, m));
  log_diagnostics(diags);
  if (!o.log.empty()) write_text(o.log, to_jsonl(diags));
  std::cerr << "GA " << report.ga().str() << ", " << report.model.size() << " objects\n";
  return has_errors(diags) ? kDiagnosticErrors : kOk;
}

int run_generate(const Options& o) {
  const MetaModel m = load_metamodel(o.ecore);
  const LlmConfig config = load_config(o.config);
  std::vector<FewShotExample> examples;
  if (!o.examples.empty()) examples = load_examples(o.examples);
  auto backend = make_backend(config);
  const GenerationTrace trace = generate_instance_model(m, read_text(o.spec), examples, config, *backend);
  if (!o.trace.empty()) write_text(o.trace, trace_to_json(trace));

  std::vector<Diagnostic> diags = trace.cimDiagnostics;
  if (trace.report) diags.insert(diags.end(), trace.report->diagnostics.begin(), trace.report->diagnostics.end());
  log_diagnostics(diags);
  if (!o.log.empty()) write_text(o.log, to_jsonl(diags));
  if (trace.report) emit(o.out, serialize_xmi(*trace.report, m));
  if (!trace.ok()) {
    std::cerr << *trace.failure << " after " << trace.attempts << " attempt(s)\n";
    return kDiagnosticErrors;
  }
  std::cerr << "attempts " << trace.attempts << ", GA " << trace.report->ga().str() << '\n';
  return has_errors(diags) ? kDiagnosticErrors : kOk;
}

int run_eval(const Options& o) {
  const MetaModel m = load_metamodel(o.ecore);
  const InstanceModel truth = parse_xmi(read_text(o.reference), m);
  const std::string text = read_text(o.generated);
  if (fs::path(o.generated).extension() == ".json") {
    ConceptualInstanceModel cim;
    auto diags = parse_and_check(text, cim);
    auto report = compile(m, cim);
    diags.insert(diags.end(), report.diagnostics.begin(), report.diagnostics.end());
    log_diagnostics(diags);
    emit(o.out, metrics_json(evaluate(report.model, truth, m, &report)));
    return has_errors(diags) ? kDiagnosticErrors : kOk;
  }
  try {
    const InstanceModel gen = parse_xmi(text, m);
    emit(o.out, metrics_json(evaluate(gen, truth, m)));
  } catch (const XmiError& e) {
    std::cerr << "generated model is not valid: " << e.what() << '\n';
    return kDiagnosticErrors;
  }
  return kOk;
}

int run_bench(const Options& o) {
  BenchmarkOptions opt;
  if (!o.config.empty()) opt.config = load_config(o.config);
  if (!o.examples.empty()) opt.examples = load_examples(o.examples);
  opt.jobs = o.jobs;
  opt.strictValidity = o.strictValidity;
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    opt.outDir = o.out;
  }
  const BatchReport b = run_benchmark(o.dataset, opt);
  if (o.out.empty()) std::cout << batch_report_json(b);
  for (const auto& t : b.tasks)
    if (t.failure) std::cerr << t.name << ": " << *t.failure << '\n';
  std::cerr << "VR " << b.vr.str() << " (" << b.vr.value() * 100.0 << "%)\n";
  return b.validCount == b.taskCount ? kOk : kDiagnosticErrors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conceptual instance model compiler and evaluation harness", "cimc"};
  app.set_version_flag("--version", std::string("cimc ") + CIMC_VERSION);
  app.require_subcommand(1);

  Options o;
  auto* e2p = app.add_subcommand("ecore2puml", "Render an Ecore metamodel as PlantUML");
  e2p->add_option("--ecore", o.ecore, "Ecore metamodel")->required()->check(CLI::ExistingFile);
  e2p->add_option("--out", o.out, "Output file (default stdout)");

  auto* vc = app.add_subcommand("validate-cim", "Parse and check a CIM JSON document");
  vc->add_option("--cim", o.cim, "CIM JSON")->required()->check(CLI::ExistingFile);
  vc->add_option("--ecore", o.ecore, "Also compile against this metamodel")->check(CLI::ExistingFile);
  vc->add_option("--log", o.log, "Diagnostics as JSON lines");

  auto* cc = app.add_subcommand("compile", "Compile a CIM into an XMI instance model");
  cc->add_option("--ecore", o.ecore, "Ecore metamodel")->required()->check(CLI::ExistingFile);
  cc->add_option("--cim", o.cim, "CIM JSON")->required()->check(CLI::ExistingFile);
  cc->add_option("--out", o.out, "XMI output (default stdout)");
  cc->add_option("--log", o.log, "Diagnostics as JSON lines");

  auto* gen = app.add_subcommand("generate", "Generate an instance model with an LLM");
  gen->add_option("--ecore", o.ecore, "Ecore metamodel")->required()->check(CLI::ExistingFile);
  gen->add_option("--spec", o.spec, "Scenario description")->required()->check(CLI::ExistingFile);
  gen->add_option("--config", o.config, "LLM config JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", o.out, "XMI output (default stdout)");
  gen->add_option("--trace", o.trace, "Generation trace JSON");
  gen->add_option("--examples", o.examples, "Few-shot examples directory")->check(CLI::ExistingDirectory);
  gen->add_option("--log", o.log, "Diagnostics as JSON lines");

  auto* ev = app.add_subcommand("eval", "Score a generated model against a reference");
  ev->add_option("--ecore", o.ecore, "Ecore metamodel")->required()->check(CLI::ExistingFile);
  ev->add_option("--generated", o.generated, "Generated model (.xmi or CIM .json)")->required()->check(CLI::ExistingFile);
  ev->add_option("--reference", o.reference, "Reference XMI")->required()->check(CLI::ExistingFile);
  ev->add_option("--out", o.out, "Metrics JSON (default stdout)");

  auto* be = app.add_subcommand("bench", "Run a benchmark over a dataset directory");
  be->add_option("--dataset", o.dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  be->add_option("--config", o.config, "LLM config JSON")->check(CLI::ExistingFile);
  be->add_option("--out", o.out, "Output directory (default: report to stdout)");
  be->add_option("--jobs", o.jobs, "Parallel tasks")->check(CLI::PositiveNumber);
  be->add_option("--examples", o.examples, "Few-shot examples directory")->check(CLI::ExistingDirectory);
  be->add_flag("--strict-validity", o.strictValidity, "Count tasks with compile errors as invalid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*e2p) return run_ecore2puml(o);
    if (*vc) return run_validate_cim(o);
    if (*cc) return run_compile(o);
    if (*gen) return run_generate(o);
    if (*ev) return run_eval(o);
    if (*be) return run_bench(o);
  } catch (const CimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiagnosticErrors;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
