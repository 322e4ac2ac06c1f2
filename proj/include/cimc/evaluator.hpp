// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cimc/compiler.hpp"
#include "cimc/ecore.hpp"
#include "cimc/instance.hpp"
#include "cimc/llm.hpp"
#include "cimc/ratio.hpp"

namespace cimc {

struct CanonicalObject {
  std::string className;
  std::string nameKey;  // name-like attribute value, or Class#ordinal
  bool ordinal = false;

  std::string key() const { return className + ":" + nameKey; }
};

struct CanonicalAttribute {
  std::size_t owner;  // into objects
  std::string name;
  std::string value;
};

struct CanonicalAssociation {
  std::size_t owner;
  std::string name;
  std::size_t target;
};

/// Element sets of one instance model. Objects are in document order.
struct CanonicalElementSet {
  std::vector<CanonicalObject> objects;
  std::vector<CanonicalAttribute> attributes;
  std::vector<CanonicalAssociation> associations;
  std::size_t ordinalSignatures = 0;

  std::size_t size() const noexcept { return objects.size() + attributes.size() + associations.size(); }

  using Tuple = std::tuple<std::string, std::string, std::string>;
  /// Sorted key tuples; multiset equality of two sets is equality of these.
  std::vector<Tuple> tuples() const;

  friend bool operator==(const CanonicalElementSet& a, const CanonicalElementSet& b) { return a.tuples() == b.tuples(); }
};

CanonicalElementSet canonicalize(const InstanceModel& model, const MetaModel& m);

struct CategoryIndices {
  std::vector<std::size_t> objects;
  std::vector<std::size_t> attributes;
  std::vector<std::size_t> associations;
};

struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> objectPairs;  // (generated, truth)
  std::size_t matchedAttributes = 0;
  std::size_t matchedAssociations = 0;
  CategoryIndices unmatchedGenerated;
  CategoryIndices unmatchedTruth;

  std::size_t matchedObjects() const noexcept { return objectPairs.size(); }
  std::size_t matched() const noexcept { return objectPairs.size() + matchedAttributes + matchedAssociations; }
};

MatchResult match_elements(const CanonicalElementSet& gen, const CanonicalElementSet& truth);

struct CategoryMetrics {
  std::optional<Ratio> ga;  // absent when no compile report backs the model
  Ratio sp;
  Ratio sr;
  Ratio sa;
};

struct MetricsReport {
  CategoryMetrics objects;
  CategoryMetrics attributes;
  CategoryMetrics associations;
  CategoryMetrics overall;
};

/// SP/SR/SA from the matched intersection; 0/0 reads as 1.
CategoryMetrics set_metrics(std::size_t generated, std::size_t truth, std::size_t matched);

MetricsReport compute_metrics(const MatchResult& match, const CanonicalElementSet& gen,
                              const CanonicalElementSet& truth, const CompileReport* report = nullptr);

/// canonicalize + match + compute_metrics.
MetricsReport evaluate(const InstanceModel& generated, const InstanceModel& truth, const MetaModel& m,
                       const CompileReport* report = nullptr);

std::string metrics_json(const MetricsReport& r, int indent = 2);

class DatasetLayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TaskResult {
  std::string name;
  std::string source;  // llm | cim | xmi
  bool generated = false;  // a candidate model exists
  bool valid = false;
  int attempts = 0;
  std::optional<std::string> failure;
  std::optional<MetricsReport> metrics;
  std::size_t errorDiagnostics = 0;
  bool ordinalSignatures = false;
};

struct MeanMetrics {
  std::optional<double> ga, sp, sr, sa;
};

struct BatchReport {
  std::size_t taskCount = 0;
  std::size_t validCount = 0;
  Ratio vr;
  std::size_t averagedTasks = 0;
  bool strictValidity = false;
  MeanMetrics objects, attributes, associations, overall;
  std::vector<TaskResult> tasks;  // sorted by name
};

using BackendFactory = std::function<std::unique_ptr<ChatBackend>(const std::filesystem::path& taskDir)>;

struct BenchmarkOptions {
  std::optional<LlmConfig> config;
  BackendFactory backendFactory;  // overrides the config-derived backend
  std::vector<FewShotExample> examples;
  unsigned jobs = 1;
  bool strictValidity = false;  // also require zero compile errors
  std::optional<std::filesystem::path> outDir;
};

/// Each `<dir>/<task>/` holds metamodel.ecore, spec.txt and reference.xmi,
/// optionally generated.xmi or generated.cim.json (offline) and
/// mock_responses.json (mock provider).
BatchReport run_benchmark(const std::filesystem::path& datasetDir, const BenchmarkOptions& options);

std::string batch_report_json(const BatchReport& report);
std::string tasks_csv(const BatchReport& report);

}  // namespace cimc
