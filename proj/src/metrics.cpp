// SPDX-License-Identifier: Apache-2.0

#include "cimc/evaluator.hpp"
#include "json_util.hpp"
#include "metrics_json.hpp"

namespace cimc {

namespace {

std::int64_t i64(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace

CategoryMetrics set_metrics(std::size_t generated, std::size_t truth, std::size_t matched) {
  CategoryMetrics c;
  c.sp = {i64(matched), i64(generated)};
  c.sr = {i64(matched), i64(truth)};
  c.sa = {i64(matched), i64(generated + truth - matched)};
  return c;
}

MetricsReport compute_metrics(const MatchResult& match, const CanonicalElementSet& gen,
                              const CanonicalElementSet& truth, const CompileReport* report) {
  MetricsReport r;
  r.objects = set_metrics(gen.objects.size(), truth.objects.size(), match.matchedObjects());
  r.attributes = set_metrics(gen.attributes.size(), truth.attributes.size(), match.matchedAttributes);
  r.associations = set_metrics(gen.associations.size(), truth.associations.size(), match.matchedAssociations);
  r.overall = set_metrics(gen.size(), truth.size(), match.matched());
  if (report != nullptr) {
    const auto& c = report->elementCounts;
    r.objects.ga = c.objects.ratio();
    r.attributes.ga = c.attributes.ratio();
    r.associations.ga = c.associations.ratio();
    r.overall.ga = c.total().ratio();
  }
  return r;
}

MetricsReport evaluate(const InstanceModel& generated, const InstanceModel& truth, const MetaModel& m,
                       const CompileReport* report) {
  const auto gen = canonicalize(generated, m);
  const auto gt = canonicalize(truth, m);
  return compute_metrics(match_elements(gen, gt), gen, gt, report);
}

namespace detail {

ojson ratio_json(const Ratio& r) { return ojson{{"ratio", r.str()}, {"value", r.value()}}; }

ojson metrics_ojson(const MetricsReport& r) {
  auto cat = [](const CategoryMetrics& c) {
    ojson j;
    j["GA"] = c.ga ? ratio_json(*c.ga) : ojson(nullptr);
    j["SP"] = ratio_json(c.sp);
    j["SR"] = ratio_json(c.sr);
    j["SA"] = ratio_json(c.sa);
    return j;
  };
  ojson j;
  j["overall"] = cat(r.overall);
  j["objects"] = cat(r.objects);
  j["attributes"] = cat(r.attributes);
  j["associations"] = cat(r.associations);
  return j;
}

}  // namespace detail

std::string metrics_json(const MetricsReport& r, int indent) { return detail::metrics_ojson(r).dump(indent) + "\n"; }

}  // namespace cimc
