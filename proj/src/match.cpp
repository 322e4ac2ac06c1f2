// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <tuple>

#include "cimc/evaluator.hpp"

namespace cimc {

namespace {

using AttrBag = std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>;

std::vector<AttrBag> attribute_bags(const CanonicalElementSet& s) {
  std::vector<AttrBag> bags(s.objects.size());
  for (std::size_t i = 0; i < s.attributes.size(); ++i) {
    const auto& a = s.attributes[i];
    bags[a.owner][{a.name, a.value}].push_back(i);
  }
  return bags;
}

std::size_t shared_tuples(const AttrBag& a, const AttrBag& b) {
  std::size_t n = 0;
  for (const auto& [k, v] : a)
    if (auto it = b.find(k); it != b.end()) n += std::min(v.size(), it->second.size());
  return n;
}

}  // namespace

MatchResult match_elements(const CanonicalElementSet& gen, const CanonicalElementSet& truth) {
  MatchResult r;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> genToTruth(gen.objects.size(), kNone);
  std::vector<std::size_t> truthToGen(truth.objects.size(), kNone);
  auto pair = [&](std::size_t g, std::size_t t) {
    genToTruth[g] = t;
    truthToGen[t] = g;
  };

  // Exact (class, name key) matches, first come first served in document order.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> byKey;
  for (std::size_t t = 0; t < truth.objects.size(); ++t)
    byKey[{truth.objects[t].className, truth.objects[t].nameKey}].push_back(t);
  for (auto& [k, v] : byKey) std::reverse(v.begin(), v.end());
  for (std::size_t g = 0; g < gen.objects.size(); ++g) {
    auto it = byKey.find({gen.objects[g].className, gen.objects[g].nameKey});
    if (it == byKey.end() || it->second.empty()) continue;
    pair(g, it->second.back());
    it->second.pop_back();
  }

  // Leftovers of the same class, by number of shared attribute tuples.
  const auto genBags = attribute_bags(gen);
  const auto truthBags = attribute_bags(truth);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> candidates;  // (score, g, t)
  for (std::size_t g = 0; g < gen.objects.size(); ++g) {
    if (genToTruth[g] != kNone) continue;
    for (std::size_t t = 0; t < truth.objects.size(); ++t) {
      if (truthToGen[t] != kNone || gen.objects[g].className != truth.objects[t].className) continue;
      if (std::size_t score = shared_tuples(genBags[g], truthBags[t]); score > 0) candidates.emplace_back(score, g, t);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  for (const auto& [score, g, t] : candidates)
    if (genToTruth[g] == kNone && truthToGen[t] == kNone) pair(g, t);

  for (std::size_t g = 0; g < gen.objects.size(); ++g) {
    if (genToTruth[g] != kNone)
      r.objectPairs.emplace_back(g, genToTruth[g]);
    else
      r.unmatchedGenerated.objects.push_back(g);
  }
  for (std::size_t t = 0; t < truth.objects.size(); ++t)
    if (truthToGen[t] == kNone) r.unmatchedTruth.objects.push_back(t);

  // Attributes between paired owners.
  std::vector<bool> genAttrHit(gen.attributes.size()), truthAttrHit(truth.attributes.size());
  for (const auto& [g, t] : r.objectPairs) {
    for (const auto& [k, gi] : genBags[g]) {
      auto it = truthBags[t].find(k);
      if (it == truthBags[t].end()) continue;
      const std::size_t n = std::min(gi.size(), it->second.size());
      for (std::size_t i = 0; i < n; ++i) {
        genAttrHit[gi[i]] = true;
        truthAttrHit[it->second[i]] = true;
      }
      r.matchedAttributes += n;
    }
  }

  // Associations whose owner and target are both paired.
  std::map<std::tuple<std::size_t, std::string, std::size_t>, std::vector<std::size_t>> truthLinks;
  for (std::size_t i = truth.associations.size(); i-- > 0;) {
    const auto& a = truth.associations[i];
    truthLinks[{a.owner, a.name, a.target}].push_back(i);
  }
  std::vector<bool> genLinkHit(gen.associations.size()), truthLinkHit(truth.associations.size());
  for (std::size_t i = 0; i < gen.associations.size(); ++i) {
    const auto& a = gen.associations[i];
    const std::size_t to = genToTruth[a.owner], tt = genToTruth[a.target];
    if (to == kNone || tt == kNone) continue;
    auto it = truthLinks.find({to, a.name, tt});
    if (it == truthLinks.end() || it->second.empty()) continue;
    truthLinkHit[it->second.back()] = true;
    it->second.pop_back();
    genLinkHit[i] = true;
    ++r.matchedAssociations;
  }

  for (std::size_t i = 0; i < genAttrHit.size(); ++i)
    if (!genAttrHit[i]) r.unmatchedGenerated.attributes.push_back(i);
  for (std::size_t i = 0; i < truthAttrHit.size(); ++i)
    if (!truthAttrHit[i]) r.unmatchedTruth.attributes.push_back(i);
  for (std::size_t i = 0; i < genLinkHit.size(); ++i)
    if (!genLinkHit[i]) r.unmatchedGenerated.associations.push_back(i);
  for (std::size_t i = 0; i < truthLinkHit.size(); ++i)
    if (!truthLinkHit[i]) r.unmatchedTruth.associations.push_back(i);
  return r;
}

}  // namespace cimc
