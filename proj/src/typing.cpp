#include "shacon/typing.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace shacon {

namespace {

using Site = std::pair<std::int64_t, std::size_t>;  // (utterance index, token position)

constexpr Site kNoSite{std::numeric_limits<std::int64_t>::max(), 0};

std::set<Site> core_sites(const ConstructionType& t, const SpeakerId* speaker) {
  std::set<Site> sites;
  for (const auto& m : t.members) {
    for (const auto& occ : m.occurrences) {
      if (speaker != nullptr && occ.speaker != *speaker) continue;
      for (std::size_t k = 0; k < m.lemmas.size(); ++k) {
        if (m.content[k] && m.lemmas[k] == t.core) sites.emplace(occ.utterance_index, occ.token_offset + k);
      }
    }
  }
  return sites;
}

Site first_site_of(const SharedConstruction& c, const Lemma& lemma) {
  if (c.occurrences.empty()) return kNoSite;
  auto first = std::min_element(c.occurrences.begin(), c.occurrences.end(), [](const auto& x, const auto& y) {
    return std::tie(x.utterance_index, x.token_offset) < std::tie(y.utterance_index, y.token_offset);
  });
  for (std::size_t k = 0; k < c.lemmas.size(); ++k) {
    if (c.content[k] && c.lemmas[k] == lemma) return {first->utterance_index, first->token_offset + k};
  }
  return kNoSite;
}

}  // namespace

std::set<Lemma> ConstructionType::lemma_set() const {
  std::set<Lemma> out{core};
  for (const auto& m : members) {
    for (std::size_t k = 0; k < m.lemmas.size(); ++k) {
      if (m.content[k]) out.insert(m.lemmas[k]);
    }
  }
  return out;
}

int ConstructionType::usage_by(const SpeakerId& speaker) const {
  return static_cast<int>(core_sites(*this, &speaker).size());
}

std::vector<ConstructionType> group_into_types(std::span<const SharedConstruction> constructions) {
  struct CoreStats {
    long long count = 0;
    Site first = kNoSite;
  };
  std::map<Lemma, CoreStats> stats;
  for (const auto& c : constructions) {
    std::set<Lemma> distinct;
    for (std::size_t k = 0; k < c.lemmas.size(); ++k) {
      if (c.content[k]) distinct.insert(c.lemmas[k]);
    }
    for (const auto& l : distinct) {
      auto& s = stats[l];
      s.count += static_cast<long long>(c.occurrences.size());
      s.first = std::min(s.first, first_site_of(c, l));
    }
  }

  std::map<Lemma, ConstructionType> by_core;
  for (const auto& c : constructions) {
    const Lemma* best = nullptr;
    for (std::size_t k = 0; k < c.lemmas.size(); ++k) {
      if (!c.content[k]) continue;
      const auto& l = c.lemmas[k];
      if (best == nullptr) {
        best = &l;
        continue;
      }
      const auto& sl = stats[l];
      const auto& sb = stats[*best];
      if (std::make_tuple(-sl.count, sl.first, l) < std::make_tuple(-sb.count, sb.first, *best)) best = &l;
    }
    if (best == nullptr) continue;
    auto& t = by_core[*best];
    t.core = *best;
    t.members.push_back(c);
  }

  std::vector<std::pair<Site, ConstructionType>> ordered;
  for (auto& [core, t] : by_core) {
    for (const auto& m : t.members) {
      for (const auto& occ : m.occurrences) t.rounds_used.insert(occ.round);
    }
    t.occurrence_count = static_cast<int>(core_sites(t, nullptr).size());
    if (!t.rounds_used.empty()) {
      t.first_round = *t.rounds_used.begin();
      t.last_round = *t.rounds_used.rbegin();
    }
    Site first = kNoSite;
    for (const auto& m : t.members) first = std::min(first, first_site_of(m, core));
    ordered.emplace_back(first, std::move(t));
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
    return std::tie(x.second.first_round, x.first, x.second.core) <
           std::tie(y.second.first_round, y.first, y.second.core);
  });

  std::vector<ConstructionType> out;
  out.reserve(ordered.size());
  for (auto& [site, t] : ordered) out.push_back(std::move(t));
  return out;
}

const ConstructionType* dominant_type(const TypeTimeline& timeline) {
  const ConstructionType* best = nullptr;
  for (const auto& t : timeline.types) {
    if (best == nullptr) {
      best = &t;
      continue;
    }
    const auto key = [](const ConstructionType& x) {
      return std::make_tuple(static_cast<int>(x.rounds_used.size()), x.last_round, x.occurrence_count);
    };
    if (key(t) > key(*best) || (key(t) == key(*best) && t.core < best->core)) best = &t;
  }
  return best;
}

TypeFeatures type_features(const ConstructionType& t, int rounds_total) {
  if (t.first_round < 1 || t.first_round > t.last_round || t.last_round > rounds_total) {
    throw std::invalid_argument("type '" + t.core + "' has rounds " + std::to_string(t.first_round) + ".." +
                                std::to_string(t.last_round) + " outside 1.." + std::to_string(rounds_total));
  }
  return {static_cast<int>(t.rounds_used.size()), t.last_round, rounds_total};
}

std::vector<TypeTimeline> build_timelines(const Dialogue& d, const ExtractionResult& extraction) {
  std::vector<TypeTimeline> out;
  for (const auto& f : d.fribbles()) {
    TypeTimeline tl{d.dyad, f, {}};
    if (auto it = extraction.find(f); it != extraction.end()) tl.types = group_into_types(it->second);
    out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace shacon
