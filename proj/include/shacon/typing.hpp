#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "shacon/extraction.hpp"

namespace shacon {

/// Shared constructions grouped under one content lemma.
struct ConstructionType {
  Lemma core;
  std::vector<SharedConstruction> members;
  std::set<int> rounds_used;
  /// Distinct (utterance, token position) sites where the core was produced
  /// inside a member occurrence. Nested members never double count.
  int occurrence_count = 0;
  int first_round = 0;
  int last_round = 0;

  bool operator==(const ConstructionType&) const = default;

  /// Core plus the content lemmas of every member.
  std::set<Lemma> lemma_set() const;
  /// Core sites produced by `speaker` (same counting as occurrence_count).
  int usage_by(const SpeakerId& speaker) const;
};

struct TypeTimeline {
  DyadId dyad;
  FribbleId fribble;
  /// Ordered by first_round, then first occurrence, then core.
  std::vector<ConstructionType> types;

  bool operator==(const TypeTimeline&) const = default;
};

struct TypeFeatures {
  int frequency = 0;  // number of rounds the type is used in
  int recency = 0;    // last round of use
  int rounds_total = 0;

  bool operator==(const TypeFeatures&) const = default;
};

/// Assigns each construction to the content lemma it contains with the
/// highest summed occurrence count over all constructions; ties go to the
/// lemma produced first, then to the lexicographically smaller lemma.
/// Constructions without a content lemma are skipped.
std::vector<ConstructionType> group_into_types(std::span<const SharedConstruction> constructions);

/// Most rounds used, then latest last round, then most occurrences, then
/// smallest core. nullptr when the timeline has no types.
const ConstructionType* dominant_type(const TypeTimeline& timeline);

TypeFeatures type_features(const ConstructionType& t, int rounds_total);

/// One timeline per fribble of the dialogue (fribbles without constructions
/// get an empty timeline), ordered by fribble id.
std::vector<TypeTimeline> build_timelines(const Dialogue& d, const ExtractionResult& extraction);

}  // namespace shacon
