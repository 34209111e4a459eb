#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "shacon/corpus.hpp"

namespace shacon {

/// One site where a shared sequence was produced.
struct Occurrence {
  SpeakerId speaker;
  int round = 0;
  std::int64_t utterance_index = 0;
  std::size_t token_offset = 0;  // position in the utterance's non-disfluent lemma stream

  bool operator==(const Occurrence&) const = default;
};

/// A contiguous lemma sequence produced by both speakers.
struct SharedSequence {
  LemmaSeq lemmas;
  /// Not extendable by one lemma on either side while remaining shared.
  bool maximal = false;

  bool operator==(const SharedSequence&) const = default;
};

struct SharedConstruction {
  LemmaSeq lemmas;
  /// Per-lemma content flag, aligned with `lemmas`.
  std::vector<bool> content;
  FribbleId fribble;
  /// Sorted by (utterance_index, token_offset).
  std::vector<Occurrence> occurrences;
  bool is_maximal = false;

  bool operator==(const SharedConstruction&) const = default;

  LemmaSeq content_lemmas() const;
};

/// Lemmas that carry a content tag on at least one non-disfluent token.
using ContentEvidence = std::set<Lemma>;

/// Fribble -> surviving constructions, ordered by first occurrence, then
/// length, then lemma sequence. Fribbles without survivors are omitted.
using ExtractionResult = std::map<FribbleId, std::vector<SharedConstruction>>;

/// Every contiguous sequence (length >= 1) occurring inside at least one
/// stream of `a` and one stream of `b`. Sequences never span two streams.
/// Sorted lexicographically by lemma sequence.
std::vector<SharedSequence> cross_speaker_sequences(std::span<const LemmaSeq> a, std::span<const LemmaSeq> b);

/// Same, over the non-disfluent lemma streams of the utterances.
std::vector<SharedSequence> cross_speaker_sequences(std::span<const Utterance> a, std::span<const Utterance> b);

ContentEvidence collect_content_evidence(std::span<const Trial* const> trials);

/// Drops sequences none of whose lemmas is in `content`.
std::vector<SharedSequence> filter_function_word_only(std::vector<SharedSequence> seqs, const ContentEvidence& content);

/// Drops every sequence that is shared under two or more fribbles.
std::map<FribbleId, std::vector<SharedSequence>> filter_multi_referent(
    std::map<FribbleId, std::vector<SharedSequence>> per_fribble);

ExtractionResult extract_shared_constructions(const Dialogue& d);

}  // namespace shacon
