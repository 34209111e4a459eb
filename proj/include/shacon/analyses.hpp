#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shacon/corpus.hpp"
#include "shacon/extraction.hpp"
#include "shacon/stats.hpp"
#include "shacon/typing.hpp"

namespace shacon {

struct DialogueAnalysis {
  const Dialogue* dialogue = nullptr;
  ExtractionResult extraction;
  std::vector<TypeTimeline> timelines;  // one per fribble, by fribble id
};

/// Extraction and typing for every dialogue, in corpus order. Holds a
/// pointer to `corpus`, which must outlive it.
struct CorpusAnalysis {
  const Corpus* corpus = nullptr;
  std::vector<DialogueAnalysis> dialogues;
};

CorpusAnalysis analyze_corpus(const Corpus& corpus);

/// One value of one metric at one grouping. Keys that do not apply to the
/// metric stay empty (round 0 means no round).
struct AnalysisRow {
  int analysis = 0;
  DyadId dyad;
  FribbleId fribble;
  int round = 0;
  SpeakerId speaker;
  std::string phase;
  Lemma type;
  std::string metric;
  double value = 0.0;
};

/// Every metric name a row may carry.
const std::vector<std::string>& row_metrics();

struct NamedStat {
  std::string name;
  std::optional<StatResult> result;  // empty when the statistic is undefined
  std::string note;
  std::optional<double> permutation_p;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
  std::size_t n = 0;
};

struct AnalysisOutput {
  int id = 0;
  bool skipped = false;
  std::string skip_reason;
  std::vector<AnalysisRow> rows;
  std::vector<NamedStat> stats;
  std::vector<NamedValue> values;

  const NamedStat* stat(const std::string& name) const;
  std::optional<double> value(const std::string& name) const;
};

struct AnalysisOptions {
  /// > 0 adds seeded permutation p-values to every Spearman statistic.
  int permutations = 0;
  std::uint64_t seed = 0;
};

/// Construction presence, utterance coverage per round with its trend, and
/// type counts in the first vs the last round.
AnalysisOutput analysis1(const CorpusAnalysis& ca, const AnalysisOptions& opts = {});

/// Individual names vs shared construction types: pre/post self-similarity,
/// name-type similarity by phase and round, recency and frequency effects.
AnalysisOutput analysis2(const CorpusAnalysis& ca, const AnalysisOptions& opts = {});

/// Cross-speaker naming convergence and its link to type count and to the
/// dominant type's frequency and recency.
AnalysisOutput analysis3(const CorpusAnalysis& ca, const AnalysisOptions& opts = {});

/// Per-round aggregates recomputed from analysis rows.
struct RoundAggregate {
  int round = 0;
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
};

std::vector<RoundAggregate> round_aggregates(const std::vector<AnalysisOutput>& outputs);

}  // namespace shacon
