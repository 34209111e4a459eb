#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shacon/analyses.hpp"
#include "shacon/pseudo_pairs.hpp"

namespace shacon {

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path output;
  std::uint64_t seed = 1;  // pseudo-pair plan and permutation streams
  std::set<int> which{1, 2, 3};
  bool pseudo = false;
  int permutations = 0;
};

struct CorpusReport {
  std::vector<AnalysisOutput> analyses;
  std::vector<RoundAggregate> rounds;

  const AnalysisOutput* analysis(int id) const;
};

CorpusReport run_analyses(const CorpusAnalysis& ca, const std::set<int>& which, const AnalysisOptions& opts);

struct PipelineResult {
  CorpusReport real;
  std::optional<CorpusReport> pseudo;
  std::optional<PseudoPairPlan> plan;
};

/// Parses and validates config.corpus, then runs run_pipeline_on.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Extraction, typing, the selected analyses and, with config.pseudo, the
/// same over a pseudo-pair corpus. Writes into config.output:
///   extraction.ndj, types.ndj, analysis<N>.csv, rounds.csv, summary.json
/// and pseudo_-prefixed copies of all but summary.json. Output bytes depend
/// only on the corpus and config.
PipelineResult run_pipeline_on(const Corpus& corpus, const PipelineConfig& config);

void write_extraction(const CorpusAnalysis& ca, const std::filesystem::path& file);
void write_types(const CorpusAnalysis& ca, const std::filesystem::path& file);
void write_rows(const std::vector<AnalysisRow>& rows, const std::filesystem::path& file);
void write_round_aggregates(const std::vector<RoundAggregate>& rounds, const std::filesystem::path& file);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace shacon
