#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "shacon/extraction.hpp"
#include "shacon/typing.hpp"

namespace shacon {

/// Binary lemma-presence vector, stored as the set of present lemmas.
using LemmaVector = std::set<Lemma>;

class UndefinedSimilarity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |a & b| / (sqrt|a| * sqrt|b|). Throws UndefinedSimilarity on an empty side.
double lexical_cosine(const LemmaVector& a, const LemmaVector& b);
double lexical_cosine(std::span<const Lemma> a, std::span<const Lemma> b);

struct RoundCoverage {
  int round = 0;
  int utterances = 0;
  int covered = 0;

  /// Missing when the round has no utterances.
  std::optional<double> fraction() const {
    if (utterances == 0) return std::nullopt;
    return static_cast<double>(covered) / static_cast<double>(utterances);
  }
};

/// Per round 1..d.rounds: utterances of the dyad's speakers, and how many of
/// them hold an occurrence of a surviving construction of their own trial's
/// fribble.
std::vector<RoundCoverage> coverage_counts(const Dialogue& d, const ExtractionResult& extraction);

/// Fractions of coverage_counts; nullopt for rounds without utterances.
std::vector<std::optional<double>> utterance_coverage(const Dialogue& d, const ExtractionResult& extraction);

struct NameOverlap {
  bool overlaps = false;
  double max_sim = 0.0;
  double mean_sim = 0.0;
  std::vector<double> per_type;  // aligned with the input types
};

NameOverlap name_overlap(const NamingRecord& name, std::span<const ConstructionType> types);

struct ConvergenceRecord {
  DyadId dyad;
  FribbleId fribble;
  double s_pre = 0.0;
  double s_post = 0.0;
  double delta = 0.0;
};

/// Cross-speaker name similarity before and after interaction. All four
/// records must name the same fribble.
ConvergenceRecord convergence(const DyadId& dyad, const NamingRecord& pre_a, const NamingRecord& pre_b,
                              const NamingRecord& post_a, const NamingRecord& post_b);

}  // namespace shacon
