#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shacon/corpus.hpp"
#include "shacon/kv_config.hpp"

namespace shacon {

enum class PostNameSource : std::uint8_t {
  SURVIVORS,  // cores still alive in the last round
  ALL_CORES,  // any planted core of the cell
};

/// Synthetic referential-game settings. Every field maps to a config key of
/// the same name; list values are comma separated, one entry per round.
struct GeneratorConfig {
  int dyads = 66;
  int fribbles = 16;
  int rounds = 6;
  /// Content lemmas per fribble; cores and speaker-private lemmas are drawn
  /// from this pool, which is disjoint across fribbles and shared by dyads.
  int content_vocab = 240;
  /// Shared function words (determiners, adpositions, pronouns, ...).
  int function_vocab = 12;
  /// Private content lemmas per speaker and fribble; disjoint between the
  /// two speakers of a dyad and from the dyad's cores.
  int private_lemmas = 8;
  /// Probability, per round, that an utterance carries a surviving core.
  std::vector<double> reuse_probability{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  /// Number of cores still in use in each round (non-increasing).
  std::vector<int> type_prune_schedule{4, 4, 3, 3, 2, 2};
  /// Planted cores per (dyad, fribble) drawn uniformly from this range;
  /// 0 means the first entry of type_prune_schedule. Survivors in round r
  /// are the first min(planted, schedule[r]) cores.
  int cores_min = 0;
  int cores_max = 0;
  double name_adoption_probability = 0.7;
  PostNameSource post_name_source = PostNameSource::SURVIVORS;
  int utterance_length_min = 3;
  int utterance_length_max = 8;
  int director_utterances_min = 2;
  int director_utterances_max = 4;
  int matcher_utterances_min = 1;
  int matcher_utterances_max = 3;
  /// Chance of one extra private content lemma in an utterance.
  double extra_content_probability = 0.3;
  double disfluency_probability = 0.05;
  /// Chance that a private lemma comes from a pool shared by all fribbles
  /// instead of the fribble's own pool (stresses the multi-referent filter).
  double distractor_overlap = 0.0;
  std::uint64_t seed = 2024;

  static GeneratorConfig from_kv(const KvConfig& kv);
  /// Throws ConfigError when an invariant does not hold.
  void check() const;
};

struct GroundTruthCell {
  DyadId dyad;
  FribbleId fribble;
  std::vector<Lemma> planted;
  std::vector<std::vector<Lemma>> survivors;  // one list per round
  Lemma dominant;
};

struct GroundTruth {
  std::vector<GroundTruthCell> cells;
};

struct Generated {
  Corpus corpus;
  GroundTruth truth;
};

Generated generate(const GeneratorConfig& config);

inline constexpr const char* kGroundTruthFile = "ground_truth.ndj";

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& bundle);
GroundTruth read_ground_truth(const std::filesystem::path& bundle);

}  // namespace shacon
