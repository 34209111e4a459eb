#pragma once
// Reference implementations for tests. Written straight from the definitions,
// deliberately naive, and sharing no code with the library beyond its data
// types.

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <set>
#include <vector>

#include "shacon/corpus.hpp"
#include "shacon/rng.hpp"

namespace oracle {

using shacon::Dialogue;
using shacon::FribbleId;
using shacon::LemmaSeq;

/// Every n-gram of every stream.
std::set<LemmaSeq> all_ngrams(const std::vector<LemmaSeq>& streams);

/// N-grams found in both stream lists.
std::set<LemmaSeq> shared_ngrams(const std::vector<LemmaSeq>& a, const std::vector<LemmaSeq>& b);

/// Shared sequences that cannot be extended by one lemma on either side
/// and remain shared.
std::set<LemmaSeq> maximal_of(const std::set<LemmaSeq>& shared);

struct OracleOccurrence {
  shacon::SpeakerId speaker;
  std::int64_t utterance_index;
  std::size_t offset;
  bool operator<(const OracleOccurrence& o) const {
    return std::tie(utterance_index, offset, speaker) < std::tie(o.utterance_index, o.offset, o.speaker);
  }
  bool operator==(const OracleOccurrence&) const = default;
};

struct OracleConstruction {
  bool maximal = false;
  std::vector<OracleOccurrence> occurrences;  // sorted
};

/// fribble -> surviving sequence -> details; fribbles without survivors absent.
using OracleExtraction = std::map<FribbleId, std::map<LemmaSeq, OracleConstruction>>;

OracleExtraction extract(const Dialogue& d);

/// Non-disfluent lemma stream of an utterance.
LemmaSeq stream(const shacon::Utterance& u);

// --- statistics ---

/// Rank of v[i]: number of smaller values plus half the number of equal ones
/// plus one half.
std::vector<double> ranks(const std::vector<double>& v);
double pearson(const std::vector<double>& x, const std::vector<double>& y);
/// 1 - 6 sum d^2 / (n (n^2 - 1)); valid without ties.
double spearman_no_ties(const std::vector<double>& x, const std::vector<double>& y);
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);
/// Regularized incomplete beta by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);
double t_two_sided_p(double t, double df);
double spearman_p(double rho, std::size_t n);

struct TResult {
  double t;
  double df;
  double p;
};
TResult welch(const std::vector<double>& a, const std::vector<double>& b);
TResult paired(const std::vector<double>& a, const std::vector<double>& b);

// --- random inputs ---

struct MiniConfig {
  int utterances_per_speaker_max = 5;
  int length_max = 8;
  int vocab = 10;
  int fribbles = 2;
  int rounds = 2;
  double disfluency = 0.1;
};

/// A random dialogue with speakers "A" and "B". Lemma "w<k>" gets a random
/// tag per token drawn from a small content/function mix.
Dialogue random_dialogue(shacon::SplitMix64& rng, const MiniConfig& cfg = {}, const std::string& dyad = "m");

/// A random valid corpus (several dialogues plus namings) for round trips.
shacon::Corpus random_corpus(shacon::SplitMix64& rng);

}  // namespace oracle
