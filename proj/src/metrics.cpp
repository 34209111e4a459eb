#include "shacon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shacon {

double lexical_cosine(const LemmaVector& a, const LemmaVector& b) {
  if (a.empty() || b.empty()) throw UndefinedSimilarity("cosine similarity of an empty lemma vector");
  std::size_t common = 0;
  for (const auto& l : a) common += b.count(l);
  return static_cast<double>(common) /
         (std::sqrt(static_cast<double>(a.size())) * std::sqrt(static_cast<double>(b.size())));
}

double lexical_cosine(std::span<const Lemma> a, std::span<const Lemma> b) {
  return lexical_cosine(LemmaVector(a.begin(), a.end()), LemmaVector(b.begin(), b.end()));
}

std::vector<RoundCoverage> coverage_counts(const Dialogue& d, const ExtractionResult& extraction) {
  std::vector<RoundCoverage> out(static_cast<std::size_t>(std::max(d.rounds, 0)));
  for (std::size_t r = 0; r < out.size(); ++r) out[r].round = static_cast<int>(r) + 1;

  for (const auto& t : d.trials) {
    if (t.round < 1 || t.round > d.rounds) continue;
    std::set<std::int64_t> covered;
    if (auto it = extraction.find(t.fribble); it != extraction.end()) {
      for (const auto& c : it->second) {
        for (const auto& occ : c.occurrences) covered.insert(occ.utterance_index);
      }
    }
    auto& rc = out[static_cast<std::size_t>(t.round - 1)];
    for (const auto& u : t.utterances) {
      if (!d.has_speaker(u.speaker)) continue;
      ++rc.utterances;
      if (covered.contains(u.global_index)) ++rc.covered;
    }
  }
  return out;
}

std::vector<std::optional<double>> utterance_coverage(const Dialogue& d, const ExtractionResult& extraction) {
  std::vector<std::optional<double>> out;
  for (const auto& rc : coverage_counts(d, extraction)) out.push_back(rc.fraction());
  return out;
}

NameOverlap name_overlap(const NamingRecord& name, std::span<const ConstructionType> types) {
  NameOverlap out;
  if (types.empty()) return out;
  const LemmaVector nv(name.lemmas.begin(), name.lemmas.end());
  for (const auto& t : types) out.per_type.push_back(lexical_cosine(nv, t.lemma_set()));
  out.max_sim = *std::max_element(out.per_type.begin(), out.per_type.end());
  out.mean_sim = std::accumulate(out.per_type.begin(), out.per_type.end(), 0.0) /
                 static_cast<double>(out.per_type.size());
  out.overlaps = out.max_sim > 0.0;
  return out;
}

ConvergenceRecord convergence(const DyadId& dyad, const NamingRecord& pre_a, const NamingRecord& pre_b,
                              const NamingRecord& post_a, const NamingRecord& post_b) {
  const auto& f = pre_a.fribble;
  if (pre_b.fribble != f || post_a.fribble != f || post_b.fribble != f) {
    throw std::invalid_argument("convergence needs four namings of the same fribble");
  }
  ConvergenceRecord r{dyad, f, lexical_cosine(pre_a.lemmas, pre_b.lemmas), lexical_cosine(post_a.lemmas, post_b.lemmas),
                      0.0};
  r.delta = r.s_post - r.s_pre;
  return r;
}

}  // namespace shacon
