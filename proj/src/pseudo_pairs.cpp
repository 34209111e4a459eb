#include "shacon/pseudo_pairs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "shacon/rng.hpp"

namespace shacon {

PseudoPairPlan plan_pseudo_pairs(std::span<const DyadId> dyads, std::uint64_t seed) {
  if (dyads.size() < 2) throw std::invalid_argument("pseudo-pairs need at least 2 dyads");
  if (std::set<DyadId>(dyads.begin(), dyads.end()).size() != dyads.size()) {
    throw std::invalid_argument("pseudo-pair dyad ids must be distinct");
  }

  // Sattolo's algorithm: a uniformly random single-cycle permutation.
  std::vector<std::size_t> next(dyads.size());
  std::iota(next.begin(), next.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t i = next.size() - 1; i > 0; --i) {
    std::swap(next[i], next[rng.below(i)]);
  }

  PseudoPairPlan plan{seed, {}};
  plan.assignments.reserve(dyads.size());
  for (std::size_t i = 0; i < dyads.size(); ++i) plan.assignments.emplace_back(dyads[i], dyads[next[i]]);
  return plan;
}

DyadId pseudo_dyad_id(const PseudoAssignment& entry) { return entry.first + "~" + entry.second; }

Dialogue materialize_pseudo_dialogue(const PseudoAssignment& entry, const Corpus& corpus) {
  const Dialogue* dir_src = corpus.find_dialogue(entry.first);
  const Dialogue* mat_src = corpus.find_dialogue(entry.second);
  if (dir_src == nullptr) throw IncompatibleSources("unknown dyad " + entry.first);
  if (mat_src == nullptr) throw IncompatibleSources("unknown dyad " + entry.second);
  if (dir_src->fribbles() != mat_src->fribbles()) {
    throw IncompatibleSources("dyads " + entry.first + " and " + entry.second + " cover different fribbles");
  }

  std::map<std::pair<FribbleId, int>, const Trial*> mat_trials;
  for (const auto& t : mat_src->trials) mat_trials[{t.fribble, t.round}] = &t;

  Dialogue d;
  d.dyad = pseudo_dyad_id(entry);
  d.speakers = {d.dyad + "/D", d.dyad + "/M"};
  d.rounds = std::max(dir_src->rounds, mat_src->rounds);

  std::vector<const Trial*> order;
  for (const auto& t : dir_src->trials) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](const Trial* a, const Trial* b) { return std::tie(a->round, a->fribble) < std::tie(b->round, b->fribble); });

  std::int64_t next_index = 0;
  auto copy_block = [&next_index](const Trial& src, const SpeakerId& role_speaker, const SpeakerId& as,
                                  std::vector<Utterance>& out) {
    std::vector<const Utterance*> block;
    for (const auto& u : src.utterances) {
      if (u.speaker == role_speaker) block.push_back(&u);
    }
    std::stable_sort(block.begin(), block.end(),
                     [](const Utterance* a, const Utterance* b) { return a->global_index < b->global_index; });
    for (const auto* u : block) out.push_back({as, u->tokens, next_index++});
  };

  for (const auto* t : order) {
    Trial pt;
    pt.fribble = t->fribble;
    pt.round = t->round;
    pt.director = d.speakers.first;
    pt.matcher = d.speakers.second;
    copy_block(*t, t->director, d.speakers.first, pt.utterances);
    if (auto it = mat_trials.find({t->fribble, t->round}); it != mat_trials.end()) {
      copy_block(*it->second, it->second->matcher, d.speakers.second, pt.utterances);
    }
    d.trials.push_back(std::move(pt));
  }
  return d;
}

Corpus build_pseudo_corpus(const Corpus& corpus, const PseudoPairPlan& plan) {
  std::map<SpeakerId, std::vector<const NamingRecord*>> namings_of;
  for (const auto& n : corpus.namings) namings_of[n.speaker].push_back(&n);

  Corpus out;
  out.provenance.pseudo = true;
  out.provenance.seed = plan.seed;
  out.provenance.plan = plan.assignments;
  for (const auto& entry : plan.assignments) {
    Dialogue d = materialize_pseudo_dialogue(entry, corpus);
    const auto& dir_person = corpus.find_dialogue(entry.first)->speakers.first;
    const auto& mat_person = corpus.find_dialogue(entry.second)->speakers.second;
    for (const auto& [person, as] : {std::pair{&dir_person, &d.speakers.first}, std::pair{&mat_person, &d.speakers.second}}) {
      for (const auto* n : namings_of[*person]) out.namings.push_back({*as, n->fribble, n->phase, n->lemmas});
    }
    out.dialogues.push_back(std::move(d));
  }
  return canonicalize(std::move(out));
}

}  // namespace shacon
