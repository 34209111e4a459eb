#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shacon/corpus.hpp"

namespace shacon {

/// (director source dyad, matcher source dyad)
using PseudoAssignment = std::pair<DyadId, DyadId>;

struct PseudoPairPlan {
  std::uint64_t seed = 0;
  /// One entry per input dyad, in input order of the director source. The
  /// matcher sources form a single cycle over the dyads, so no entry pairs
  /// a dyad with itself and every dyad is used once in each role.
  std::vector<PseudoAssignment> assignments;

  bool operator==(const PseudoPairPlan&) const = default;
};

class IncompatibleSources : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PseudoPairPlan plan_pseudo_pairs(std::span<const DyadId> dyads, std::uint64_t seed);

/// Pseudo dyad id "<director source>~<matcher source>".
DyadId pseudo_dyad_id(const PseudoAssignment& entry);

/// Builds one control dialogue. Its two speakers are "<pseudo dyad>/D"
/// (always directs) and "<pseudo dyad>/M" (always matches). Each trial holds the
/// director's utterances from the director source's trial followed by the
/// matcher's utterances from the matcher source's trial for the same
/// (fribble, round), each block in original order; global indices are
/// renumbered from 0 in (round, fribble) trial order. A self-pairing is
/// accepted and reproduces the source's utterances.
Dialogue materialize_pseudo_dialogue(const PseudoAssignment& entry, const Corpus& corpus);

/// All dialogues of the plan plus their namings: the director-side speaker
/// takes the namings of the director source's first speaker, the
/// matcher-side speaker those of the matcher source's second speaker.
Corpus build_pseudo_corpus(const Corpus& corpus, const PseudoPairPlan& plan);

}  // namespace shacon
