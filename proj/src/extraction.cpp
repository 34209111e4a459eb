#include "shacon/extraction.hpp"

#include <algorithm>
#include <limits>
#include <string_view>
#include <tuple>
#include <unordered_map>

namespace shacon {

namespace {

constexpr std::uint32_t kNoNode = std::numeric_limits<std::uint32_t>::max();

class LemmaInterner {
 public:
  std::uint32_t id(const Lemma& lemma) {
    auto [it, fresh] = ids_.try_emplace(lemma, static_cast<std::uint32_t>(names_.size()));
    if (fresh) names_.push_back(&it->first);
    return it->second;
  }
  std::uint32_t find(const Lemma& lemma) const {
    auto it = ids_.find(lemma);
    return it == ids_.end() ? kNoNode : it->second;
  }
  const Lemma& name(std::uint32_t id) const { return *names_[id]; }

  std::vector<std::uint32_t> encode(const LemmaSeq& seq) {
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (const auto& l : seq) out.push_back(id(l));
    return out;
  }

 private:
  std::unordered_map<Lemma, std::uint32_t> ids_;
  std::vector<const Lemma*> names_;
};

// Trie over lemma ids. Node 0 is the root (the empty sequence).
class SequenceTrie {
 public:
  SequenceTrie() : parent_{kNoNode}, label_{kNoNode}, depth_{0} {}

  std::uint32_t child(std::uint32_t node, std::uint32_t lemma) const {
    auto it = children_.find(key(node, lemma));
    return it == children_.end() ? kNoNode : it->second;
  }

  std::uint32_t add_child(std::uint32_t node, std::uint32_t lemma) {
    auto [it, fresh] = children_.try_emplace(key(node, lemma), static_cast<std::uint32_t>(parent_.size()));
    if (fresh) {
      parent_.push_back(node);
      label_.push_back(lemma);
      depth_.push_back(depth_[node] + 1);
    }
    return it->second;
  }

  /// Inserts every contiguous subsequence of `stream`.
  void insert_substrings(std::span<const std::uint32_t> stream) {
    for (std::size_t i = 0; i < stream.size(); ++i) {
      std::uint32_t node = 0;
      for (std::size_t j = i; j < stream.size(); ++j) node = add_child(node, stream[j]);
    }
  }

  std::uint32_t insert(std::span<const std::uint32_t> seq) {
    std::uint32_t node = 0;
    for (auto l : seq) node = add_child(node, l);
    return node;
  }

  std::uint32_t lookup(std::span<const std::uint32_t> seq) const {
    std::uint32_t node = 0;
    for (auto l : seq) {
      node = child(node, l);
      if (node == kNoNode) return kNoNode;
    }
    return node;
  }

  std::vector<std::uint32_t> path(std::uint32_t node) const {
    std::vector<std::uint32_t> out(depth_[node]);
    for (auto i = out.size(); i > 0; --i) {
      out[i - 1] = label_[node];
      node = parent_[node];
    }
    return out;
  }

  std::size_t size() const { return parent_.size(); }
  std::uint32_t parent(std::uint32_t node) const { return parent_[node]; }
  std::uint32_t depth(std::uint32_t node) const { return depth_[node]; }

 private:
  static std::uint64_t key(std::uint32_t node, std::uint32_t lemma) {
    return (static_cast<std::uint64_t>(node) << 32) | lemma;
  }

  std::unordered_map<std::uint64_t, std::uint32_t> children_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> label_;
  std::vector<std::uint32_t> depth_;
};

LemmaSeq decode(const LemmaInterner& interner, std::span<const std::uint32_t> ids) {
  LemmaSeq out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(interner.name(id));
  return out;
}

std::vector<SharedSequence> shared_sequences_impl(std::span<const LemmaSeq> a, std::span<const LemmaSeq> b) {
  LemmaInterner interner;
  SequenceTrie trie;
  for (const auto& stream : b) trie.insert_substrings(interner.encode(stream));

  std::vector<bool> shared(trie.size(), false);
  for (const auto& stream : a) {
    std::vector<std::uint32_t> ids;
    ids.reserve(stream.size());
    for (const auto& l : stream) ids.push_back(interner.find(l));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::uint32_t node = 0;
      for (std::size_t j = i; j < ids.size() && ids[j] != kNoNode; ++j) {
        node = trie.child(node, ids[j]);
        if (node == kNoNode) break;
        shared[node] = true;
      }
    }
  }

  // A shared sequence of length k+1 makes both its length-k prefix and
  // suffix non-maximal; both are shared by downward closure.
  std::vector<bool> extendable(trie.size(), false);
  for (std::uint32_t n = 1; n < trie.size(); ++n) {
    if (!shared[n] || trie.depth(n) < 2) continue;
    extendable[trie.parent(n)] = true;
    auto p = trie.path(n);
    extendable[trie.lookup(std::span(p).subspan(1))] = true;
  }

  std::vector<SharedSequence> out;
  for (std::uint32_t n = 1; n < trie.size(); ++n) {
    if (shared[n]) out.push_back({decode(interner, trie.path(n)), !extendable[n]});
  }
  std::sort(out.begin(), out.end(),
            [](const SharedSequence& x, const SharedSequence& y) { return x.lemmas < y.lemmas; });
  return out;
}

std::vector<LemmaSeq> streams_of(std::span<const Utterance> us) {
  std::vector<LemmaSeq> out;
  out.reserve(us.size());
  for (const auto& u : us) out.push_back(lemma_stream(u));
  return out;
}

}  // namespace

LemmaSeq SharedConstruction::content_lemmas() const {
  LemmaSeq out;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    if (content[i]) out.push_back(lemmas[i]);
  }
  return out;
}

std::vector<SharedSequence> cross_speaker_sequences(std::span<const LemmaSeq> a, std::span<const LemmaSeq> b) {
  return shared_sequences_impl(a, b);
}

std::vector<SharedSequence> cross_speaker_sequences(std::span<const Utterance> a, std::span<const Utterance> b) {
  const auto sa = streams_of(a);
  const auto sb = streams_of(b);
  return shared_sequences_impl(sa, sb);
}

ContentEvidence collect_content_evidence(std::span<const Trial* const> trials) {
  ContentEvidence out;
  for (const auto* t : trials) {
    for (const auto& u : t->utterances) {
      for (const auto& tok : u.tokens) {
        if (!tok.disfluency && is_content(tok.pos)) out.insert(tok.lemma);
      }
    }
  }
  return out;
}

std::vector<SharedSequence> filter_function_word_only(std::vector<SharedSequence> seqs,
                                                      const ContentEvidence& content) {
  std::erase_if(seqs, [&content](const SharedSequence& s) {
    return std::none_of(s.lemmas.begin(), s.lemmas.end(), [&content](const Lemma& l) { return content.contains(l); });
  });
  return seqs;
}

std::map<FribbleId, std::vector<SharedSequence>> filter_multi_referent(
    std::map<FribbleId, std::vector<SharedSequence>> per_fribble) {
  std::map<LemmaSeq, int> fribble_count;
  for (const auto& [fribble, seqs] : per_fribble) {
    std::set<LemmaSeq> distinct;
    for (const auto& s : seqs) distinct.insert(s.lemmas);
    for (const auto& l : distinct) ++fribble_count[l];
  }
  for (auto& [fribble, seqs] : per_fribble) {
    std::erase_if(seqs, [&fribble_count](const SharedSequence& s) { return fribble_count[s.lemmas] >= 2; });
  }
  return per_fribble;
}

ExtractionResult extract_shared_constructions(const Dialogue& d) {
  std::map<FribbleId, std::vector<const Trial*>> by_fribble;
  for (const auto& t : d.trials) by_fribble[t.fribble].push_back(&t);
  for (auto& [f, trials] : by_fribble) {
    std::stable_sort(trials.begin(), trials.end(), [](const Trial* x, const Trial* y) { return x->round < y->round; });
  }

  std::map<FribbleId, std::vector<SharedSequence>> per_fribble;
  std::map<FribbleId, ContentEvidence> evidence;
  for (const auto& [fribble, trials] : by_fribble) {
    std::vector<LemmaSeq> a;
    std::vector<LemmaSeq> b;
    for (const auto* t : trials) {
      for (const auto& u : t->utterances) {
        if (u.speaker == d.speakers.first) {
          a.push_back(lemma_stream(u));
        } else if (u.speaker == d.speakers.second) {
          b.push_back(lemma_stream(u));
        }
      }
    }
    auto& ev = evidence[fribble] = collect_content_evidence(trials);
    per_fribble[fribble] = filter_function_word_only(cross_speaker_sequences(a, b), ev);
  }
  per_fribble = filter_multi_referent(std::move(per_fribble));

  ExtractionResult result;
  for (const auto& [fribble, seqs] : per_fribble) {
    if (seqs.empty()) continue;
    const auto& ev = evidence[fribble];

    LemmaInterner interner;
    SequenceTrie trie;
    std::vector<std::size_t> terminal;  // trie node -> index into seqs, or npos
    constexpr auto npos = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      auto node = trie.insert(interner.encode(seqs[i].lemmas));
      if (terminal.size() < trie.size()) terminal.resize(trie.size(), npos);
      terminal[node] = i;
    }
    terminal.resize(trie.size(), npos);

    std::vector<SharedConstruction> constructions(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      auto& c = constructions[i];
      c.lemmas = seqs[i].lemmas;
      c.fribble = fribble;
      c.is_maximal = seqs[i].maximal;
      c.content.reserve(c.lemmas.size());
      for (const auto& l : c.lemmas) c.content.push_back(ev.contains(l));
    }

    for (const auto* t : by_fribble[fribble]) {
      for (const auto& u : t->utterances) {
        if (!d.has_speaker(u.speaker)) continue;
        const auto stream = lemma_stream(u);
        std::vector<std::uint32_t> ids;
        ids.reserve(stream.size());
        for (const auto& l : stream) ids.push_back(interner.find(l));
        for (std::size_t i = 0; i < ids.size(); ++i) {
          std::uint32_t node = 0;
          for (std::size_t j = i; j < ids.size() && ids[j] != kNoNode; ++j) {
            node = trie.child(node, ids[j]);
            if (node == kNoNode) break;
            if (terminal[node] != npos) {
              constructions[terminal[node]].occurrences.push_back({u.speaker, t->round, u.global_index, i});
            }
          }
        }
      }
    }

    for (auto& c : constructions) {
      std::sort(c.occurrences.begin(), c.occurrences.end(), [](const Occurrence& x, const Occurrence& y) {
        return std::tie(x.utterance_index, x.token_offset) < std::tie(y.utterance_index, y.token_offset);
      });
    }
    std::sort(constructions.begin(), constructions.end(),
              [](const SharedConstruction& x, const SharedConstruction& y) {
                const auto& fx = x.occurrences.front();
                const auto& fy = y.occurrences.front();
                return std::forward_as_tuple(fx.utterance_index, fx.token_offset, x.lemmas.size(), x.lemmas) <
                       std::forward_as_tuple(fy.utterance_index, fy.token_offset, y.lemmas.size(), y.lemmas);
              });
    result.emplace(fribble, std::move(constructions));
  }
  return result;
}

}  // namespace shacon
