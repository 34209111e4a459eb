#include "shacon/corpus.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <tuple>

namespace shacon {

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 15> kPosNames{{
    {Pos::NOUN, "NOUN"},
    {Pos::VERB, "VERB"},
    {Pos::ADJ, "ADJ"},
    {Pos::ADV, "ADV"},
    {Pos::PRON, "PRON"},
    {Pos::DET, "DET"},
    {Pos::ADP, "ADP"},
    {Pos::CCONJ, "CCONJ"},
    {Pos::SCONJ, "SCONJ"},
    {Pos::NUM, "NUM"},
    {Pos::PART, "PART"},
    {Pos::INTJ, "INTJ"},
    {Pos::AUX, "AUX"},
    {Pos::ADV_OTHER, "ADV_OTHER"},
    {Pos::X, "X"},
}};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string trial_locator(const Dialogue& d, const Trial& t) {
  return "dyad " + d.dyad + " fribble " + t.fribble + " round " + std::to_string(t.round);
}

}  // namespace

std::string_view to_string(Pos pos) {
  for (const auto& [p, name] : kPosNames) {
    if (p == pos) return name;
  }
  return "X";
}

std::optional<Pos> parse_pos(std::string_view tag) {
  for (const auto& [p, name] : kPosNames) {
    if (name == tag) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Phase phase) { return phase == Phase::PRE ? "pre" : "post"; }

std::optional<Phase> parse_phase(std::string_view tag) {
  if (tag == "pre") return Phase::PRE;
  if (tag == "post") return Phase::POST;
  return std::nullopt;
}

std::vector<FribbleId> Dialogue::fribbles() const {
  std::set<FribbleId> ids;
  for (const auto& t : trials) ids.insert(t.fribble);
  return {ids.begin(), ids.end()};
}

const Dialogue* Corpus::find_dialogue(std::string_view dyad) const {
  for (const auto& d : dialogues) {
    if (d.dyad == dyad) return &d;
  }
  return nullptr;
}

std::vector<Lemma> content_lemmas(const Utterance& u) {
  std::vector<Lemma> out;
  for (const auto& tok : u.tokens) {
    if (!tok.disfluency && is_content(tok.pos)) out.push_back(tok.lemma);
  }
  return out;
}

std::vector<Lemma> lemma_stream(const Utterance& u) {
  std::vector<Lemma> out;
  out.reserve(u.tokens.size());
  for (const auto& tok : u.tokens) {
    if (!tok.disfluency) out.push_back(tok.lemma);
  }
  return out;
}

bool is_normalized_lemma(std::string_view lemma) {
  if (lemma.empty() || !valid_utf8(lemma)) return false;
  return std::none_of(lemma.begin(), lemma.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

ValidationReport validate(const Corpus& c) {
  ValidationReport report;
  auto add = [&report](std::string where, std::string message) {
    report.push_back({std::move(where), std::move(message)});
  };

  std::set<DyadId> dyads;
  // speaker -> dyad, for the global uniqueness of speaker ids
  std::map<SpeakerId, DyadId> speaker_dyad;
  std::map<SpeakerId, std::set<FribbleId>> speaker_fribbles;

  for (const auto& d : c.dialogues) {
    const std::string dwhere = "dyad " + d.dyad;
    if (d.dyad.empty()) add(dwhere, "empty dyad id");
    if (!dyads.insert(d.dyad).second) add(dwhere, "duplicate dyad id");
    if (d.speakers.first.empty() || d.speakers.second.empty()) add(dwhere, "empty speaker id");
    if (d.speakers.first == d.speakers.second) add(dwhere, "dialogue needs two distinct speakers");
    if (d.rounds < 1) add(dwhere, "rounds must be >= 1");
    for (const auto* s : {&d.speakers.first, &d.speakers.second}) {
      if (s->empty()) continue;
      auto [it, fresh] = speaker_dyad.emplace(*s, d.dyad);
      if (!fresh && it->second != d.dyad) {
        add(dwhere, "speaker " + *s + " also belongs to dyad " + it->second);
      }
    }

    std::set<std::pair<FribbleId, int>> seen_trials;
    std::map<std::int64_t, std::string> seen_indices;
    for (const auto& t : d.trials) {
      const std::string twhere = trial_locator(d, t);
      if (t.fribble.empty()) add(twhere, "empty fribble id");
      if (t.round < 1 || t.round > d.rounds) {
        add(twhere, "round outside 1.." + std::to_string(d.rounds));
      }
      if (!seen_trials.emplace(t.fribble, t.round).second) add(twhere, "duplicate (fribble, round) trial");
      if (t.director == t.matcher) add(twhere, "director equals matcher");
      if (!d.has_speaker(t.director)) add(twhere, "director " + t.director + " is not a dyad speaker");
      if (!d.has_speaker(t.matcher)) add(twhere, "matcher " + t.matcher + " is not a dyad speaker");

      std::optional<std::int64_t> previous;
      for (std::size_t ui = 0; ui < t.utterances.size(); ++ui) {
        const auto& u = t.utterances[ui];
        const std::string uwhere = twhere + " utterance " + std::to_string(u.global_index);
        if (!d.has_speaker(u.speaker)) {
          add(uwhere, "speaker " + u.speaker + " is not a dyad speaker");
        } else {
          speaker_fribbles[u.speaker].insert(t.fribble);
        }
        if (u.tokens.empty()) add(uwhere, "utterance has no tokens");
        if (previous && u.global_index <= *previous) add(uwhere, "global index not increasing within trial");
        previous = u.global_index;
        auto [it, fresh] = seen_indices.emplace(u.global_index, twhere);
        if (!fresh) add(uwhere, "global index already used in " + it->second);
        for (std::size_t k = 0; k < u.tokens.size(); ++k) {
          if (!is_normalized_lemma(u.tokens[k].lemma)) {
            add(uwhere + " token " + std::to_string(k),
                "lemma '" + u.tokens[k].lemma + "' is empty, not UTF-8 or not lower case");
          }
        }
      }
    }
    for (const auto* s : {&d.speakers.first, &d.speakers.second}) {
      for (const auto& t : d.trials) speaker_fribbles[*s].insert(t.fribble);
    }
  }

  std::set<std::tuple<SpeakerId, FribbleId, Phase>> seen_namings;
  for (const auto& n : c.namings) {
    const std::string nwhere =
        "naming " + n.speaker + " fribble " + n.fribble + " " + std::string(to_string(n.phase));
    if (!speaker_dyad.contains(n.speaker)) {
      add(nwhere, "unknown speaker " + n.speaker);
    } else if (!speaker_fribbles[n.speaker].contains(n.fribble)) {
      add(nwhere, "fribble " + n.fribble + " never appears in the speaker's dialogue");
    }
    if (n.lemmas.empty()) add(nwhere, "naming has no lemmas");
    for (const auto& l : n.lemmas) {
      if (!is_normalized_lemma(l)) add(nwhere, "lemma '" + l + "' is empty, not UTF-8 or not lower case");
    }
    if (!seen_namings.emplace(n.speaker, n.fribble, n.phase).second) add(nwhere, "duplicate naming record");
  }
  return report;
}

Corpus canonicalize(Corpus c) {
  for (auto& d : c.dialogues) {
    for (auto& t : d.trials) {
      std::stable_sort(t.utterances.begin(), t.utterances.end(),
                       [](const Utterance& a, const Utterance& b) { return a.global_index < b.global_index; });
    }
    std::stable_sort(d.trials.begin(), d.trials.end(), [](const Trial& a, const Trial& b) {
      return std::tie(a.round, a.fribble) < std::tie(b.round, b.fribble);
    });
  }
  std::stable_sort(c.dialogues.begin(), c.dialogues.end(),
                   [](const Dialogue& a, const Dialogue& b) { return a.dyad < b.dyad; });
  std::stable_sort(c.namings.begin(), c.namings.end(), [](const NamingRecord& a, const NamingRecord& b) {
    return std::tie(a.speaker, a.fribble, a.phase) < std::tie(b.speaker, b.fribble, b.phase);
  });
  return c;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string msg = "corpus failed validation with " + std::to_string(report.size()) + " violation(s)";
  if (!report.empty()) msg += ": " + report.front().where + ": " + report.front().message;
  return msg;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

}  // namespace shacon
