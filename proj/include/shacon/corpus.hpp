#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shacon {

using SpeakerId = std::string;
using DyadId = std::string;
using FribbleId = std::string;
using Lemma = std::string;
using LemmaSeq = std::vector<Lemma>;

/// Universal Dependencies coarse tags. ADV_OTHER is kept for corpora that
/// distinguish a secondary adverb class; it is not a content tag.
enum class Pos : std::uint8_t {
  NOUN,
  VERB,
  ADJ,
  ADV,
  PRON,
  DET,
  ADP,
  CCONJ,
  SCONJ,
  NUM,
  PART,
  INTJ,
  AUX,
  ADV_OTHER,
  X,
};

std::string_view to_string(Pos pos);
std::optional<Pos> parse_pos(std::string_view tag);

/// NOUN, VERB, ADJ and ADV are content tags; everything else is a function tag.
constexpr bool is_content(Pos pos) {
  return pos == Pos::NOUN || pos == Pos::VERB || pos == Pos::ADJ || pos == Pos::ADV;
}

enum class Phase : std::uint8_t { PRE, POST };

std::string_view to_string(Phase phase);
std::optional<Phase> parse_phase(std::string_view tag);

struct Token {
  std::string surface;
  Lemma lemma;
  Pos pos = Pos::X;
  bool disfluency = false;

  bool operator==(const Token&) const = default;
};

struct Utterance {
  SpeakerId speaker;
  std::vector<Token> tokens;
  std::int64_t global_index = 0;

  bool operator==(const Utterance&) const = default;
};

struct Trial {
  FribbleId fribble;
  int round = 1;
  SpeakerId director;
  SpeakerId matcher;
  std::vector<Utterance> utterances;

  bool operator==(const Trial&) const = default;
};

struct Dialogue {
  DyadId dyad;
  std::pair<SpeakerId, SpeakerId> speakers;
  int rounds = 6;
  std::vector<Trial> trials;

  bool operator==(const Dialogue&) const = default;

  bool has_speaker(std::string_view id) const {
    return speakers.first == id || speakers.second == id;
  }
  /// Sorted, de-duplicated fribble ids used by the trials.
  std::vector<FribbleId> fribbles() const;
};

struct NamingRecord {
  SpeakerId speaker;
  FribbleId fribble;
  Phase phase = Phase::PRE;
  std::vector<Lemma> lemmas;

  bool operator==(const NamingRecord&) const = default;
};

/// Where a derived corpus came from. Real corpora leave this at its default.
struct Provenance {
  bool pseudo = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<DyadId, DyadId>> plan;

  bool operator==(const Provenance&) const = default;
};

struct Corpus {
  std::vector<Dialogue> dialogues;
  std::vector<NamingRecord> namings;
  Provenance provenance;

  bool operator==(const Corpus&) const = default;

  const Dialogue* find_dialogue(std::string_view dyad) const;
};

struct Violation {
  std::string where;
  std::string message;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

/// Lemmas of the non-disfluent content-tagged tokens, in utterance order.
std::vector<Lemma> content_lemmas(const Utterance& u);

/// Lemmas of all non-disfluent tokens, in utterance order. This is the
/// stream that cross-speaker matching runs over.
std::vector<Lemma> lemma_stream(const Utterance& u);

/// Checks every structural invariant of the corpus model. Never throws;
/// each broken invariant becomes one entry of the report.
ValidationReport validate(const Corpus& c);

/// Lemmas must be non-empty, valid UTF-8 and free of ASCII upper case.
bool is_normalized_lemma(std::string_view lemma);

/// Sorts dialogues by dyad, trials by (round, fribble), utterances by
/// global index and namings by (speaker, fribble, phase).
Corpus canonicalize(Corpus c);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace shacon
