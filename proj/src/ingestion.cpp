#include "shacon/ingestion.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"

namespace shacon {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ParseError::ParseError(std::string file, std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + (field.empty() ? "" : ": field '" + field + "'") +
                         ": " + message),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

namespace {

struct Locator {
  std::string file;
  std::size_t line;

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(file, line, field, message);
  }

  const json& member(const json& obj, const std::string& key, const std::string& prefix = "") const {
    if (!obj.is_object()) fail(prefix.empty() ? "<record>" : prefix, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(prefix + key, "missing field");
    return *it;
  }

  std::string str(const json& obj, const std::string& key, const std::string& prefix = "") const {
    const auto& v = member(obj, key, prefix);
    if (!v.is_string()) fail(prefix + key, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const json& obj, const std::string& key, const std::string& prefix = "") const {
    const auto& v = member(obj, key, prefix);
    if (!v.is_number_integer()) fail(prefix + key, "expected an integer");
    return v.get<std::int64_t>();
  }
};

json parse_line(const Locator& loc, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    loc.fail("", std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename Fn>
void for_each_record(const fs::path& p, const std::string& name, Fn&& fn) {
  if (!fs::exists(p)) return;
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    Locator loc{name, line_no};
    fn(loc, parse_line(loc, text));
  }
}

Token parse_token(const Locator& loc, const json& t, const std::string& field) {
  if (!t.is_array() || t.size() != 4) loc.fail(field, "expected [surface, lemma, pos, disfluency]");
  if (!t[0].is_string()) loc.fail(field + "[0]", "surface must be a string");
  if (!t[1].is_string()) loc.fail(field + "[1]", "lemma must be a string");
  if (!t[2].is_string()) loc.fail(field + "[2]", "pos must be a string");
  if (!t[3].is_boolean()) loc.fail(field + "[3]", "disfluency must be a boolean");
  const auto tag = t[2].get<std::string>();
  auto pos = parse_pos(tag);
  if (!pos) loc.fail(field + "[2]", "unknown POS tag '" + tag + "'");
  return Token{t[0].get<std::string>(), t[1].get<std::string>(), *pos, t[3].get<bool>()};
}

using TrialKey = std::tuple<DyadId, FribbleId, int>;

}  // namespace

Corpus read_corpus(const fs::path& bundle) {
  const fs::path manifest_path = bundle / kManifestFile;
  if (!fs::exists(manifest_path)) throw IoError("missing " + manifest_path.string());

  Corpus c;
  Locator mloc{kManifestFile, 0};
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    mloc.fail("", std::string("malformed JSON: ") + e.what());
  }
  const auto version = mloc.str(manifest, "format_version");
  if (version != kFormatVersion) {
    mloc.fail("format_version", "version mismatch: expected " + std::string(kFormatVersion) + ", got " + version);
  }
  const auto rounds = mloc.integer(manifest, "rounds");

  if (auto it = manifest.find("pseudo"); it != manifest.end()) {
    if (!it->is_boolean()) mloc.fail("pseudo", "expected a boolean");
    c.provenance.pseudo = it->get<bool>();
  }
  if (auto it = manifest.find("pseudo_seed"); it != manifest.end()) {
    if (!it->is_number_unsigned()) mloc.fail("pseudo_seed", "expected a non-negative integer");
    c.provenance.seed = it->get<std::uint64_t>();
  }
  if (auto it = manifest.find("pseudo_plan"); it != manifest.end()) {
    if (!it->is_array()) mloc.fail("pseudo_plan", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        mloc.fail("pseudo_plan[" + std::to_string(i) + "]", "expected [director_source, matcher_source]");
      }
      c.provenance.plan.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  const auto& dyads = mloc.member(manifest, "dyads");
  if (!dyads.is_array()) mloc.fail("dyads", "expected an array");

  std::map<TrialKey, std::pair<std::size_t, std::size_t>> trial_slot;
  for (std::size_t di = 0; di < dyads.size(); ++di) {
    const std::string prefix = "dyads[" + std::to_string(di) + "].";
    const auto& dj = dyads[di];
    Dialogue d;
    d.dyad = mloc.str(dj, "id", prefix);
    if (c.find_dialogue(d.dyad) != nullptr) mloc.fail(prefix + "id", "duplicate dyad '" + d.dyad + "'");
    const auto& sp = mloc.member(dj, "speakers", prefix);
    if (!sp.is_array() || sp.size() != 2 || !sp[0].is_string() || !sp[1].is_string()) {
      mloc.fail(prefix + "speakers", "expected exactly two speaker ids");
    }
    d.speakers = {sp[0].get<std::string>(), sp[1].get<std::string>()};
    d.rounds = static_cast<int>(dj.contains("rounds") ? mloc.integer(dj, "rounds", prefix) : rounds);
    if (d.rounds > rounds) mloc.fail(prefix + "rounds", "exceeds manifest rounds");

    const auto& trials = mloc.member(dj, "trials", prefix);
    if (!trials.is_array()) mloc.fail(prefix + "trials", "expected an array");
    for (std::size_t ti = 0; ti < trials.size(); ++ti) {
      const std::string tprefix = prefix + "trials[" + std::to_string(ti) + "].";
      Trial t;
      t.fribble = mloc.str(trials[ti], "fribble", tprefix);
      t.round = static_cast<int>(mloc.integer(trials[ti], "round", tprefix));
      t.director = mloc.str(trials[ti], "director", tprefix);
      t.matcher = mloc.str(trials[ti], "matcher", tprefix);
      TrialKey key{d.dyad, t.fribble, t.round};
      if (trial_slot.contains(key)) {
        mloc.fail(tprefix + "fribble",
                  "duplicate trial (" + d.dyad + ", " + t.fribble + ", " + std::to_string(t.round) + ")");
      }
      trial_slot[key] = {c.dialogues.size(), d.trials.size()};
      d.trials.push_back(std::move(t));
    }
    c.dialogues.push_back(std::move(d));
  }

  for_each_record(bundle / kTranscriptsFile, kTranscriptsFile, [&](const Locator& loc, const json& r) {
    const auto dyad = loc.str(r, "dyad");
    const auto fribble = loc.str(r, "fribble");
    const auto round = static_cast<int>(loc.integer(r, "round"));
    Utterance u;
    u.speaker = loc.str(r, "speaker");
    u.global_index = loc.integer(r, "index");
    const auto& tokens = loc.member(r, "tokens");
    if (!tokens.is_array()) loc.fail("tokens", "expected an array");
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      u.tokens.push_back(parse_token(loc, tokens[k], "tokens[" + std::to_string(k) + "]"));
    }
    if (c.find_dialogue(dyad) == nullptr) loc.fail("dyad", "dyad '" + dyad + "' not in manifest");
    auto it = trial_slot.find({dyad, fribble, round});
    if (it == trial_slot.end()) {
      loc.fail("fribble", "no trial (" + dyad + ", " + fribble + ", " + std::to_string(round) + ") in manifest");
    }
    c.dialogues[it->second.first].trials[it->second.second].utterances.push_back(std::move(u));
  });

  for_each_record(bundle / kNamingsFile, kNamingsFile, [&](const Locator& loc, const json& r) {
    NamingRecord n;
    n.speaker = loc.str(r, "speaker");
    n.fribble = loc.str(r, "fribble");
    const auto phase = loc.str(r, "phase");
    auto p = parse_phase(phase);
    if (!p) loc.fail("phase", "expected 'pre' or 'post', got '" + phase + "'");
    n.phase = *p;
    const auto& lemmas = loc.member(r, "lemmas");
    if (!lemmas.is_array()) loc.fail("lemmas", "expected an array");
    for (std::size_t k = 0; k < lemmas.size(); ++k) {
      if (!lemmas[k].is_string()) loc.fail("lemmas[" + std::to_string(k) + "]", "expected a string");
      n.lemmas.push_back(lemmas[k].get<std::string>());
    }
    c.namings.push_back(std::move(n));
  });

  return canonicalize(std::move(c));
}

Corpus parse_corpus(const fs::path& bundle) {
  Corpus c = read_corpus(bundle);
  auto report = validate(c);
  if (!report.empty()) throw ValidationError(std::move(report));
  return c;
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

}  // namespace

void write_corpus(const Corpus& input, const fs::path& bundle) {
  const Corpus c = canonicalize(input);
  std::error_code ec;
  fs::create_directories(bundle, ec);
  if (ec) throw IoError("cannot create " + bundle.string() + ": " + ec.message());

  int rounds = 0;
  for (const auto& d : c.dialogues) rounds = std::max(rounds, d.rounds);

  ordered_json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["rounds"] = rounds;
  manifest["pseudo"] = c.provenance.pseudo;
  if (c.provenance.seed) manifest["pseudo_seed"] = *c.provenance.seed;
  if (!c.provenance.plan.empty()) {
    auto plan = ordered_json::array();
    for (const auto& [a, b] : c.provenance.plan) plan.push_back({a, b});
    manifest["pseudo_plan"] = std::move(plan);
  }
  auto dyads = ordered_json::array();
  for (const auto& d : c.dialogues) {
    ordered_json dj;
    dj["id"] = d.dyad;
    dj["speakers"] = {d.speakers.first, d.speakers.second};
    dj["rounds"] = d.rounds;
    auto trials = ordered_json::array();
    for (const auto& t : d.trials) {
      ordered_json tj;
      tj["fribble"] = t.fribble;
      tj["round"] = t.round;
      tj["director"] = t.director;
      tj["matcher"] = t.matcher;
      trials.push_back(std::move(tj));
    }
    dj["trials"] = std::move(trials);
    dyads.push_back(std::move(dj));
  }
  manifest["dyads"] = std::move(dyads);
  write_text(bundle / kManifestFile, manifest.dump(1) + "\n");

  // Transcript records go out sorted by (dyad, round, global index).
  struct Row {
    int round;
    std::int64_t index;
    const Trial* trial;
    const Utterance* utterance;
  };
  std::string transcripts;
  for (const auto& d : c.dialogues) {
    std::vector<Row> rows;
    for (const auto& t : d.trials) {
      for (const auto& u : t.utterances) rows.push_back({t.round, u.global_index, &t, &u});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return std::tie(a.round, a.index) < std::tie(b.round, b.index); });
    for (const auto& row : rows) {
      ordered_json r;
      r["dyad"] = d.dyad;
      r["round"] = row.round;
      r["fribble"] = row.trial->fribble;
      r["speaker"] = row.utterance->speaker;
      r["index"] = row.index;
      auto tokens = ordered_json::array();
      for (const auto& tok : row.utterance->tokens) {
        tokens.push_back({tok.surface, tok.lemma, std::string(to_string(tok.pos)), tok.disfluency});
      }
      r["tokens"] = std::move(tokens);
      transcripts += r.dump() + "\n";
    }
  }

  std::string namings;
  for (const auto& n : c.namings) {
    ordered_json r;
    r["speaker"] = n.speaker;
    r["fribble"] = n.fribble;
    r["phase"] = std::string(to_string(n.phase));
    r["lemmas"] = n.lemmas;
    namings += r.dump() + "\n";
  }

  for (const auto& [name, text] : {std::pair{kTranscriptsFile, &transcripts}, std::pair{kNamingsFile, &namings}}) {
    const auto p = bundle / name;
    if (text->empty()) {
      fs::remove(p, ec);
    } else {
      write_text(p, *text);
    }
  }
}

}  // namespace shacon
