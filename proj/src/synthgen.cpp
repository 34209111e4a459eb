#include "shacon/synthgen.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/rng.hpp"

namespace shacon {

namespace {

constexpr std::array<std::pair<const char*, Pos>, 12> kFunctionWords{{
    {"de", Pos::DET},
    {"het", Pos::DET},
    {"een", Pos::DET},
    {"op", Pos::ADP},
    {"met", Pos::ADP},
    {"van", Pos::ADP},
    {"aan", Pos::ADP},
    {"die", Pos::PRON},
    {"dat", Pos::PRON},
    {"en", Pos::CCONJ},
    {"is", Pos::AUX},
    {"ja", Pos::INTJ},
}};

constexpr std::array<const char*, 3> kFillers{"uh", "eh", "uhm"};
constexpr std::array<Pos, 4> kPrivatePos{Pos::NOUN, Pos::ADJ, Pos::VERB, Pos::ADV};

std::string padded(const std::string& prefix, int value, int width) {
  auto digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

int width_for(int count) { return std::max(2, static_cast<int>(std::to_string(count).size())); }

struct ContentLemma {
  Lemma lemma;
  Pos pos;
};

struct Cell {
  std::vector<Lemma> cores;
  std::array<std::vector<ContentLemma>, 2> privates;
  std::vector<std::vector<Lemma>> survivors;
};

class DyadGenerator {
 public:
  DyadGenerator(const GeneratorConfig& cfg, int dyad_index)
      : cfg_(cfg), rng_(derive_seed(cfg.seed, static_cast<std::uint64_t>(dyad_index))) {
    dialogue_.dyad = padded("d", dyad_index + 1, width_for(cfg.dyads));
    dialogue_.speakers = {dialogue_.dyad + "-a", dialogue_.dyad + "-b"};
    dialogue_.rounds = cfg.rounds;
  }

  void run(Corpus& corpus, GroundTruth& truth) {
    const int fw = width_for(cfg_.fribbles);
    const int vw = static_cast<int>(std::to_string(cfg_.content_vocab).size());
    for (int f = 0; f < cfg_.fribbles; ++f) {
      fribble_ids_.push_back(padded("f", f + 1, fw));
      cells_.push_back(plant(f, vw));
      truth.cells.push_back({dialogue_.dyad, fribble_ids_.back(), cells_.back().cores, cells_.back().survivors,
                             cells_.back().cores.front()});
    }

    for (int r = 1; r <= cfg_.rounds; ++r) {
      std::vector<int> order(static_cast<std::size_t>(cfg_.fribbles));
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, rng_);
      for (int f : order) dialogue_.trials.push_back(make_trial(f, r));
    }
    corpus.dialogues.push_back(std::move(dialogue_));

    const auto& speakers = corpus.dialogues.back().speakers;
    for (int f = 0; f < cfg_.fribbles; ++f) {
      for (const auto* s : {&speakers.first, &speakers.second}) {
        corpus.namings.push_back({*s, fribble_ids_[f], Phase::PRE, random_name(f, vw)});
        corpus.namings.push_back({*s, fribble_ids_[f], Phase::POST, post_name(f, vw)});
      }
    }
  }

 private:
  Lemma pool_lemma(int fribble, int index, int vw) const {
    return padded(fribble_ids_[static_cast<std::size_t>(fribble)] + "w", index, vw);
  }

  Cell plant(int f, int vw) {
    const int cmin = cfg_.cores_min > 0 ? cfg_.cores_min : cfg_.type_prune_schedule.front();
    const int cmax = cfg_.cores_max > 0 ? cfg_.cores_max : cfg_.type_prune_schedule.front();
    const int k = rng_.between(cmin, cmax);
    const int needed = k + 2 * cfg_.private_lemmas;

    // Partial Fisher-Yates over the fribble pool.
    std::vector<int> pool(static_cast<std::size_t>(cfg_.content_vocab));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < needed; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng_.below(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }

    Cell cell;
    for (int i = 0; i < k; ++i) cell.cores.push_back(pool_lemma(f, pool[static_cast<std::size_t>(i)], vw));
    for (int s = 0; s < 2; ++s) {
      for (int i = 0; i < cfg_.private_lemmas; ++i) {
        const int idx = pool[static_cast<std::size_t>(k + s * cfg_.private_lemmas + i)];
        const Pos pos = kPrivatePos[static_cast<std::size_t>(idx) % kPrivatePos.size()];
        if (rng_.chance(cfg_.distractor_overlap)) {
          const int g = static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.content_vocab)));
          cell.privates[static_cast<std::size_t>(s)].push_back({padded("gw", g, vw), pos});
        } else {
          cell.privates[static_cast<std::size_t>(s)].push_back({pool_lemma(f, idx, vw), pos});
        }
      }
    }
    for (int r = 0; r < cfg_.rounds; ++r) {
      const auto alive = static_cast<std::size_t>(std::min(k, cfg_.type_prune_schedule[static_cast<std::size_t>(r)]));
      cell.survivors.emplace_back(cell.cores.begin(), cell.cores.begin() + static_cast<std::ptrdiff_t>(alive));
    }
    return cell;
  }

  Token function_token() {
    const auto n = static_cast<std::size_t>(cfg_.function_vocab);
    const auto i = static_cast<std::size_t>(rng_.below(n));
    if (i < kFunctionWords.size()) return {kFunctionWords[i].first, kFunctionWords[i].first, kFunctionWords[i].second, false};
    const auto lemma = "fw" + std::to_string(i);
    return {lemma, lemma, Pos::PART, false};
  }

  // `rotation` walks the survivors so a speaker cycles through every live
  // core before repeating one within a trial.
  Utterance make_utterance(int f, int r, int speaker, std::size_t& rotation) {
    const auto& cell = cells_[static_cast<std::size_t>(f)];
    const auto& alive = cell.survivors[static_cast<std::size_t>(r - 1)];
    const auto& privates = cell.privates[static_cast<std::size_t>(speaker)];

    std::vector<Token> content;
    if (!alive.empty() && rng_.chance(cfg_.reuse_probability[static_cast<std::size_t>(r - 1)])) {
      const auto& core = alive[rotation++ % alive.size()];
      content.push_back({core, core, Pos::NOUN, false});
    } else if (!privates.empty()) {
      const auto& p = privates[rng_.below(privates.size())];
      content.push_back({p.lemma, p.lemma, p.pos, false});
    }
    if (!privates.empty() && rng_.chance(cfg_.extra_content_probability)) {
      const auto& p = privates[rng_.below(privates.size())];
      content.push_back({p.lemma, p.lemma, p.pos, false});
    }

    const int length = std::max(rng_.between(cfg_.utterance_length_min, cfg_.utterance_length_max),
                                static_cast<int>(content.size()));
    std::vector<Token> tokens;
    for (int i = static_cast<int>(content.size()); i < length; ++i) tokens.push_back(function_token());
    for (auto& c : content) {
      const auto at = rng_.below(tokens.size() + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), std::move(c));
    }
    if (rng_.chance(cfg_.disfluency_probability)) {
      const std::string filler = kFillers[rng_.below(kFillers.size())];
      const auto at = rng_.below(tokens.size() + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), Token{filler, filler, Pos::INTJ, true});
    }
    const auto& sp = speaker == 0 ? dialogue_.speakers.first : dialogue_.speakers.second;
    return {sp, std::move(tokens), next_index_++};
  }

  Trial make_trial(int f, int r) {
    const int director = (f + r) % 2;
    const int matcher = 1 - director;
    Trial t;
    t.fribble = fribble_ids_[static_cast<std::size_t>(f)];
    t.round = r;
    t.director = director == 0 ? dialogue_.speakers.first : dialogue_.speakers.second;
    t.matcher = matcher == 0 ? dialogue_.speakers.first : dialogue_.speakers.second;

    const int n_dir = rng_.between(cfg_.director_utterances_min, cfg_.director_utterances_max);
    const int n_mat = rng_.between(cfg_.matcher_utterances_min, cfg_.matcher_utterances_max);
    const auto alive = cells_[static_cast<std::size_t>(f)].survivors[static_cast<std::size_t>(r - 1)].size();
    std::size_t rot_dir = alive == 0 ? 0 : rng_.below(alive);
    std::size_t rot_mat = alive == 0 ? 0 : rng_.below(alive);
    // Turns alternate director / matcher; surplus turns of either role go last.
    for (int i = 0; i < std::max(n_dir, n_mat); ++i) {
      if (i < n_dir) t.utterances.push_back(make_utterance(f, r, director, rot_dir));
      if (i < n_mat) t.utterances.push_back(make_utterance(f, r, matcher, rot_mat));
    }
    return t;
  }

  std::vector<Lemma> random_name(int f, int vw) {
    const int n = rng_.between(1, 3);
    std::vector<Lemma> out;
    while (static_cast<int>(out.size()) < n) {
      auto l = pool_lemma(f, static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.content_vocab))), vw);
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
    }
    return out;
  }

  std::vector<Lemma> post_name(int f, int vw) {
    const auto& cell = cells_[static_cast<std::size_t>(f)];
    if (rng_.chance(cfg_.name_adoption_probability)) {
      const auto& source = cfg_.post_name_source == PostNameSource::SURVIVORS ? cell.survivors.back() : cell.cores;
      if (!source.empty()) return {source[rng_.below(source.size())]};
    }
    return random_name(f, vw);
  }

  const GeneratorConfig& cfg_;
  SplitMix64 rng_;
  Dialogue dialogue_;
  std::vector<FribbleId> fribble_ids_;
  std::vector<Cell> cells_;
  std::int64_t next_index_ = 0;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("invalid generator config: " + message);
}

}  // namespace

GeneratorConfig GeneratorConfig::from_kv(const KvConfig& kv) {
  kv.reject_unknown({"dyads", "fribbles", "rounds", "content_vocab", "function_vocab", "private_lemmas",
                     "reuse_probability", "type_prune_schedule", "cores_min", "cores_max",
                     "name_adoption_probability", "post_name_source", "utterance_length_min", "utterance_length_max",
                     "director_utterances_min", "director_utterances_max", "matcher_utterances_min",
                     "matcher_utterances_max", "extra_content_probability", "disfluency_probability",
                     "distractor_overlap", "seed"});
  GeneratorConfig c;
  c.dyads = static_cast<int>(kv.get_int("dyads", c.dyads));
  c.fribbles = static_cast<int>(kv.get_int("fribbles", c.fribbles));
  c.rounds = static_cast<int>(kv.get_int("rounds", c.rounds));
  c.content_vocab = static_cast<int>(kv.get_int("content_vocab", c.content_vocab));
  c.function_vocab = static_cast<int>(kv.get_int("function_vocab", c.function_vocab));
  c.private_lemmas = static_cast<int>(kv.get_int("private_lemmas", c.private_lemmas));
  c.reuse_probability = kv.get_doubles("reuse_probability", c.reuse_probability);
  c.type_prune_schedule = kv.get_ints("type_prune_schedule", c.type_prune_schedule);
  c.cores_min = static_cast<int>(kv.get_int("cores_min", c.cores_min));
  c.cores_max = static_cast<int>(kv.get_int("cores_max", c.cores_max));
  c.name_adoption_probability = kv.get_double("name_adoption_probability", c.name_adoption_probability);
  const auto source = kv.get_string("post_name_source", "survivors");
  if (source == "survivors") {
    c.post_name_source = PostNameSource::SURVIVORS;
  } else if (source == "all_cores") {
    c.post_name_source = PostNameSource::ALL_CORES;
  } else {
    throw ConfigError("post_name_source must be 'survivors' or 'all_cores', got '" + source + "'");
  }
  c.utterance_length_min = static_cast<int>(kv.get_int("utterance_length_min", c.utterance_length_min));
  c.utterance_length_max = static_cast<int>(kv.get_int("utterance_length_max", c.utterance_length_max));
  c.director_utterances_min = static_cast<int>(kv.get_int("director_utterances_min", c.director_utterances_min));
  c.director_utterances_max = static_cast<int>(kv.get_int("director_utterances_max", c.director_utterances_max));
  c.matcher_utterances_min = static_cast<int>(kv.get_int("matcher_utterances_min", c.matcher_utterances_min));
  c.matcher_utterances_max = static_cast<int>(kv.get_int("matcher_utterances_max", c.matcher_utterances_max));
  c.extra_content_probability = kv.get_double("extra_content_probability", c.extra_content_probability);
  c.disfluency_probability = kv.get_double("disfluency_probability", c.disfluency_probability);
  c.distractor_overlap = kv.get_double("distractor_overlap", c.distractor_overlap);
  const auto seed = kv.get_int("seed", static_cast<long long>(c.seed));
  require(seed >= 0, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.check();
  return c;
}

void GeneratorConfig::check() const {
  require(dyads >= 1, "dyads must be >= 1");
  require(fribbles >= 1, "fribbles must be >= 1");
  require(rounds >= 1, "rounds must be >= 1");
  require(static_cast<int>(reuse_probability.size()) == rounds, "reuse_probability needs one entry per round");
  require(static_cast<int>(type_prune_schedule.size()) == rounds, "type_prune_schedule needs one entry per round");
  for (double p : reuse_probability) require(p >= 0.0 && p <= 1.0, "reuse_probability entries must be in [0,1]");
  for (std::size_t i = 0; i < type_prune_schedule.size(); ++i) {
    require(type_prune_schedule[i] >= 1, "type_prune_schedule entries must be >= 1");
    if (i > 0) require(type_prune_schedule[i] <= type_prune_schedule[i - 1], "type_prune_schedule must not increase");
  }
  const int cmin = cores_min > 0 ? cores_min : type_prune_schedule.front();
  const int cmax = cores_max > 0 ? cores_max : type_prune_schedule.front();
  require(cores_min >= 0 && cores_max >= 0, "cores_min/cores_max must be >= 0");
  require(cmin <= cmax, "cores_min must not exceed cores_max");
  for (double p : {name_adoption_probability, extra_content_probability, disfluency_probability, distractor_overlap}) {
    require(p >= 0.0 && p <= 1.0, "probabilities must be in [0,1]");
  }
  require(function_vocab >= 1, "function_vocab must be >= 1");
  require(private_lemmas >= 1, "private_lemmas must be >= 1");
  require(content_vocab >= cmax + 2 * private_lemmas, "content_vocab must hold the cores and both private sets");
  require(utterance_length_min >= 1 && utterance_length_min <= utterance_length_max, "bad utterance_length range");
  require(director_utterances_min >= 1 && director_utterances_min <= director_utterances_max,
          "bad director_utterances range");
  require(matcher_utterances_min >= 0 && matcher_utterances_min <= matcher_utterances_max,
          "bad matcher_utterances range");
}

Generated generate(const GeneratorConfig& config) {
  config.check();
  Generated out;
  for (int d = 0; d < config.dyads; ++d) {
    DyadGenerator(config, d).run(out.corpus, out.truth);
  }
  out.corpus = canonicalize(std::move(out.corpus));
  return out;
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& bundle) {
  std::filesystem::create_directories(bundle);
  std::ofstream out(bundle / kGroundTruthFile, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (bundle / kGroundTruthFile).string());
  for (const auto& c : truth.cells) {
    nlohmann::ordered_json j;
    j["dyad"] = c.dyad;
    j["fribble"] = c.fribble;
    j["planted"] = c.planted;
    j["survivors"] = c.survivors;
    j["dominant"] = c.dominant;
    out << j.dump() << "\n";
  }
}

GroundTruth read_ground_truth(const std::filesystem::path& bundle) {
  const auto path = bundle / kGroundTruthFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      truth.cells.push_back({j.at("dyad").get<std::string>(), j.at("fribble").get<std::string>(),
                             j.at("planted").get<std::vector<Lemma>>(),
                             j.at("survivors").get<std::vector<std::vector<Lemma>>>(),
                             j.at("dominant").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(kGroundTruthFile, line_no, "", e.what());
    }
  }
  return truth;
}

}  // namespace shacon
