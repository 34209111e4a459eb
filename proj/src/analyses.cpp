#include "shacon/analyses.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "shacon/metrics.hpp"
#include "shacon/rng.hpp"

namespace shacon {

namespace {

// FNV-1a, used to give each statistic its own permutation stream.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

NamedStat run_spearman(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                       const AnalysisOptions& opts) {
  NamedStat s{name, std::nullopt, "", std::nullopt};
  try {
    s.result = spearman(x, y);
    if (opts.permutations > 0) {
      s.permutation_p = spearman_permutation_p(x, y, opts.permutations, derive_seed(opts.seed, name_hash(name)));
    }
  } catch (const StatError& e) {
    s.note = e.what();
  }
  return s;
}

NamedStat run_t_test(const std::string& name, const std::vector<double>& a, const std::vector<double>& b,
                     bool paired) {
  NamedStat s{name, std::nullopt, "", std::nullopt};
  try {
    s.result = t_test(a, b, paired);
  } catch (const StatError& e) {
    s.note = e.what();
  }
  return s;
}

class RowSink {
 public:
  RowSink(int analysis, std::vector<AnalysisRow>& rows) : analysis_(analysis), rows_(rows) {}

  void add(AnalysisRow row) {
    static const std::set<std::string> known(row_metrics().begin(), row_metrics().end());
    if (!known.contains(row.metric)) throw std::logic_error("undocumented metric " + row.metric);
    row.analysis = analysis_;
    rows_.push_back(std::move(row));
  }

 private:
  int analysis_;
  std::vector<AnalysisRow>& rows_;
};

using NamingKey = std::tuple<SpeakerId, FribbleId, Phase>;

std::map<NamingKey, const NamingRecord*> index_namings(const Corpus& c) {
  std::map<NamingKey, const NamingRecord*> out;
  for (const auto& n : c.namings) out[{n.speaker, n.fribble, n.phase}] = &n;
  return out;
}

const NamingRecord* lookup(const std::map<NamingKey, const NamingRecord*>& idx, const SpeakerId& s,
                           const FribbleId& f, Phase p) {
  auto it = idx.find({s, f, p});
  return it == idx.end() ? nullptr : it->second;
}

int types_used_in(const TypeTimeline& tl, int round) {
  return static_cast<int>(
      std::count_if(tl.types.begin(), tl.types.end(), [round](const auto& t) { return t.rounds_used.contains(round); }));
}

void add_value(AnalysisOutput& out, const std::string& name, const std::vector<double>& v) {
  if (!v.empty()) out.values.push_back({name, mean(v), v.size()});
}

void add_std(AnalysisOutput& out, const std::string& name, const std::vector<double>& v) {
  if (v.size() >= 2) out.values.push_back({name, stddev(v), v.size()});
}

}  // namespace

const std::vector<std::string>& row_metrics() {
  static const std::vector<std::string> metrics{
      // analysis 1
      "n_constructions", "n_types", "types_used", "has_construction_every_fribble", "utterances",
      "covered_utterances", "coverage", "dialogue_coverage",
      // analysis 2
      "self_similarity", "name_type_max_sim", "name_type_mean_sim", "name_type_overlap", "name_type_sim",
      "name_type_sim_round", "speaker_usage", "type_last_round",
      // analysis 3
      "s_pre", "s_post", "delta", "dominant_frequency", "dominant_recency", "dominant_excluded"};
  return metrics;
}

const NamedStat* AnalysisOutput::stat(const std::string& name) const {
  for (const auto& s : stats) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<double> AnalysisOutput::value(const std::string& name) const {
  for (const auto& v : values) {
    if (v.name == name) return v.value;
  }
  return std::nullopt;
}

CorpusAnalysis analyze_corpus(const Corpus& corpus) {
  CorpusAnalysis ca;
  ca.corpus = &corpus;
  ca.dialogues.reserve(corpus.dialogues.size());
  for (const auto& d : corpus.dialogues) {
    DialogueAnalysis da;
    da.dialogue = &d;
    da.extraction = extract_shared_constructions(d);
    da.timelines = build_timelines(d, da.extraction);
    ca.dialogues.push_back(std::move(da));
  }
  return ca;
}

AnalysisOutput analysis1(const CorpusAnalysis& ca, const AnalysisOptions& opts) {
  AnalysisOutput out;
  out.id = 1;
  RowSink sink(1, out.rows);

  std::vector<double> every_fribble;
  std::vector<double> dialogue_coverage;
  std::vector<double> trend_round;
  std::vector<double> trend_coverage;
  std::vector<double> first_cov;
  std::vector<double> last_cov;
  std::vector<double> types_per_fribble;
  std::vector<double> first_types;
  std::vector<double> last_types;

  for (const auto& da : ca.dialogues) {
    const auto& d = *da.dialogue;
    bool every = !da.timelines.empty();
    for (const auto& tl : da.timelines) {
      auto it = da.extraction.find(tl.fribble);
      const auto n_constructions = it == da.extraction.end() ? 0 : it->second.size();
      if (n_constructions == 0) every = false;
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "n_constructions", static_cast<double>(n_constructions)});
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "n_types", static_cast<double>(tl.types.size())});
      types_per_fribble.push_back(static_cast<double>(tl.types.size()));
      for (int r = 1; r <= d.rounds; ++r) {
        sink.add({0, d.dyad, tl.fribble, r, "", "", "", "types_used", static_cast<double>(types_used_in(tl, r))});
      }
      first_types.push_back(types_used_in(tl, 1));
      last_types.push_back(types_used_in(tl, d.rounds));
    }
    sink.add({0, d.dyad, "", 0, "", "", "", "has_construction_every_fribble", every ? 1.0 : 0.0});
    every_fribble.push_back(every ? 1.0 : 0.0);

    int total = 0;
    int covered = 0;
    for (const auto& rc : coverage_counts(d, da.extraction)) {
      total += rc.utterances;
      covered += rc.covered;
      sink.add({0, d.dyad, "", rc.round, "", "", "", "utterances", static_cast<double>(rc.utterances)});
      sink.add({0, d.dyad, "", rc.round, "", "", "", "covered_utterances", static_cast<double>(rc.covered)});
      if (auto f = rc.fraction()) {
        sink.add({0, d.dyad, "", rc.round, "", "", "", "coverage", *f});
        trend_round.push_back(rc.round);
        trend_coverage.push_back(*f);
        if (rc.round == 1) first_cov.push_back(*f);
        if (rc.round == d.rounds) last_cov.push_back(*f);
      }
    }
    if (total > 0) {
      const double f = static_cast<double>(covered) / static_cast<double>(total);
      sink.add({0, d.dyad, "", 0, "", "", "", "dialogue_coverage", f});
      dialogue_coverage.push_back(f);
    }
  }

  add_value(out, "dyad_fraction_all_fribbles", every_fribble);
  add_value(out, "mean_dialogue_coverage", dialogue_coverage);
  add_value(out, "mean_coverage_first_round", first_cov);
  add_value(out, "mean_coverage_last_round", last_cov);
  add_value(out, "mean_types_per_fribble", types_per_fribble);
  add_value(out, "mean_types_first_round", first_types);
  add_value(out, "mean_types_last_round", last_types);
  out.stats.push_back(run_spearman("coverage_round_trend", trend_round, trend_coverage, opts));
  out.stats.push_back(run_t_test("types_first_vs_last", first_types, last_types, true));
  return out;
}

AnalysisOutput analysis2(const CorpusAnalysis& ca, const AnalysisOptions& opts) {
  AnalysisOutput out;
  out.id = 2;
  const auto& corpus = *ca.corpus;
  const bool has_pre = std::any_of(corpus.namings.begin(), corpus.namings.end(),
                                   [](const auto& n) { return n.phase == Phase::PRE; });
  const bool has_post = std::any_of(corpus.namings.begin(), corpus.namings.end(),
                                    [](const auto& n) { return n.phase == Phase::POST; });
  if (!has_pre || !has_post) {
    out.skipped = true;
    out.skip_reason = !has_pre ? "no pre-interaction naming records" : "no post-interaction naming records";
    return out;
  }
  RowSink sink(2, out.rows);
  const auto namings = index_namings(corpus);

  std::vector<double> self_sim;
  std::map<SpeakerId, std::vector<double>> overlap_pre;
  std::map<SpeakerId, std::vector<double>> overlap_post;
  std::vector<double> max_pre;
  std::vector<double> max_post;
  std::vector<double> paired_pre;
  std::vector<double> paired_post;
  std::vector<double> recency_x;
  std::vector<double> frequency_x;
  std::vector<double> post_sim;

  for (const auto& da : ca.dialogues) {
    const auto& d = *da.dialogue;
    for (const auto& tl : da.timelines) {
      for (const auto& t : tl.types) {
        sink.add({0, d.dyad, tl.fribble, 0, "", "", t.core, "type_last_round", static_cast<double>(t.last_round)});
      }
      for (const auto* s : {&d.speakers.first, &d.speakers.second}) {
        const auto* pre = lookup(namings, *s, tl.fribble, Phase::PRE);
        const auto* post = lookup(namings, *s, tl.fribble, Phase::POST);
        if (pre != nullptr && post != nullptr) {
          const double sim = lexical_cosine(pre->lemmas, post->lemmas);
          sink.add({0, d.dyad, tl.fribble, 0, *s, "", "", "self_similarity", sim});
          self_sim.push_back(sim);
        }
        if (tl.types.empty()) continue;
        for (const auto& t : tl.types) {
          sink.add({0, d.dyad, tl.fribble, 0, *s, "", t.core, "speaker_usage", static_cast<double>(t.usage_by(*s))});
        }
        std::optional<double> pre_max;
        std::optional<double> post_max;
        for (const auto* rec : {pre, post}) {
          if (rec == nullptr) continue;
          const std::string phase(to_string(rec->phase));
          const auto ov = name_overlap(*rec, tl.types);
          sink.add({0, d.dyad, tl.fribble, 0, *s, phase, "", "name_type_max_sim", ov.max_sim});
          sink.add({0, d.dyad, tl.fribble, 0, *s, phase, "", "name_type_mean_sim", ov.mean_sim});
          sink.add({0, d.dyad, tl.fribble, 0, *s, phase, "", "name_type_overlap", ov.overlaps ? 1.0 : 0.0});
          (rec->phase == Phase::PRE ? overlap_pre : overlap_post)[*s].push_back(ov.overlaps ? 1.0 : 0.0);
          (rec->phase == Phase::PRE ? max_pre : max_post).push_back(ov.max_sim);
          (rec->phase == Phase::PRE ? pre_max : post_max) = ov.max_sim;
          for (std::size_t i = 0; i < tl.types.size(); ++i) {
            const auto& t = tl.types[i];
            sink.add({0, d.dyad, tl.fribble, 0, *s, phase, t.core, "name_type_sim", ov.per_type[i]});
            for (int r : t.rounds_used) {
              sink.add({0, d.dyad, tl.fribble, r, *s, phase, t.core, "name_type_sim_round", ov.per_type[i]});
            }
            if (rec->phase == Phase::POST) {
              recency_x.push_back(t.last_round);
              frequency_x.push_back(t.usage_by(*s));
              post_sim.push_back(ov.per_type[i]);
            }
          }
        }
        if (pre_max && post_max) {
          paired_pre.push_back(*pre_max);
          paired_post.push_back(*post_max);
        }
      }
    }
  }

  auto participant_rates = [](const std::map<SpeakerId, std::vector<double>>& m) {
    std::vector<double> out;
    for (const auto& [s, v] : m) out.push_back(mean(v));
    return out;
  };
  const auto rate_pre = participant_rates(overlap_pre);
  const auto rate_post = participant_rates(overlap_post);

  add_value(out, "self_similarity_mean", self_sim);
  add_std(out, "self_similarity_std", self_sim);
  add_value(out, "overlap_rate_pre_mean", rate_pre);
  add_std(out, "overlap_rate_pre_std", rate_pre);
  add_value(out, "overlap_rate_post_mean", rate_post);
  add_std(out, "overlap_rate_post_std", rate_post);
  add_value(out, "mean_name_type_max_sim_pre", max_pre);
  add_value(out, "mean_name_type_max_sim_post", max_post);
  out.stats.push_back(run_t_test("name_type_sim_post_vs_pre", paired_post, paired_pre, true));
  out.stats.push_back(run_spearman("recency_post", recency_x, post_sim, opts));
  out.stats.push_back(run_spearman("frequency_post", frequency_x, post_sim, opts));
  return out;
}

AnalysisOutput analysis3(const CorpusAnalysis& ca, const AnalysisOptions& opts) {
  AnalysisOutput out;
  out.id = 3;
  RowSink sink(3, out.rows);
  const auto namings = index_namings(*ca.corpus);

  std::vector<double> s_pre;
  std::vector<double> s_post;
  std::vector<double> delta;
  std::vector<double> n_types;
  std::vector<double> dom_frequency;
  std::vector<double> dom_recency;
  std::vector<double> dom_s_post;
  std::size_t skipped = 0;
  std::size_t excluded = 0;

  for (const auto& da : ca.dialogues) {
    const auto& d = *da.dialogue;
    for (const auto& tl : da.timelines) {
      const auto* dom = dominant_type(tl);
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "n_types", static_cast<double>(tl.types.size())});
      std::optional<TypeFeatures> features;
      if (dom != nullptr) {
        features = type_features(*dom, d.rounds);
        sink.add({0, d.dyad, tl.fribble, 0, "", "", dom->core, "dominant_frequency",
                  static_cast<double>(features->frequency)});
        sink.add({0, d.dyad, tl.fribble, 0, "", "", dom->core, "dominant_recency",
                  static_cast<double>(features->recency)});
      } else {
        ++excluded;
      }
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "dominant_excluded", dom == nullptr ? 1.0 : 0.0});

      const auto& [a, b] = d.speakers;
      const auto* pre_a = lookup(namings, a, tl.fribble, Phase::PRE);
      const auto* pre_b = lookup(namings, b, tl.fribble, Phase::PRE);
      const auto* post_a = lookup(namings, a, tl.fribble, Phase::POST);
      const auto* post_b = lookup(namings, b, tl.fribble, Phase::POST);
      if (!pre_a || !pre_b || !post_a || !post_b) {
        ++skipped;
        continue;
      }
      const auto conv = convergence(d.dyad, *pre_a, *pre_b, *post_a, *post_b);
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "s_pre", conv.s_pre});
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "s_post", conv.s_post});
      sink.add({0, d.dyad, tl.fribble, 0, "", "", "", "delta", conv.delta});
      s_pre.push_back(conv.s_pre);
      s_post.push_back(conv.s_post);
      delta.push_back(conv.delta);
      n_types.push_back(static_cast<double>(tl.types.size()));
      if (features) {
        dom_frequency.push_back(features->frequency);
        dom_recency.push_back(features->recency);
        dom_s_post.push_back(conv.s_post);
      }
    }
  }

  add_value(out, "mean_s_pre", s_pre);
  add_value(out, "mean_s_post", s_post);
  add_value(out, "mean_delta", delta);
  out.values.push_back({"convergence_cells", static_cast<double>(s_pre.size()), s_pre.size()});
  out.values.push_back({"convergence_skipped", static_cast<double>(skipped), skipped});
  out.values.push_back({"dominant_excluded_cells", static_cast<double>(excluded), excluded});
  out.stats.push_back(run_t_test("s_post_vs_s_pre", s_post, s_pre, true));
  out.stats.push_back(run_spearman("types_vs_s_post", n_types, s_post, opts));
  out.stats.push_back(run_spearman("dominant_frequency_vs_s_post", dom_frequency, dom_s_post, opts));
  out.stats.push_back(run_spearman("dominant_recency_vs_s_post", dom_recency, dom_s_post, opts));
  return out;
}

std::vector<RoundAggregate> round_aggregates(const std::vector<AnalysisOutput>& outputs) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  // (round, metric) -> accumulator; metric order follows insertion below.
  std::map<std::pair<int, std::string>, Acc> acc;
  std::map<int, std::pair<double, double>> pooled;  // round -> (covered, utterances)
  auto push = [&acc](int round, const std::string& metric, double v) {
    auto& a = acc[{round, metric}];
    a.sum += v;
    ++a.n;
  };
  for (const auto& out : outputs) {
    for (const auto& row : out.rows) {
      if (row.round == 0) continue;
      if (row.metric == "coverage") {
        push(row.round, "mean_coverage", row.value);
      } else if (row.metric == "utterances") {
        pooled[row.round].second += row.value;
      } else if (row.metric == "covered_utterances") {
        pooled[row.round].first += row.value;
      } else if (row.metric == "types_used") {
        push(row.round, "mean_types_used", row.value);
      } else if (row.metric == "name_type_sim_round") {
        push(row.round, "mean_name_type_sim_" + row.phase, row.value);
      }
    }
  }
  std::vector<RoundAggregate> result;
  for (const auto& [key, a] : acc) result.push_back({key.first, key.second, a.sum / static_cast<double>(a.n), a.n});
  for (const auto& [round, cu] : pooled) {
    if (cu.second > 0) {
      result.push_back({round, "pooled_coverage", cu.first / cu.second, static_cast<std::size_t>(cu.second)});
    }
  }
  std::stable_sort(result.begin(), result.end(), [](const RoundAggregate& x, const RoundAggregate& y) {
    return std::tie(x.round, x.metric) < std::tie(y.round, y.metric);
  });
  return result;
}

}  // namespace shacon
