// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shacon/analyses.hpp"
#include "shacon/extraction.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/metrics.hpp"
#include "shacon/pipeline.hpp"
#include "shacon/pseudo_pairs.hpp"
#include "shacon/stats.hpp"
#include "shacon/synthgen.hpp"

using namespace shacon;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Criteria run in dependency order; lines print in numeric order at the end.
std::map<int, std::pair<bool, std::string>> results;

void report(int id, bool ok, const std::string& detail) { results[id] = {ok, detail}; }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Independent filter check over every extraction seen in this run.
struct FilterAudit {
  std::size_t constructions = 0;
  std::size_t function_only = 0;
  std::size_t multi_fribble = 0;

  void check(const Dialogue& d, const ExtractionResult& ex) {
    std::map<FribbleId, std::set<Lemma>> content;
    for (const auto& t : d.trials) {
      for (const auto& u : t.utterances) {
        for (const auto& tok : u.tokens) {
          if (!tok.disfluency && is_content(tok.pos)) content[t.fribble].insert(tok.lemma);
        }
      }
    }
    std::map<LemmaSeq, int> fribbles_of;
    for (const auto& [f, cs] : ex) {
      for (const auto& c : cs) {
        ++constructions;
        ++fribbles_of[c.lemmas];
        const bool any = std::any_of(c.lemmas.begin(), c.lemmas.end(),
                                     [&](const Lemma& l) { return content[f].contains(l); });
        if (!any) ++function_only;
      }
    }
    for (const auto& [seq, n] : fribbles_of) {
      if (n > 1) ++multi_fribble;
    }
  }

  void check(const CorpusAnalysis& ca) {
    for (const auto& da : ca.dialogues) check(*da.dialogue, da.extraction);
  }
};

FilterAudit audit;

bool matches_oracle(const Dialogue& d, const ExtractionResult& got) {
  const auto want = oracle::extract(d);
  if (got.size() != want.size()) return false;
  for (const auto& [f, cs] : got) {
    auto wf = want.find(f);
    if (wf == want.end() || wf->second.size() != cs.size()) return false;
    for (const auto& c : cs) {
      auto it = wf->second.find(c.lemmas);
      if (it == wf->second.end() || it->second.maximal != c.is_maximal) return false;
      std::vector<oracle::OracleOccurrence> occ;
      for (const auto& o : c.occurrences) occ.push_back({o.speaker, o.utterance_index, o.token_offset});
      std::sort(occ.begin(), occ.end());
      if (occ != it->second.occurrences) return false;
    }
  }
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> na, nb;
  for (const auto& e : fs::directory_iterator(a)) na.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) nb.insert(e.path().filename().string());
  if (na != nb) {
    why = "file sets differ";
    return false;
  }
  for (const auto& n : na) {
    if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  why = std::to_string(na.size()) + " files identical";
  return true;
}

void criterion1() {
  const double sim = lexical_cosine(LemmaVector{"pinocchio", "nose", "above"}, LemmaVector{"window", "pinocchio", "nose"});
  report(1, std::abs(sim - 0.67) <= 0.005, "cosine = " + fmt(sim, 6) + " (target 0.67 +/- 0.005)");
}

void criterion2() {
  const auto t0 = Clock::now();
  SplitMix64 rng(20240601);
  const int cases = 1000;
  int mismatches = 0;
  for (int i = 0; i < cases; ++i) {
    const auto d = oracle::random_dialogue(rng);
    const auto ex = extract_shared_constructions(d);
    audit.check(d, ex);
    if (!matches_oracle(d, ex)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  report(2, mismatches == 0 && secs < 10.0,
         std::to_string(cases) + " mini-corpora, " + std::to_string(mismatches) + " mismatches, " + fmt(secs, 2) + " s");
}

void criterion6() {
  SplitMix64 rng(77);
  double worst_stat = 0;
  double worst_p = 0;
  int compared = 0;
  auto vec = [&](std::size_t n, bool ties) {
    std::vector<double> v(n);
    for (auto& x : v) x = ties ? static_cast<double>(rng.below(7)) : rng.unit() * 20 - 10;
    return v;
  };
  for (int i = 0; i < 100; ++i) {
    const bool ties = i % 2 == 0;
    const auto x = vec(25, ties);
    const auto y = vec(25, ties);
    try {
      const auto s = spearman(x, y);
      const double rho = oracle::spearman_rho(x, y);
      worst_stat = std::max(worst_stat, std::abs(s.statistic - rho));
      worst_p = std::max(worst_p, std::abs(s.p_value - oracle::spearman_p(rho, x.size())));
      ++compared;
    } catch (const StatError&) {
    }
    const auto a = vec(12, false);
    const auto b = vec(12, false);
    const auto w = t_test(a, b, false);
    const auto ow = oracle::welch(a, b);
    const auto p = t_test(a, b, true);
    const auto op = oracle::paired(a, b);
    worst_stat = std::max({worst_stat, std::abs(w.statistic - ow.t), std::abs(p.statistic - op.t)});
    worst_p = std::max({worst_p, std::abs(w.p_value - ow.p), std::abs(p.p_value - op.p)});
    compared += 2;
  }
  report(6, worst_stat <= 1e-9 && worst_p <= 1e-6 && compared >= 300,
         std::to_string(compared) + " comparisons, max |d stat| = " + sci(worst_stat) +
             ", max |d p| = " + sci(worst_p));
}

// Criteria 4 and 8 share the default synthetic corpus.
void criteria4and8(const fs::path& scratch) {
  const auto g = generate(GeneratorConfig{});
  const auto bundle = scratch / "default_bundle";
  fs::remove_all(bundle);
  write_corpus(g.corpus, bundle);

  PipelineConfig cfg{bundle, scratch / "run_a"};
  cfg.pseudo = true;
  cfg.seed = 1;
  fs::remove_all(cfg.output);
  auto t0 = Clock::now();
  const auto result = run_pipeline(cfg);
  const double first_secs = seconds_since(t0);

  // Audit filters on the real and pseudo extractions.
  audit.check(analyze_corpus(g.corpus));
  const auto pseudo_corpus = build_pseudo_corpus(g.corpus, *result.plan);
  audit.check(analyze_corpus(pseudo_corpus));

  const auto* real1 = result.real.analysis(1);
  const auto* pseudo1 = result.pseudo->analysis(1);
  const double real_cov = *real1->value("mean_dialogue_coverage");
  const double pseudo_cov = *pseudo1->value("mean_dialogue_coverage");
  const auto* real_trend = real1->stat("coverage_round_trend");
  const auto* pseudo_trend = pseudo1->stat("coverage_round_trend");
  const bool real_ok = real_trend->result && real_trend->result->statistic > 0 && real_trend->result->p_value < 0.01;
  const bool pseudo_ok = pseudo_trend->result && pseudo_trend->result->p_value >= 0.05;
  std::string detail = "coverage real " + fmt(real_cov) + " vs pseudo " + fmt(pseudo_cov);
  if (real_trend->result) {
    detail += "; real rho " + fmt(real_trend->result->statistic) + " p " + fmt(real_trend->result->p_value, 6);
  }
  if (pseudo_trend->result) {
    detail += "; pseudo rho " + fmt(pseudo_trend->result->statistic) + " p " + fmt(pseudo_trend->result->p_value);
  }
  detail += "; " + fmt(first_secs, 2) + " s";
  report(4, real_cov >= 2 * pseudo_cov && real_ok && pseudo_ok && first_secs < 60.0, detail);

  cfg.output = scratch / "run_b";
  fs::remove_all(cfg.output);
  t0 = Clock::now();
  run_pipeline(cfg);
  const double second_secs = seconds_since(t0);
  std::string why;
  const bool same = same_tree(scratch / "run_a", scratch / "run_b", why);
  report(8, same && first_secs < 30.0 && second_secs < 30.0,
         "runs " + fmt(first_secs, 2) + " s and " + fmt(second_secs, 2) + " s; " + why);
}

void criterion5() {
  GeneratorConfig cfg;
  cfg.reuse_probability.assign(cfg.rounds, 0.9);
  cfg.type_prune_schedule = {4, 3, 2, 1, 1, 1};
  const auto g = generate(cfg);
  const auto ca = analyze_corpus(g.corpus);
  audit.check(ca);
  const auto a1 = analysis1(ca);
  const double first = *a1.value("mean_types_first_round");
  const double last = *a1.value("mean_types_last_round");
  const auto* t = a1.stat("types_first_vs_last");

  std::map<std::pair<DyadId, FribbleId>, Lemma> truth;
  for (const auto& c : g.truth.cells) truth[{c.dyad, c.fribble}] = c.dominant;
  std::size_t cells = 0;
  std::size_t recovered = 0;
  for (const auto& da : ca.dialogues) {
    std::map<FribbleId, const TypeTimeline*> by_fribble;
    for (const auto& tl : da.timelines) by_fribble[tl.fribble] = &tl;
    for (const auto& f : da.dialogue->fribbles()) {
      ++cells;
      auto it = by_fribble.find(f);
      if (it == by_fribble.end()) continue;
      const auto* dom = dominant_type(*it->second);
      if (dom != nullptr && dom->core == truth.at({da.dialogue->dyad, f})) ++recovered;
    }
  }
  const double rate = static_cast<double>(recovered) / static_cast<double>(cells);
  const bool t_ok = t->result && first > last && t->result->p_value < 0.01;
  std::string detail = "types first " + fmt(first, 3) + " last " + fmt(last, 3);
  if (t->result) detail += " t " + fmt(t->result->statistic, 2) + " p " + std::to_string(t->result->p_value);
  detail += "; dominant recovered " + std::to_string(recovered) + "/" + std::to_string(cells) + " = " + fmt(rate, 4);
  report(5, t_ok && rate >= 0.95, detail);
}

void criterion7() {
  auto mean_delta = [](double adoption, double& pseudo_delta) {
    GeneratorConfig cfg;
    cfg.name_adoption_probability = adoption;
    const auto g = generate(cfg);
    const auto ca = analyze_corpus(g.corpus);
    audit.check(ca);
    std::vector<DyadId> dyads;
    for (const auto& d : g.corpus.dialogues) dyads.push_back(d.dyad);
    const auto pc = build_pseudo_corpus(g.corpus, plan_pseudo_pairs(dyads, 1));
    const auto pca = analyze_corpus(pc);
    audit.check(pca);
    pseudo_delta = *analysis3(pca).value("mean_delta");
    return *analysis3(ca).value("mean_delta");
  };
  double pseudo_hi = 0;
  double pseudo_lo = 0;
  const double hi = mean_delta(0.9, pseudo_hi);
  const double lo = mean_delta(0.0, pseudo_lo);
  const bool ok = hi > lo && std::abs(pseudo_hi) <= 0.05 && std::abs(pseudo_lo) <= 0.05;
  report(7, ok,
         "mean delta adoption 0.9: " + fmt(hi) + ", 0.0: " + fmt(lo) + "; pseudo delta " + fmt(pseudo_hi) + " / " +
             fmt(pseudo_lo));
}

void criterion3() {
  report(3, audit.constructions > 0 && audit.function_only == 0 && audit.multi_fribble == 0,
         std::to_string(audit.constructions) + " constructions audited, " + std::to_string(audit.function_only) +
             " function-word-only, " + std::to_string(audit.multi_fribble) + " under two fribbles");
}

}  // namespace

int main() {
  const auto scratch = fs::temp_directory_path() / "shacon_acceptance";
  fs::create_directories(scratch);
  try {
    criterion1();
    criterion2();
    criteria4and8(scratch);
    criterion5();
    criterion6();
    criterion7();
    criterion3();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  fs::remove_all(scratch);
  int failures = 0;
  for (int id = 1; id <= 8; ++id) {
    auto it = results.find(id);
    const bool ok = it != results.end() && it->second.first;
    std::printf("criterion %d %s: %s\n", id, ok ? "PASS" : "FAIL",
                it != results.end() ? it->second.second.c_str() : "not run");
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
