#include "shacon/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/stats.hpp"

namespace shacon {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

ordered_json stat_json(const NamedStat& s) {
  ordered_json j;
  if (s.result) {
    j["statistic"] = s.result->statistic;
    j["p_value"] = s.result->p_value;
    j["n"] = s.result->n;
    j["df"] = s.result->df;
    if (s.permutation_p) j["permutation_p"] = *s.permutation_p;
  } else {
    j["undefined"] = s.note;
  }
  return j;
}

ordered_json report_json(const CorpusReport& report) {
  ordered_json j = ordered_json::object();
  for (const auto& a : report.analyses) {
    ordered_json aj;
    if (a.skipped) {
      aj["skipped"] = a.skip_reason;
    } else {
      ordered_json values = ordered_json::object();
      for (const auto& v : a.values) values[v.name] = {{"value", v.value}, {"n", v.n}};
      ordered_json stats = ordered_json::object();
      for (const auto& s : a.stats) stats[s.name] = stat_json(s);
      aj["values"] = std::move(values);
      aj["stats"] = std::move(stats);
      aj["rows"] = a.rows.size();
    }
    j["analysis" + std::to_string(a.id)] = std::move(aj);
  }
  return j;
}

std::vector<double> dialogue_coverage_of(const CorpusReport& r) {
  std::vector<double> out;
  if (const auto* a1 = r.analysis(1)) {
    for (const auto& row : a1->rows) {
      if (row.metric == "dialogue_coverage") out.push_back(row.value);
    }
  }
  return out;
}

void write_report_tables(const CorpusAnalysis& ca, const CorpusReport& report, const fs::path& dir,
                         const std::string& prefix) {
  write_extraction(ca, dir / (prefix + "extraction.ndj"));
  write_types(ca, dir / (prefix + "types.ndj"));
  for (const auto& a : report.analyses) {
    write_rows(a.rows, dir / (prefix + "analysis" + std::to_string(a.id) + ".csv"));
  }
  write_round_aggregates(report.rounds, dir / (prefix + "rounds.csv"));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const AnalysisOutput* CorpusReport::analysis(int id) const {
  for (const auto& a : analyses) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

CorpusReport run_analyses(const CorpusAnalysis& ca, const std::set<int>& which, const AnalysisOptions& opts) {
  CorpusReport report;
  if (which.contains(1)) report.analyses.push_back(analysis1(ca, opts));
  if (which.contains(2)) report.analyses.push_back(analysis2(ca, opts));
  if (which.contains(3)) report.analyses.push_back(analysis3(ca, opts));
  report.rounds = round_aggregates(report.analyses);
  return report;
}

void write_extraction(const CorpusAnalysis& ca, const fs::path& file) {
  auto out = open_out(file);
  for (const auto& da : ca.dialogues) {
    for (const auto& [fribble, constructions] : da.extraction) {
      for (const auto& c : constructions) {
        ordered_json j;
        j["dyad"] = da.dialogue->dyad;
        j["fribble"] = fribble;
        j["lemmas"] = c.lemmas;
        j["content"] = c.content;
        j["maximal"] = c.is_maximal;
        auto occ = ordered_json::array();
        for (const auto& o : c.occurrences) occ.push_back({o.speaker, o.round, o.utterance_index, o.token_offset});
        j["occurrences"] = std::move(occ);
        out << j.dump() << '\n';
      }
    }
  }
}

void write_types(const CorpusAnalysis& ca, const fs::path& file) {
  auto out = open_out(file);
  for (const auto& da : ca.dialogues) {
    for (const auto& tl : da.timelines) {
      for (const auto& t : tl.types) {
        ordered_json j;
        j["dyad"] = tl.dyad;
        j["fribble"] = tl.fribble;
        j["core"] = t.core;
        j["rounds_used"] = t.rounds_used;
        j["occurrence_count"] = t.occurrence_count;
        j["first_round"] = t.first_round;
        j["last_round"] = t.last_round;
        auto members = ordered_json::array();
        for (const auto& m : t.members) members.push_back(m.lemmas);
        j["members"] = std::move(members);
        out << j.dump() << '\n';
      }
    }
  }
}

void write_rows(const std::vector<AnalysisRow>& rows, const fs::path& file) {
  auto out = open_out(file);
  out << "analysis,dyad,fribble,round,speaker,phase,type,metric,value\n";
  for (const auto& r : rows) {
    out << r.analysis << ',' << csv_field(r.dyad) << ',' << csv_field(r.fribble) << ','
        << (r.round > 0 ? std::to_string(r.round) : "") << ',' << csv_field(r.speaker) << ',' << r.phase << ','
        << csv_field(r.type) << ',' << r.metric << ',' << format_number(r.value) << '\n';
  }
}

void write_round_aggregates(const std::vector<RoundAggregate>& rounds, const fs::path& file) {
  auto out = open_out(file);
  out << "round,metric,value,n\n";
  for (const auto& r : rounds) out << r.round << ',' << r.metric << ',' << format_number(r.value) << ',' << r.n << '\n';
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const Corpus corpus = parse_corpus(config.corpus);
  return run_pipeline_on(corpus, config);
}

PipelineResult run_pipeline_on(const Corpus& corpus, const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) throw IoError("cannot create " + config.output.string() + ": " + ec.message());

  const AnalysisOptions opts{config.permutations, config.seed};
  PipelineResult result;
  const auto real = analyze_corpus(corpus);
  result.real = run_analyses(real, config.which, opts);
  write_report_tables(real, result.real, config.output, "");

  ordered_json summary;
  summary["format"] = "shacon-report/1";
  summary["config"] = {{"seed", config.seed},
                       {"which", config.which},
                       {"pseudo", config.pseudo},
                       {"permutations", config.permutations}};
  summary["corpus"] = {{"dyads", corpus.dialogues.size()},
                       {"namings", corpus.namings.size()},
                       {"pseudo", corpus.provenance.pseudo}};
  summary["real"] = report_json(result.real);

  if (config.pseudo) {
    std::vector<DyadId> dyads;
    for (const auto& d : corpus.dialogues) dyads.push_back(d.dyad);
    result.plan = plan_pseudo_pairs(dyads, config.seed);
    const Corpus pseudo_corpus = build_pseudo_corpus(corpus, *result.plan);
    const auto pseudo = analyze_corpus(pseudo_corpus);
    result.pseudo = run_analyses(pseudo, config.which, opts);
    write_report_tables(pseudo, *result.pseudo, config.output, "pseudo_");

    summary["pseudo"] = report_json(*result.pseudo);
    auto plan = ordered_json::array();
    for (const auto& [a, b] : result.plan->assignments) plan.push_back({a, b});
    summary["pseudo_plan"] = std::move(plan);

    const auto real_cov = dialogue_coverage_of(result.real);
    const auto pseudo_cov = dialogue_coverage_of(*result.pseudo);
    if (!real_cov.empty() && !pseudo_cov.empty()) {
      NamedStat s{"coverage_real_vs_pseudo", std::nullopt, "", std::nullopt};
      try {
        s.result = t_test(real_cov, pseudo_cov, false);
      } catch (const StatError& e) {
        s.note = e.what();
      }
      summary["comparison"] = {{"coverage_real_vs_pseudo", stat_json(s)},
                               {"mean_coverage_real", mean(real_cov)},
                               {"mean_coverage_pseudo", mean(pseudo_cov)}};
    }
  }

  auto out = open_out(config.output / "summary.json");
  out << summary.dump(2) << '\n';
  return result;
}

}  // namespace shacon
