#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/pipeline.hpp"
#include "shacon/synthgen.hpp"
#include "tmpdir.hpp"

using namespace shacon;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    out.push_back(fields);
  }
  return out;
}

std::vector<std::string> files_in(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(15.0 / 17.0), "0.8823529411764706");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Pipeline, WritesRealTables) {
  const auto out = fresh_dir();
  run_pipeline({SHACON_FIXTURES "/boiler", out});
  EXPECT_EQ(files_in(out), (std::vector<std::string>{"analysis1.csv", "analysis2.csv", "analysis3.csv",
                                                      "extraction.ndj", "rounds.csv", "summary.json", "types.ndj"}));
  const auto rows = read_csv(out / "analysis1.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"analysis", "dyad", "fribble", "round", "speaker", "phase", "type",
                                               "metric", "value"}));
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_EQ(j["format"], "shacon-report/1");
  EXPECT_EQ(j["corpus"]["dyads"], 1);
  EXPECT_EQ(j["real"]["analysis3"]["values"]["mean_delta"]["value"], 1.0);
  EXPECT_FALSE(j.contains("pseudo"));
  std::size_t types = 0;
  std::istringstream tin(slurp(out / "types.ndj"));
  for (std::string line; std::getline(tin, line);) {
    const auto t = nlohmann::json::parse(line);
    ++types;
    if (t["core"] == "boiler") EXPECT_EQ(t["occurrence_count"], 11);
  }
  EXPECT_EQ(types, 3u);
}

TEST(Pipeline, WhichSelectsAnalyses) {
  const auto out = fresh_dir();
  PipelineConfig cfg{SHACON_FIXTURES "/boiler", out};
  cfg.which = {3};
  const auto r = run_pipeline(cfg);
  EXPECT_EQ(r.real.analyses.size(), 1u);
  EXPECT_TRUE(fs::exists(out / "analysis3.csv"));
  EXPECT_FALSE(fs::exists(out / "analysis1.csv"));
}

TEST(Pipeline, ByteIdenticalAcrossRuns) {
  GeneratorConfig gc;
  gc.dyads = 8;
  gc.fribbles = 5;
  const auto corpus = generate(gc).corpus;
  const auto a = fresh_dir("_a");
  const auto b = fresh_dir("_b");
  PipelineConfig cfg{"", a};
  cfg.pseudo = true;
  cfg.permutations = 50;
  cfg.seed = 11;
  run_pipeline_on(corpus, cfg);
  cfg.output = b;
  run_pipeline_on(corpus, cfg);
  ASSERT_EQ(files_in(a), files_in(b));
  for (const auto& name : files_in(a)) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Pipeline, PseudoTablesShareTheRealSchema) {
  GeneratorConfig gc;
  gc.dyads = 6;
  gc.fribbles = 4;
  const auto corpus = generate(gc).corpus;
  const auto out = fresh_dir();
  PipelineConfig cfg{"", out};
  cfg.pseudo = true;
  const auto r = run_pipeline_on(corpus, cfg);
  ASSERT_TRUE(r.pseudo.has_value());
  ASSERT_TRUE(r.plan.has_value());
  for (const std::string name : {"analysis1.csv", "analysis2.csv", "analysis3.csv", "rounds.csv", "types.ndj",
                                 "extraction.ndj"}) {
    ASSERT_TRUE(fs::exists(out / ("pseudo_" + name))) << name;
  }
  for (int id : {1, 2, 3}) {
    const auto name = "analysis" + std::to_string(id) + ".csv";
    const auto real = read_csv(out / name);
    const auto pseudo = read_csv(out / ("pseudo_" + name));
    EXPECT_EQ(real.at(0), pseudo.at(0));
    std::set<std::string> rm, pm;
    for (std::size_t i = 1; i < real.size(); ++i) rm.insert(real[i][7]);
    for (std::size_t i = 1; i < pseudo.size(); ++i) pm.insert(pseudo[i][7]);
    EXPECT_EQ(rm, pm) << name;
  }
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_TRUE(j.contains("pseudo"));
  EXPECT_EQ(j["pseudo_plan"].size(), 6u);
  EXPECT_TRUE(j["comparison"].contains("coverage_real_vs_pseudo"));
}

TEST(Pipeline, SummaryRecomputableFromRows) {
  GeneratorConfig gc;
  gc.dyads = 10;
  gc.fribbles = 6;
  const auto corpus = generate(gc).corpus;
  const auto out = fresh_dir();
  run_pipeline_on(corpus, {"", out});
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  const auto& a1 = j["real"]["analysis1"];
  const auto& a3 = j["real"]["analysis3"];

  std::vector<double> dialogue_cov, round_pts, cov_pts;
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> types_fl;
  for (const auto& row : read_csv(out / "analysis1.csv")) {
    if (row[7] == "dialogue_coverage") dialogue_cov.push_back(std::stod(row[8]));
    if (row[7] == "coverage") {
      round_pts.push_back(std::stod(row[3]));
      cov_pts.push_back(std::stod(row[8]));
    }
    if (row[7] == "types_used" && row[3] == "1") types_fl[{row[1], row[2]}].first = std::stod(row[8]);
    if (row[7] == "types_used" && row[3] == "6") types_fl[{row[1], row[2]}].second = std::stod(row[8]);
  }
  double sum = 0;
  for (double v : dialogue_cov) sum += v;
  EXPECT_NEAR(a1["values"]["mean_dialogue_coverage"]["value"].get<double>(), sum / dialogue_cov.size(), 1e-12);
  EXPECT_NEAR(a1["stats"]["coverage_round_trend"]["statistic"].get<double>(),
              oracle::spearman_rho(round_pts, cov_pts), 1e-12);
  std::vector<double> first, last;
  for (const auto& [k, v] : types_fl) {
    first.push_back(v.first);
    last.push_back(v.second);
  }
  const auto paired = oracle::paired(first, last);
  EXPECT_NEAR(a1["stats"]["types_first_vs_last"]["statistic"].get<double>(), paired.t, 1e-9);
  EXPECT_NEAR(a1["stats"]["types_first_vs_last"]["p_value"].get<double>(), paired.p, 1e-6);

  std::vector<double> delta;
  for (const auto& row : read_csv(out / "analysis3.csv")) {
    if (row[7] == "delta") delta.push_back(std::stod(row[8]));
  }
  double dsum = 0;
  for (double v : delta) dsum += v;
  EXPECT_NEAR(a3["values"]["mean_delta"]["value"].get<double>(), dsum / delta.size(), 1e-12);
}

TEST(Pipeline, InvalidCorpusIsRejected) {
  const auto bundle = fresh_dir("_bundle");
  const auto out = fresh_dir("_out");
  EXPECT_ANY_THROW(run_pipeline({bundle / "missing", out}));
}
