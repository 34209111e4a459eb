#include <gtest/gtest.h>

#include "shacon/pipeline.hpp"
#include "shacon/report.hpp"
#include "shacon/synthgen.hpp"
#include "tmpdir.hpp"

using namespace shacon;

TEST(Report, SummaryTemplate) {
  const auto out = fresh_dir();
  run_pipeline({SHACON_FIXTURES "/boiler", out});
  const auto text = render_report(out);
  EXPECT_NE(text.find("== real =="), std::string::npos);
  EXPECT_NE(text.find("mean_dialogue_coverage = 0.8824"), std::string::npos) << text;
  EXPECT_NE(text.find("types_first_vs_last: undefined"), std::string::npos);
  EXPECT_EQ(text.find("== pseudo =="), std::string::npos);
}

TEST(Report, ReferenceTemplateListsEveryFigure) {
  GeneratorConfig gc;
  gc.dyads = 6;
  gc.fribbles = 4;
  const auto out = fresh_dir();
  PipelineConfig cfg{"", out};
  cfg.pseudo = true;
  run_pipeline_on(generate(gc).corpus, cfg);
  const auto text = render_report(out, "paper-stats");
  for (const auto& r : reference_stats()) EXPECT_NE(text.find(r.label), std::string::npos) << r.label;
  EXPECT_NE(text.find("0.340"), std::string::npos);
  EXPECT_NE(text.find("16.450"), std::string::npos);
}

TEST(Report, ReferenceTableShape) {
  const auto& refs = reference_stats();
  EXPECT_EQ(refs.size(), 24u);
  for (const auto& r : refs) {
    EXPECT_TRUE(r.side == "real" || r.side == "pseudo");
    EXPECT_TRUE(r.analysis == "analysis1" || r.analysis == "analysis2" || r.analysis == "analysis3");
  }
  EXPECT_EQ(report_templates(), (std::vector<std::string>{"summary", "paper-stats"}));
}

TEST(Report, Errors) {
  const auto out = fresh_dir();
  EXPECT_THROW(render_report(out), ReportError);
  spit(out / "summary.json", "{not json");
  EXPECT_THROW(render_report(out), ReportError);
  run_pipeline({SHACON_FIXTURES "/boiler", out});
  EXPECT_THROW(render_report(out, "nope"), ReportError);
}
