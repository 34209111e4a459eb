// Command-line front end. Errors go to stderr as one JSON object.
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/kv_config.hpp"
#include "shacon/pipeline.hpp"
#include "shacon/pseudo_pairs.hpp"
#include "shacon/report.hpp"
#include "shacon/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace shacon;

namespace {

int fail(const ordered_json& err, int code = 1) {
  std::cerr << err.dump() << '\n';
  return code;
}

ordered_json violations_json(const ValidationReport& report) {
  auto arr = ordered_json::array();
  for (const auto& v : report) arr.push_back({{"where", v.where}, {"message", v.message}});
  return arr;
}

std::set<int> parse_which(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "1" || item == "2" || item == "3") {
      out.insert(item[0] - '0');
    } else {
      throw ConfigError("--which takes a comma list of 1, 2, 3; got '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError("--which is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared construction detection for referential dialogue corpora"};
  app.require_subcommand(1);

  std::string bundle, out_dir, config_file, which = "1,2,3", templ = "summary";
  std::uint64_t seed = 1;
  bool pseudo = false;
  int permutations = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check a corpus bundle and print the violation report");
  validate_cmd->add_option("bundle", bundle)->required();

  auto* extract_cmd = app.add_subcommand("extract", "Write shared constructions and types");
  extract_cmd->add_option("bundle", bundle)->required();
  extract_cmd->add_option("-o,--out", out_dir)->required();

  auto* pseudo_cmd = app.add_subcommand("pseudo", "Write a pseudo-pair control bundle");
  pseudo_cmd->add_option("bundle", bundle)->required();
  pseudo_cmd->add_option("--seed", seed);
  pseudo_cmd->add_option("-o,--out", out_dir)->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Run the analyses and write tables plus summary.json");
  analyze_cmd->add_option("bundle", bundle)->required();
  analyze_cmd->add_option("--which", which);
  analyze_cmd->add_flag("--pseudo", pseudo);
  analyze_cmd->add_option("--seed", seed);
  analyze_cmd->add_option("--permutations", permutations)->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("-o,--out", out_dir)->required();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic bundle from a key = value config");
  synth_cmd->add_option("config", config_file)->required();
  synth_cmd->add_option("-o,--out", out_dir)->required();

  auto* report_cmd = app.add_subcommand("report", "Print a text report of an analyze output directory");
  report_cmd->add_option("dir", out_dir)->required();
  report_cmd->add_option("--template", templ)->check(CLI::IsMember(report_templates()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail({{"error", "usage"}, {"message", e.what()}}, 2);
  }

  try {
    if (*validate_cmd) {
      const Corpus c = read_corpus(bundle);
      const auto report = validate(c);
      std::cout << ordered_json{{"violations", violations_json(report)}}.dump(1) << '\n';
      return report.empty() ? 0 : 1;
    }
    if (*extract_cmd) {
      const Corpus c = parse_corpus(bundle);
      const auto ca = analyze_corpus(c);
      fs::create_directories(out_dir);
      write_extraction(ca, fs::path(out_dir) / "extraction.ndj");
      write_types(ca, fs::path(out_dir) / "types.ndj");
      return 0;
    }
    if (*pseudo_cmd) {
      const Corpus c = parse_corpus(bundle);
      std::vector<DyadId> dyads;
      for (const auto& d : c.dialogues) dyads.push_back(d.dyad);
      write_corpus(build_pseudo_corpus(c, plan_pseudo_pairs(dyads, seed)), out_dir);
      return 0;
    }
    if (*analyze_cmd) {
      PipelineConfig cfg;
      cfg.corpus = bundle;
      cfg.output = out_dir;
      cfg.seed = seed;
      cfg.which = parse_which(which);
      cfg.pseudo = pseudo;
      cfg.permutations = permutations;
      run_pipeline(cfg);
      return 0;
    }
    if (*synth_cmd) {
      const auto kv = KvConfig::from_file(config_file);
      const auto cfg = GeneratorConfig::from_kv(kv);
      const auto g = generate(cfg);
      write_corpus(g.corpus, out_dir);
      write_ground_truth(g.truth, out_dir);
      return 0;
    }
    if (*report_cmd) {
      std::cout << render_report(out_dir, templ);
      return 0;
    }
  } catch (const ParseError& e) {
    return fail({{"error", "parse"},
                 {"message", e.what()},
                 {"file", e.file()},
                 {"line", e.line()},
                 {"field", e.field()}});
  } catch (const ValidationError& e) {
    return fail({{"error", "validation"}, {"message", e.what()}, {"violations", violations_json(e.report())}});
  } catch (const ConfigError& e) {
    return fail({{"error", "config"}, {"message", e.what()}});
  } catch (const IoError& e) {
    return fail({{"error", "io"}, {"message", e.what()}});
  } catch (const ReportError& e) {
    return fail({{"error", "report"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    return fail({{"error", "internal"}, {"message", e.what()}});
  }
  return 0;
}
