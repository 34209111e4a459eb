#include "shacon/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace shacon {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ordered_json load_summary(const std::filesystem::path& dir) {
  const auto file = dir / "summary.json";
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ReportError("cannot read " + file.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(file.string() + ": " + e.what());
  }
}

void render_side(std::ostringstream& out, const std::string& title, const ordered_json& side) {
  out << "== " << title << " ==\n";
  for (const auto& [aname, a] : side.items()) {
    out << aname << '\n';
    if (a.contains("skipped")) {
      out << "  skipped: " << a["skipped"].get<std::string>() << '\n';
      continue;
    }
    for (const auto& [vname, v] : a["values"].items()) {
      out << "  " << vname << " = " << fixed(v["value"].get<double>()) << " (n=" << v["n"].get<std::size_t>()
          << ")\n";
    }
    for (const auto& [sname, s] : a["stats"].items()) {
      out << "  " << sname << ": ";
      if (s.contains("undefined")) {
        out << "undefined (" << s["undefined"].get<std::string>() << ")\n";
        continue;
      }
      out << "stat=" << fixed(s["statistic"].get<double>()) << " p=" << fixed(s["p_value"].get<double>(), 6)
          << " n=" << s["n"].get<std::size_t>();
      if (s.contains("permutation_p")) out << " perm_p=" << fixed(s["permutation_p"].get<double>(), 6);
      out << '\n';
    }
  }
}

std::string render_summary(const ordered_json& j) {
  std::ostringstream out;
  out << "dyads: " << j["corpus"]["dyads"].get<std::size_t>()
      << "  namings: " << j["corpus"]["namings"].get<std::size_t>() << '\n';
  render_side(out, "real", j["real"]);
  if (j.contains("pseudo")) render_side(out, "pseudo", j["pseudo"]);
  if (j.contains("comparison")) {
    const auto& c = j["comparison"];
    out << "== real vs pseudo ==\n";
    out << "  mean coverage real = " << fixed(c["mean_coverage_real"].get<double>())
        << ", pseudo = " << fixed(c["mean_coverage_pseudo"].get<double>()) << '\n';
    const auto& t = c["coverage_real_vs_pseudo"];
    if (t.contains("statistic")) {
      out << "  welch t = " << fixed(t["statistic"].get<double>()) << " p=" << fixed(t["p_value"].get<double>(), 6)
          << '\n';
    }
  }
  return out.str();
}

std::string render_reference(const ordered_json& j) {
  std::ostringstream out;
  out << "label | reference | computed\n";
  for (const auto& r : reference_stats()) {
    out << r.label << " | " << fixed(r.reference, 3) << " | ";
    const ordered_json* a = nullptr;
    if (j.contains(r.side) && j[r.side].contains(r.analysis)) a = &j[r.side][r.analysis];
    if (a == nullptr || a->contains("skipped")) {
      out << "n/a\n";
      continue;
    }
    if (r.is_stat) {
      const auto& stats = (*a)["stats"];
      if (!stats.contains(r.name) || stats[r.name].contains("undefined")) {
        out << "n/a\n";
      } else {
        out << fixed(stats[r.name]["statistic"].get<double>(), 3)
            << " (p=" << fixed(stats[r.name]["p_value"].get<double>(), 4) << ")\n";
      }
    } else {
      const auto& values = (*a)["values"];
      out << (values.contains(r.name) ? fixed(values[r.name]["value"].get<double>(), 3) : "n/a") << '\n';
    }
  }
  return out.str();
}

}  // namespace

const std::vector<ReferenceStat>& reference_stats() {
  static const std::vector<ReferenceStat> table{
      {"pairs with a construction for every fribble", "real", "analysis1", "dyad_fraction_all_fribbles", false, 0.92},
      {"mean utterance coverage", "real", "analysis1", "mean_dialogue_coverage", false, 0.34},
      {"coverage, first round", "real", "analysis1", "mean_coverage_first_round", false, 0.27},
      {"coverage, last round", "real", "analysis1", "mean_coverage_last_round", false, 0.37},
      {"round vs coverage rho", "real", "analysis1", "coverage_round_trend", true, 0.36},
      {"mean utterance coverage, pseudo pairs", "pseudo", "analysis1", "mean_dialogue_coverage", false, 0.14},
      {"types per fribble", "real", "analysis1", "mean_types_per_fribble", false, 4.0},
      {"types, first round", "real", "analysis1", "mean_types_first_round", false, 4.25},
      {"types, last round", "real", "analysis1", "mean_types_last_round", false, 1.86},
      {"types first vs last t", "real", "analysis1", "types_first_vs_last", true, 16.45},
      {"pre/post name self-similarity", "real", "analysis2", "self_similarity_mean", false, 0.27},
      {"pre/post name self-similarity sd", "real", "analysis2", "self_similarity_std", false, 0.24},
      {"pre names overlapping a type", "real", "analysis2", "overlap_rate_pre_mean", false, 0.413},
      {"post names overlapping a type", "real", "analysis2", "overlap_rate_post_mean", false, 0.615},
      {"recency vs post-name similarity rho", "real", "analysis2", "recency_post", true, 0.2},
      {"usage vs post-name similarity rho", "real", "analysis2", "frequency_post", true, 0.45},
      {"mean s_pre", "real", "analysis3", "mean_s_pre", false, 0.06},
      {"mean s_post", "real", "analysis3", "mean_s_post", false, 0.43},
      {"mean s_post - s_pre", "real", "analysis3", "mean_delta", false, 0.37},
      {"mean s_post, pseudo pairs", "pseudo", "analysis3", "mean_s_post", false, 0.07},
      {"mean s_post - s_pre, pseudo pairs", "pseudo", "analysis3", "mean_delta", false, 0.0},
      {"types vs s_post rho", "real", "analysis3", "types_vs_s_post", true, -0.13},
      {"dominant frequency vs s_post rho", "real", "analysis3", "dominant_frequency_vs_s_post", true, 0.28},
      {"dominant recency vs s_post rho", "real", "analysis3", "dominant_recency_vs_s_post", true, 0.17},
  };
  return table;
}

std::vector<std::string> report_templates() { return {"summary", "paper-stats"}; }

std::string render_report(const std::filesystem::path& dir, const std::string& template_name) {
  const auto j = load_summary(dir);
  try {
    if (template_name == "summary") return render_summary(j);
    if (template_name == "paper-stats") return render_reference(j);
  } catch (const nlohmann::json::exception& e) {
    throw ReportError("malformed summary.json: " + std::string(e.what()));
  }
  throw ReportError("unknown template: " + template_name);
}

}  // namespace shacon
