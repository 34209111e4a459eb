#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace shacon {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A published figure to set beside a computed one.
struct ReferenceStat {
  std::string label;
  std::string side;      // "real" | "pseudo"
  std::string analysis;  // "analysis1" ...
  std::string name;      // value or stat name
  bool is_stat = false;  // stat: compare the statistic
  double reference = 0.0;
};

const std::vector<ReferenceStat>& reference_stats();

/// Known templates: "summary" (default) and "paper-stats".
std::vector<std::string> report_templates();

/// Renders the summary.json in `dir` as plain text.
std::string render_report(const std::filesystem::path& dir, const std::string& template_name = "summary");

}  // namespace shacon
