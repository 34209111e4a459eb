#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace shacon {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. `#` starts a comment, blank lines are skipped,
/// lists are comma separated. Duplicate keys are an error.
class KvConfig {
 public:
  static KvConfig parse(std::istream& in, const std::string& source = "<config>");
  static KvConfig from_file(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.contains(key); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  /// Throws on any key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

 private:
  struct Entry {
    std::string value;
    std::size_t line;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  const Entry* find(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> values_;
};

}  // namespace shacon
