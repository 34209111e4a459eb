#include "shacon/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace shacon {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
std::optional<T> parse_number(const std::string& s) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

KvConfig KvConfig::parse(std::istream& in, const std::string& source) {
  KvConfig cfg;
  cfg.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    if (!cfg.values_.emplace(key, Entry{value, line_no}).second) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KvConfig KvConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in, path.string());
}

void KvConfig::fail(const std::string& key, const std::string& message) const {
  const auto* e = find(key);
  throw ConfigError(source_ + ":" + std::to_string(e ? e->line : 0) + ": " + key + ": " + message);
}

const KvConfig::Entry* KvConfig::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto* e = find(key);
  return e ? e->value : fallback;
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  auto v = parse_number<long long>(e->value);
  if (!v) fail(key, "expected an integer, got '" + e->value + "'");
  return *v;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  auto v = parse_number<double>(e->value);
  if (!v) fail(key, "expected a number, got '" + e->value + "'");
  return *v;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(key, "expected true/false, got '" + e->value + "'");
}

std::vector<double> KvConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(e->value)) {
    auto v = parse_number<double>(item);
    if (!v) fail(key, "expected a number list, got '" + e->value + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<int> KvConfig::get_ints(const std::string& key, const std::vector<int>& fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(e->value)) {
    auto v = parse_number<int>(item);
    if (!v) fail(key, "expected an integer list, got '" + e->value + "'");
    out.push_back(*v);
  }
  return out;
}

void KvConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : values_) {
    if (!known.contains(key)) {
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace shacon
