// Declarative run configuration: an INI-style file of `key = value` lines
// grouped under `[section]` headers, plus command-line overrides.  Every
// value remembers the line it came from so diagnostics can point at it.
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bgate/report/csv.hpp"

namespace bgate::report {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;  // 0 for command-line overrides
  };

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "grid.dt", "grid.t_end",
        "input.mu", "input.sigma", "input.q", "input.r_on", "input.r_off",
        "gate.mu_star", "gate.sigma0_star", "gate.gates",
        "lsr.alpha", "lsr.beta", "lsr.y_lo", "lsr.y_hi", "lsr.native",
        "simulate.svg", "simulate.stride",
        "sweep.experiment", "sweep.axis1", "sweep.axis2", "sweep.replicates", "sweep.mismatched_sigma0_star",
        "sweep.common_random_numbers", "sweep.decoder", "sweep.burn_in",
        "run.seed", "run.threads", "run.out",
        "validate.steps", "validate.probes", "validate.starts",
    };
    return keys;
  }

  static Config parse(std::istream& in, std::string source = "<config>") {
    Config cfg;
    cfg.source_ = std::move(source);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line(raw);
      if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
      const std::string text = trim(line);
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']') throw cfg.error(line_no, "unterminated section header");
        section = trim(std::string_view(text).substr(1, text.size() - 2));
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw cfg.error(line_no, "expected 'key = value'");
      const std::string key = trim(std::string_view(text).substr(0, eq));
      if (key.empty()) throw cfg.error(line_no, "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (!known_keys().contains(full)) throw cfg.error(line_no, "unknown field '" + full + "'");
      cfg.entries_[full] = Entry{trim(std::string_view(text).substr(eq + 1)), line_no};
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    return parse(in, path);
  }

  void set(const std::string& key, const std::string& value) {
    if (!known_keys().contains(key)) throw ConfigError("unknown field '" + key + "'");
    entries_[key] = Entry{value, 0};
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  /// Diagnostic naming the field and, when known, its file line.
  ConfigError field_error(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    std::string where = source_;
    if (it != entries_.end()) {
      where = it->second.line > 0 ? source_ + ":" + std::to_string(it->second.line) : "command line";
    }
    return ConfigError(where + ": field '" + key + "': " + what);
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto v = parse_number(it->second.value);
    if (!v) throw field_error(key, "expected a number, got '" + it->second.value + "'");
    return *v;
  }

  std::optional<double> get_optional_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key, 0.0);
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::int64_t v = 0;
    const auto& s = it->second.value;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw field_error(key, "expected an integer, got '" + s + "'");
    }
    return v;
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::uint64_t v = 0;
    const auto& s = it->second.value;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw field_error(key, "expected a nonnegative integer, got '" + s + "'");
    }
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw field_error(key, "expected true/false, got '" + it->second.value + "'");
  }

  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : split_list(it->second.value);
  }

  std::vector<double> get_number_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : get_list(key, {})) {
      const auto v = parse_number(item);
      if (!v) throw field_error(key, "expected a list of numbers, got '" + item + "'");
      out.push_back(*v);
    }
    return out;
  }

  const std::string& source() const noexcept { return source_; }

 private:
  ConfigError error(int line, const std::string& what) const {
    return ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  std::string source_ = "<defaults>";
  std::map<std::string, Entry> entries_;
};

}  // namespace bgate::report
