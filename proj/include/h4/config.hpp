#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "h4/error.hpp"
#include "h4/frequency_table.hpp"

namespace h4 {

/// Run configuration, read from a flat `key = value` file (TOML subset:
/// comments with '#', quoted or bare strings, numbers, true/false).
///
///   letters = "english_letters.tsv"   # letter frequencies; path relative to the config file
///   space = 0.18                      # command frequencies as shares of all traffic
///   bksp = 0.04
///   enter = 0.02
///   count-enter = false
///   seed = 2024
struct Config {
  std::string letters;
  double space = 0.18;
  double bksp = 0.04;
  double enter = 0.02;
  bool count_enter = false;
  std::uint64_t seed = 2024;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error("config: " + key + " must be a number, got \"" + v + "\"");
  }
}

}  // namespace detail

inline Config parse_config(std::istream& in, const std::string& base_dir = {}) {
  Config c;
  for (const auto& [key, value] : detail::read_key_values(in)) {
    if (key == "letters") {
      c.letters = (!base_dir.empty() && !value.empty() && value.front() != '/') ? base_dir + "/" + value : value;
    } else if (key == "space") {
      c.space = detail::parse_double(key, value);
    } else if (key == "bksp") {
      c.bksp = detail::parse_double(key, value);
    } else if (key == "enter") {
      c.enter = detail::parse_double(key, value);
    } else if (key == "count-enter") {
      if (value != "true" && value != "false") throw Error("config: count-enter must be true or false");
      c.count_enter = value == "true";
    } else if (key == "seed") {
      try {
        c.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw Error("config: seed must be a nonnegative integer");
      }
    } else {
      throw Error("config: unknown key \"" + key + "\"");
    }
  }
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  const auto slash = path.find_last_of('/');
  return parse_config(in, slash == std::string::npos ? "." : path.substr(0, slash));
}

/// Letter frequencies rescaled to the traffic left after the commands, plus
/// the three command symbols.
inline SymbolFrequencyTable with_commands(const SymbolFrequencyTable& letters, const Config& c) {
  const double commands = c.space + c.bksp + c.enter;
  if (c.space < 0 || c.bksp < 0 || c.enter < 0 || commands >= 1.0)
    throw Error("command frequencies must be nonnegative and sum to less than 1");
  std::vector<FrequencyEntry> entries;
  const double total = letters.total();
  for (const auto& e : letters.entries()) entries.push_back({e.symbol, e.frequency / total * (1.0 - commands)});
  entries.push_back({space_symbol(), c.space});
  entries.push_back({backspace_symbol(), c.bksp});
  entries.push_back({enter_symbol(), c.enter});
  return SymbolFrequencyTable(std::move(entries));
}

}  // namespace h4
