#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "h4/error.hpp"

namespace h4::experiment {

struct PhraseSet {
  std::vector<std::string> phrases;
  std::size_t dropped_characters = 0;  // characters removed during normalization
};

/// Lowercase, keep only a-z and single spaces, trim. Returns the number of
/// characters dropped through `dropped`.
inline std::string normalize_phrase(const std::string& line, std::size_t& dropped) {
  std::string out;
  for (unsigned char c : line) {
    if (c == '\r' || c == '\n') continue;
    const char lower = static_cast<char>(std::tolower(c));
    if (lower >= 'a' && lower <= 'z') {
      out.push_back(lower);
    } else if (c == ' ' || c == '\t') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      ++dropped;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline PhraseSet load_phrase_set(std::istream& in) {
  PhraseSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with('#')) continue;
    std::string phrase = normalize_phrase(line, set.dropped_characters);
    if (!phrase.empty()) set.phrases.push_back(std::move(phrase));
  }
  if (set.phrases.empty()) throw Error("phrase set is empty after normalization");
  return set;
}

inline PhraseSet load_phrase_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open phrase set " + path);
  return load_phrase_set(in);
}

}  // namespace h4::experiment
