#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h4/error.hpp"

namespace h4 {

/// One selectable item: a single printable ASCII character or a bracketed
/// command token (`[space]`, `[bksp]`, `[enter]`). Symbols order by token
/// bytes; this is the canonical order used for deterministic tie-breaking.
class Symbol {
 public:
  static Symbol from_token(std::string_view token) {
    if (token.size() == 1) {
      const auto c = static_cast<unsigned char>(token[0]);
      if (c == ' ') return Symbol("[space]");
      if (!std::isgraph(c)) throw Error("symbol must be a printable character");
      return Symbol(std::string(token));
    }
    if (token.size() > 2 && token.front() == '[' && token.back() == ']') {
      std::string name(token);
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (name == "[space]" || name == "[bksp]" || name == "[enter]") return Symbol(std::move(name));
      throw Error("unknown command token " + std::string(token));
    }
    throw Error("invalid symbol token \"" + std::string(token) + "\"");
  }

  /// Text character to symbol; ' ' becomes [space].
  static Symbol from_char(char c) { return from_token(std::string_view(&c, 1)); }

  const std::string& token() const { return token_; }
  bool is_command() const { return token_.size() > 1; }

  /// The character this symbol appends to a transcription, if any.
  std::optional<char> text_char() const {
    if (!is_command()) return token_[0];
    if (token_ == "[space]") return ' ';
    return std::nullopt;
  }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    return a.token_.compare(b.token_) <=> 0;
  }

 private:
  explicit Symbol(std::string token) : token_(std::move(token)) {}
  std::string token_;
};

inline const Symbol& space_symbol() {
  static const Symbol s = Symbol::from_token("[space]");
  return s;
}
inline const Symbol& backspace_symbol() {
  static const Symbol s = Symbol::from_token("[bksp]");
  return s;
}
inline const Symbol& enter_symbol() {
  static const Symbol s = Symbol::from_token("[enter]");
  return s;
}

inline std::vector<Symbol> text_to_symbols(std::string_view text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(Symbol::from_char(c));
  return out;
}

}  // namespace h4
