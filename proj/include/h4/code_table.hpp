#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "h4/detail/tsv.hpp"
#include "h4/direction.hpp"
#include "h4/error.hpp"
#include "h4/frequency_table.hpp"
#include "h4/symbol.hpp"

namespace h4 {

enum class TableSource { generated, loaded };

/// Prefix-free mapping from symbols to key codes. Immutable once built; the
/// constructor rejects empty codes and prefix violations.
class CodeTable {
 public:
  CodeTable(std::map<Symbol, Code> codes, TableSource source)
      : codes_(std::move(codes)), source_(source) {
    if (codes_.empty()) throw Error("code table is empty");
    check_prefix_free();
  }

  const Code& code(const Symbol& s) const {
    auto it = codes_.find(s);
    if (it == codes_.end()) throw Error("symbol " + s.token() + " not in code table");
    return it->second;
  }
  const Code* find(const Symbol& s) const {
    auto it = codes_.find(s);
    return it == codes_.end() ? nullptr : &it->second;
  }
  bool contains(const Symbol& s) const { return codes_.contains(s); }

  const std::map<Symbol, Code>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  TableSource source() const { return source_; }

  /// Entries sorted by (code length, code), the order used when saving.
  std::vector<std::pair<Symbol, Code>> by_code() const {
    std::vector<std::pair<Symbol, Code>> rows(codes_.begin(), codes_.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.second.size() != b.second.size()) return a.second.size() < b.second.size();
      return a.second < b.second;
    });
    return rows;
  }

  // Equality compares the mapping only; provenance is metadata.
  friend bool operator==(const CodeTable& a, const CodeTable& b) { return a.codes_ == b.codes_; }

 private:
  void check_prefix_free() const {
    std::vector<std::pair<Code, const Symbol*>> sorted;
    sorted.reserve(codes_.size());
    for (const auto& [sym, code] : codes_) {
      if (code.empty()) throw Error("empty code for symbol " + sym.token());
      sorted.emplace_back(code, &sym);
    }
    // Lexicographic order puts every prefix immediately before some code it prefixes.
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const Code& a = sorted[i - 1].first;
      const Code& b = sorted[i].first;
      if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) {
        throw Error("prefix violation: " + sorted[i - 1].second->token() + " (" + to_string(a) +
                    ") is a prefix of " + sorted[i].second->token() + " (" + to_string(b) + ")");
      }
    }
  }

  std::map<Symbol, Code> codes_;
  TableSource source_;
};

inline CodeTable load_code_table(std::istream& in) {
  std::map<Symbol, Code> codes;
  for (const auto& row : detail::read_tsv(in, "code table")) {
    Symbol sym = Symbol::from_token(row.key);
    Code code;
    try {
      code = parse_code(row.value);
    } catch (const Error& e) {
      throw Error("code table: line " + std::to_string(row.line_no) + ": " + e.what());
    }
    if (!codes.emplace(sym, std::move(code)).second)
      throw Error("code table: duplicate symbol " + sym.token() + " on line " +
                  std::to_string(row.line_no));
  }
  return CodeTable(std::move(codes), TableSource::loaded);
}

inline CodeTable load_code_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open code table " + path);
  return load_code_table(in);
}

inline void save_code_table(const CodeTable& table, std::ostream& out) {
  for (const auto& [sym, code] : table.by_code()) out << sym.token() << '\t' << to_string(code) << '\n';
}

inline std::string serialize(const CodeTable& table) {
  std::ostringstream out;
  save_code_table(table, out);
  return out.str();
}

/// FNV-1a 64 over the saved form, as 16 hex digits. Identifies the table in logs.
inline std::string table_hash(const CodeTable& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize(table)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Code encode(const CodeTable& table, std::span<const Symbol> text) {
  Code out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const Code* code = table.find(text[i]);
    if (!code)
      throw Error("cannot encode symbol " + text[i].token() + " at position " + std::to_string(i));
    out.insert(out.end(), code->begin(), code->end());
  }
  return out;
}

inline Code encode_text(const CodeTable& table, std::string_view text) {
  const auto symbols = text_to_symbols(text);
  return encode(table, symbols);
}

/// Sum of normalized frequency times code length. Zero-frequency symbols may
/// be absent from the table; positive-frequency ones may not.
inline double weighted_code_length(const CodeTable& table, const SymbolFrequencyTable& freqs) {
  const double total = freqs.total();
  double sum = 0.0;
  for (const auto& e : freqs.entries()) {
    const Code* code = table.find(e.symbol);
    if (!code) {
      if (e.frequency > 0.0) throw Error("code table has no code for " + e.symbol.token());
      continue;
    }
    sum += e.frequency / total * static_cast<double>(code->size());
  }
  return sum;
}

}  // namespace h4
