#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "h4/detail/tsv.hpp"
#include "h4/error.hpp"
#include "h4/symbol.hpp"

namespace h4 {

struct FrequencyEntry {
  Symbol symbol;
  double frequency;

  friend bool operator==(const FrequencyEntry&, const FrequencyEntry&) = default;
};

/// Relative symbol frequencies. Entries keep their input order; frequencies
/// need not sum to one (see normalized()).
class SymbolFrequencyTable {
 public:
  explicit SymbolFrequencyTable(std::vector<FrequencyEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("frequency table is empty");
    std::set<Symbol> seen;
    bool any_positive = false;
    for (const auto& e : entries_) {
      if (!seen.insert(e.symbol).second) throw Error("duplicate symbol " + e.symbol.token());
      if (!std::isfinite(e.frequency) || e.frequency < 0.0)
        throw Error("frequency of " + e.symbol.token() + " must be finite and nonnegative");
      any_positive = any_positive || e.frequency > 0.0;
    }
    if (!any_positive) throw Error("frequency table has no positive frequency");
  }

  const std::vector<FrequencyEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  double total() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.frequency;
    return sum;
  }

  SymbolFrequencyTable normalized() const {
    const double t = total();
    std::vector<FrequencyEntry> out = entries_;
    for (auto& e : out) e.frequency /= t;
    return SymbolFrequencyTable(std::move(out));
  }

  /// Shannon entropy of the normalized distribution in the given base.
  double entropy(double base = 4.0) const {
    const double t = total();
    double h = 0.0;
    for (const auto& e : entries_) {
      if (e.frequency <= 0.0) continue;
      const double p = e.frequency / t;
      h -= p * std::log(p);
    }
    return h / std::log(base);
  }

  friend bool operator==(const SymbolFrequencyTable&, const SymbolFrequencyTable&) = default;

 private:
  std::vector<FrequencyEntry> entries_;
};

inline SymbolFrequencyTable load_frequency_table(std::istream& in) {
  std::vector<FrequencyEntry> entries;
  for (const auto& row : detail::read_tsv(in, "frequency file")) {
    double value = 0.0;
    const char* first = row.value.data();
    const char* last = first + row.value.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
      throw Error("frequency file: bad number on line " + std::to_string(row.line_no) + ": \"" +
                  row.value + "\"");
    entries.push_back({Symbol::from_token(row.key), value});
  }
  return SymbolFrequencyTable(std::move(entries));
}

inline SymbolFrequencyTable load_frequency_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open frequency file " + path);
  return load_frequency_table(in);
}

inline void save_frequency_table(const SymbolFrequencyTable& table, std::ostream& out) {
  for (const auto& e : table.entries())
    out << e.symbol.token() << '\t' << std::setprecision(std::numeric_limits<double>::max_digits10)
        << e.frequency << '\n';
}

}  // namespace h4
