#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "h4/codec.hpp"
#include "h4/engine.hpp"

namespace h4 {

/// Minimum string distance: unit-cost insert/delete/substitute edit distance.
template <typename Seq>
  requires requires(const Seq& s) { s.size(); s[0]; }
std::size_t msd(const Seq& a, const Seq& b) {
  const Seq& shorter = a.size() <= b.size() ? a : b;
  const Seq& longer = a.size() <= b.size() ? b : a;
  std::vector<std::size_t> row(shorter.size() + 1);
  for (std::size_t i = 0; i <= shorter.size(); ++i) row[i] = i;
  for (std::size_t j = 1; j <= longer.size(); ++j) {
    std::size_t diag = row[0];
    row[0] = j;
    for (std::size_t i = 1; i <= shorter.size(); ++i) {
      const std::size_t above = row[i];
      row[i] = shorter[i - 1] == longer[j - 1] ? diag
                                               : 1 + std::min({diag, above, row[i - 1]});
      diag = above;
    }
  }
  return row[shorter.size()];
}

inline std::size_t msd(std::string_view a, std::string_view b) { return msd<std::string_view>(a, b); }

/// Words per minute, five characters per word; the first character is not timed.
inline double entry_speed_wpm(std::size_t characters, double seconds) {
  if (characters < 2) throw Error("entry speed needs at least two characters");
  if (!(seconds > 0.0)) throw Error("entry speed needs a positive duration");
  return (static_cast<double>(characters) - 1.0) / 5.0 * (60.0 / seconds);
}

/// Seconds from the first keystroke to the last non-[enter] emission.
inline double trial_duration_s(const Trial& trial) {
  if (!trial.started_ms || !trial.last_emission_ms) return 0.0;
  return static_cast<double>(*trial.last_emission_ms - *trial.started_ms) / 1000.0;
}

inline double entry_speed_wpm(const Trial& trial) {
  return entry_speed_wpm(trial.transcribed.size(), trial_duration_s(trial));
}

enum class KspcMode { weighted, unweighted };

/// Keystrokes per character a code table demands. Weighted averages code
/// lengths by frequency; unweighted is the plain mean over the symbol set.
inline double kspc_theoretical(const CodeTable& table, const SymbolFrequencyTable& freqs,
                               KspcMode mode) {
  if (mode == KspcMode::weighted) return weighted_code_length(table, freqs);
  double sum = 0.0;
  for (const auto& e : freqs.entries()) {
    const Code* code = table.find(e.symbol);
    if (!code) throw Error("code table has no code for " + e.symbol.token());
    sum += static_cast<double>(code->size());
  }
  return sum / static_cast<double>(freqs.size());
}

inline double kspc_empirical(const Trial& trial) {
  if (trial.transcribed.empty()) throw Error("KSPC undefined for an empty transcription");
  return static_cast<double>(trial.counted_keystrokes()) /
         static_cast<double>(trial.transcribed.size());
}

/// Minimal keystrokes for the final transcription over keystrokes spent, in percent.
inline double efficiency(const Trial& trial, const CodeTable& table) {
  if (trial.transcribed.empty()) throw Error("efficiency undefined for an empty transcription");
  std::size_t minimal = encode_text(table, trial.transcribed).size();
  if (trial.count_enter && trial.finished) minimal += trial.enter_keystrokes;
  return 100.0 * static_cast<double>(minimal) / static_cast<double>(trial.counted_keystrokes());
}

inline double uncorrected_error_rate(std::string_view presented, std::string_view transcribed) {
  const std::size_t longest = std::max(presented.size(), transcribed.size());
  if (longest == 0) return 0.0;
  return 100.0 * static_cast<double>(msd(presented, transcribed)) / static_cast<double>(longest);
}

inline double uncorrected_error_rate(const Trial& trial) {
  return uncorrected_error_rate(trial.presented, trial.transcribed);
}

/// Dependent variables of one trial. Fields that are undefined for the
/// trial (e.g. wpm with fewer than two characters) are empty.
struct TrialMetrics {
  std::optional<double> wpm;
  std::optional<double> kspc_empirical;
  std::optional<double> efficiency;
  double uncorrected_error_rate = 0.0;
  int corrected_count = 0;
  double duration_s = 0.0;

  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

inline TrialMetrics compute_metrics(const Trial& trial, const CodeTable& table) {
  TrialMetrics m;
  m.duration_s = trial_duration_s(trial);
  if (trial.transcribed.size() >= 2 && m.duration_s > 0.0) m.wpm = entry_speed_wpm(trial);
  if (!trial.transcribed.empty()) {
    m.kspc_empirical = kspc_empirical(trial);
    m.efficiency = efficiency(trial, table);
  }
  m.uncorrected_error_rate = uncorrected_error_rate(trial);
  m.corrected_count = trial.corrected_count;
  return m;
}

inline constexpr std::string_view kMetricsCsvHeader =
    "wpm,kspc,efficiency,uncorrected_error_rate,corrected_count,duration_s";

inline std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

inline std::string metrics_csv_row(const TrialMetrics& m) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  return opt(m.wpm) + ',' + opt(m.kspc_empirical) + ',' + opt(m.efficiency) + ',' +
         format_number(m.uncorrected_error_rate) + ',' + std::to_string(m.corrected_count) + ',' +
         format_number(m.duration_s);
}

inline nlohmann::ordered_json to_json(const TrialMetrics& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["wpm"] = opt(m.wpm);
  j["kspc"] = opt(m.kspc_empirical);
  j["efficiency"] = opt(m.efficiency);
  j["uncorrected_error_rate"] = m.uncorrected_error_rate;
  j["corrected_count"] = m.corrected_count;
  j["duration_s"] = m.duration_s;
  return j;
}

inline TrialMetrics metrics_from_json(const nlohmann::json& j) {
  auto opt = [&j](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  TrialMetrics m;
  m.wpm = opt("wpm");
  m.kspc_empirical = opt("kspc");
  m.efficiency = opt("efficiency");
  m.uncorrected_error_rate = j.at("uncorrected_error_rate").get<double>();
  m.corrected_count = j.at("corrected_count").get<int>();
  m.duration_s = j.at("duration_s").get<double>();
  return m;
}

}  // namespace h4
