#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4/engine.hpp"

namespace h4 {

// Keystroke logs are JSON Lines. A header line opens each trial:
//   {"kind":"trial","presented":"...","table":"<hash>","count_enter":false}
// followed by one line per press:
//   {"d":"L","t":12345,"o":"descend"}      o: descend | emit:<token> | rejected
// Keys appear in exactly this order.

inline std::string outcome_tag(const KeystrokeEvent& e) {
  switch (e.outcome) {
    case Outcome::descend: return "descend";
    case Outcome::rejected: return "rejected";
    case Outcome::emit: return "emit:" + e.symbol->token();
  }
  return {};
}

inline nlohmann::ordered_json event_json(const KeystrokeEvent& e) {
  nlohmann::ordered_json j;
  j["d"] = std::string(1, to_char(e.direction));
  j["t"] = e.t_ms;
  j["o"] = outcome_tag(e);
  return j;
}

struct LoggedEvent {
  LoggedPress press;
  std::string outcome;
};

inline LoggedEvent parse_event(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("t") || !j.contains("o"))
    throw Error("keystroke event needs d, t and o fields");
  const auto& d = j.at("d").get_ref<const std::string&>();
  auto dir = d.size() == 1 ? direction_from_char(d[0]) : std::nullopt;
  if (!dir) throw Error("bad direction \"" + d + "\" in keystroke event");
  return {{*dir, j.at("t").get<std::int64_t>()}, j.at("o").get<std::string>()};
}

struct TrialLog {
  std::string presented;
  std::string table_hash;
  bool count_enter = false;
  std::vector<LoggedEvent> events;

  std::vector<LoggedPress> presses() const {
    std::vector<LoggedPress> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.press);
    return out;
  }
};

inline nlohmann::ordered_json trial_header(const Trial& trial, const std::string& table_hash) {
  nlohmann::ordered_json h;
  h["kind"] = "trial";
  h["presented"] = trial.presented;
  h["table"] = table_hash;
  h["count_enter"] = trial.count_enter;
  return h;
}

inline void write_trial_log(std::ostream& out, const Trial& trial, const std::string& table_hash) {
  out << trial_header(trial, table_hash).dump() << '\n';
  for (const auto& e : trial.keystrokes) out << event_json(e).dump() << '\n';
}

/// Reads a single-trial log written by write_trial_log.
inline TrialLog read_trial_log(std::istream& in) {
  TrialLog log;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (!have_header) {
      if (j.value("kind", "") != "trial") throw Error("keystroke log must start with a trial header");
      log.presented = j.at("presented").get<std::string>();
      log.table_hash = j.at("table").get<std::string>();
      log.count_enter = j.value("count_enter", false);
      have_header = true;
      continue;
    }
    log.events.push_back(parse_event(j));
  }
  if (!have_header) throw Error("empty keystroke log");
  return log;
}

/// Replays a log and checks every recorded outcome against the replayed one.
inline Trial replay_log(std::shared_ptr<const Keyboard> keyboard, const TrialLog& log) {
  if (log.table_hash != keyboard->hash())
    throw Error("keystroke log was recorded with table " + log.table_hash + ", not " +
                keyboard->hash());
  const auto presses = log.presses();
  Trial trial = replay(std::move(keyboard), log.presented, presses, log.count_enter);
  for (std::size_t i = 0; i < log.events.size(); ++i)
    if (outcome_tag(trial.keystrokes[i]) != log.events[i].outcome)
      throw Error("replay diverges from log at event " + std::to_string(i));
  return trial;
}

}  // namespace h4
