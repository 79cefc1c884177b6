#pragma once

#include <compare>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4/keystroke_log.hpp"
#include "h4/metrics.hpp"

namespace h4::experiment {

struct TrialKey {
  std::string participant;
  std::string device;
  int block = 0;
  int phrase_index = 0;

  friend auto operator<=>(const TrialKey&, const TrialKey&) = default;
};

struct TrialRecord {
  TrialKey key;
  Trial trial;
  std::string table_hash;
  TrialMetrics metrics;
};

// session.jsonl layout, per trial:
//   {"kind":"trial","participant":..,"device":..,"block":..,"phrase":..,
//    "presented":..,"table":..,"count_enter":..}
//   one {"d","t","o"} line per keystroke
//   {"kind":"metrics", <TrialMetrics fields>}
inline void write_record(std::ostream& out, const TrialRecord& r) {
  nlohmann::ordered_json h;
  h["kind"] = "trial";
  h["participant"] = r.key.participant;
  h["device"] = r.key.device;
  h["block"] = r.key.block;
  h["phrase"] = r.key.phrase_index;
  h["presented"] = r.trial.presented;
  h["table"] = r.table_hash;
  h["count_enter"] = r.trial.count_enter;
  out << h.dump() << '\n';
  for (const auto& e : r.trial.keystrokes) out << event_json(e).dump() << '\n';
  nlohmann::ordered_json m;
  m["kind"] = "metrics";
  m.update(to_json(r.metrics));
  out << m.dump() << '\n';
}

/// A stored trial before replay: header, raw log, and the metrics as stored.
struct StoredTrial {
  TrialKey key;
  TrialLog log;
  TrialMetrics metrics;
};

inline std::vector<StoredTrial> read_store(std::istream& in) {
  std::vector<StoredTrial> out;
  std::optional<StoredTrial> open;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const std::string kind = j.value("kind", "");
      if (kind == "trial") {
        if (open) throw Error("trial without metrics line");
        StoredTrial t;
        t.key = {j.at("participant").get<std::string>(), j.at("device").get<std::string>(),
                 j.at("block").get<int>(), j.at("phrase").get<int>()};
        t.log.presented = j.at("presented").get<std::string>();
        t.log.table_hash = j.at("table").get<std::string>();
        t.log.count_enter = j.value("count_enter", false);
        open = std::move(t);
      } else if (kind == "metrics") {
        if (!open) throw Error("metrics line without trial header");
        open->metrics = metrics_from_json(j);
        out.push_back(std::move(*open));
        open.reset();
      } else {
        if (!open) throw Error("keystroke outside a trial");
        open->log.events.push_back(parse_event(j));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("session store line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("session store line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (open) throw Error("session store ends inside a trial");
  return out;
}

/// Append-only trial store. Appends are serialized (single writer); when a
/// path is given every record is also appended to that JSON Lines file.
class SessionStore {
 public:
  SessionStore() = default;
  explicit SessionStore(const std::string& path) : file_(std::make_unique<std::ofstream>(path, std::ios::app)) {
    if (!*file_) throw Error("cannot open session store " + path);
  }

  void append(TrialRecord record) {
    std::lock_guard lock(mutex_);
    if (file_) {
      write_record(*file_, record);
      file_->flush();
    }
    records_.push_back(std::move(record));
  }

  std::vector<TrialRecord> snapshot() const {
    std::lock_guard lock(mutex_);
    return records_;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::vector<TrialRecord> records_;
  std::unique_ptr<std::ofstream> file_;
};

/// Replays every stored log and checks the recomputed metrics against the
/// stored ones bit for bit. Returns the replayed records.
inline std::vector<TrialRecord> replay_store(const std::vector<StoredTrial>& stored,
                                             const std::shared_ptr<const Keyboard>& keyboard) {
  std::vector<TrialRecord> out;
  out.reserve(stored.size());
  for (const auto& s : stored) {
    Trial trial = replay_log(keyboard, s.log);
    TrialMetrics m = compute_metrics(trial, keyboard->table());
    if (!(m == s.metrics))
      throw Error("stored metrics for " + s.key.participant + "/" + s.key.device + "/block " +
                  std::to_string(s.key.block) + "/phrase " + std::to_string(s.key.phrase_index) +
                  " do not match replay");
    out.push_back({s.key, std::move(trial), s.log.table_hash, m});
  }
  return out;
}

inline std::vector<TrialRecord> load_store(const std::string& path,
                                           const std::shared_ptr<const Keyboard>& keyboard) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open session store " + path);
  return replay_store(read_store(in), keyboard);
}

inline void write_metrics_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "participant,device,block,phrase," << kMetricsCsvHeader << '\n';
  for (const auto& r : records)
    out << r.key.participant << ',' << r.key.device << ',' << r.key.block << ','
        << r.key.phrase_index << ',' << metrics_csv_row(r.metrics) << '\n';
}

}  // namespace h4::experiment
