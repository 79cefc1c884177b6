#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "h4/engine.hpp"
#include "h4/experiment/random.hpp"
#include "h4/experiment/session_store.hpp"
#include "h4/metrics.hpp"

namespace h4::gateway {

using Frame = nlohmann::ordered_json;

struct ServiceConfig {
  std::shared_ptr<const Keyboard> keyboard;
  std::vector<std::string> phrases;
  std::uint64_t seed = 0;
  bool count_enter = false;
  int phrases_per_block = 3;
  std::shared_ptr<experiment::SessionStore> store;  // optional
};

inline Frame boxes_json(const std::array<std::vector<Symbol>, 4>& boxes) {
  Frame j = Frame::object();
  for (Direction d : kDirections) {
    Frame list = Frame::array();
    for (const auto& s : boxes[index_of(d)]) list.push_back(s.token());
    j[std::string(1, to_char(d))] = std::move(list);
  }
  return j;
}

/// Drops the fields that depend on wall-clock timing so transcripts can be
/// compared byte for byte: "t" everywhere, "wpm" and "duration_s" in metrics.
inline Frame canonical(Frame frame) {
  frame.erase("t");
  if (frame.contains("metrics")) {
    frame["metrics"].erase("wpm");
    frame["metrics"].erase("duration_s");
  }
  return frame;
}

/// One client session of the live service. Frames are processed strictly in
/// order; each call returns the frames to send back, in order.
///
/// Client frames:
///   {"kind":"hello","participant":"p01","device":"mouse"}   start or re-sync a trial
///   {"kind":"keystroke","id":n,"d":"L","t":ms}
///   {"kind":"metrics"}                                      live metrics of the current trial
/// Server frames carry a per-session id that strictly increases:
///   layout, state, emitted, rejected, trial-done, metrics, error
/// A keystroke gets exactly one state frame, preceded by emitted or rejected
/// when applicable and followed by trial-done when [enter] finished the trial.
/// The next trial starts on the following hello.
class Session {
 public:
  explicit Session(ServiceConfig config) : config_(std::move(config)) {
    if (!config_.keyboard) throw Error("session needs a code table");
    for (const auto& p : config_.phrases)
      if (!config_.keyboard->can_type(p)) throw Error("phrase \"" + p + "\" is not encodable by the code table");
    if (config_.phrases.empty()) throw Error("session needs at least one phrase");
  }

  std::vector<Frame> handle(const nlohmann::json& frame) {
    std::vector<Frame> out;
    if (!frame.is_object() || !frame.contains("kind") || !frame.at("kind").is_string()) {
      out.push_back(error("frame must be an object with a string kind"));
      return out;
    }
    const std::string kind = frame.at("kind").get<std::string>();
    try {
      if (kind == "hello") {
        hello(frame, out);
      } else if (kind == "keystroke") {
        keystroke(frame, out);
      } else if (kind == "metrics") {
        if (!engine_) throw Error("no active trial");
        Frame m = next("metrics");
        m["metrics"] = to_json(compute_metrics(engine_->trial(), config_.keyboard->table()));
        out.push_back(std::move(m));
      } else {
        out.push_back(error("unknown frame kind \"" + kind + "\""));
      }
    } catch (const Error& e) {
      out.push_back(error(e.what()));
    } catch (const nlohmann::json::exception& e) {
      out.push_back(error(std::string("bad frame: ") + e.what()));
    }
    return out;
  }

  std::vector<std::string> handle_text(std::string_view text) {
    std::vector<std::string> out;
    nlohmann::json frame;
    try {
      frame = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
      out.push_back(error("frame is not valid JSON").dump());
      return out;
    }
    for (const auto& f : handle(frame)) out.push_back(f.dump());
    return out;
  }

  const Engine* engine() const { return engine_ ? &*engine_ : nullptr; }

 private:
  Frame next(const char* kind) {
    Frame f;
    f["kind"] = kind;
    f["id"] = ++last_id_;
    return f;
  }

  Frame error(const std::string& message) {
    Frame f = next("error");
    f["message"] = message;
    return f;
  }

  Frame state_frame(const char* kind) {
    Frame f = next(kind);
    if (std::string_view(kind) == "layout") {
      f["presented"] = engine_->trial().presented;
      f["trial"] = trial_count_;
    }
    f["boxes"] = boxes_json(engine_->boxes());
    f["transcribed"] = engine_->trial().transcribed;
    f["depth"] = engine_->depth();
    return f;
  }

  void hello(const nlohmann::json& frame, std::vector<Frame>& out) {
    if (!engine_) {
      participant_ = frame.value("participant", std::string("anonymous"));
      device_ = frame.value("device", std::string("mouse"));
      shuffle_phrases();
    }
    if (!engine_ || engine_->trial().finished) start_trial();
    out.push_back(state_frame("layout"));
  }

  void keystroke(const nlohmann::json& frame, std::vector<Frame>& out) {
    if (!engine_) throw Error("no active trial; send hello first");
    if (engine_->trial().finished) throw Error("trial finished; send hello for the next trial");
    const auto& d = frame.at("d").get_ref<const std::string&>();
    const auto dir = d.size() == 1 ? direction_from_char(d[0]) : std::nullopt;
    if (!dir) throw Error("keystroke direction must be one of L, R, U, D");
    if (!frame.contains("t") || !frame.at("t").is_number_integer())
      throw Error("keystroke needs an integer timestamp t");

    const PressResult r = engine_->press(*dir, frame.at("t").get<std::int64_t>());
    if (r.outcome == Outcome::emit) {
      Frame e = next("emitted");
      e["symbol"] = r.symbol->token();
      e["wrong"] = r.wrong;
      out.push_back(std::move(e));
    } else if (r.outcome == Outcome::rejected) {
      Frame e = next("rejected");
      e["d"] = d;
      out.push_back(std::move(e));
    }
    out.push_back(state_frame("state"));
    if (engine_->trial().finished) {
      const Trial& trial = engine_->trial();
      const TrialMetrics m = compute_metrics(trial, config_.keyboard->table());
      if (config_.store) {
        const int index = trial_count_ - 1;
        config_.store->append({{participant_, device_, index / config_.phrases_per_block + 1,
                                index % config_.phrases_per_block},
                               trial,
                               config_.keyboard->hash(),
                               m});
      }
      Frame done = next("trial-done");
      done["metrics"] = to_json(m);
      out.push_back(std::move(done));
    }
  }

  void shuffle_phrases() {
    // Seeded per participant so a replayed transcript sees the same phrases.
    std::uint64_t h = config_.seed ^ 0xcbf29ce484222325ULL;
    for (unsigned char c : participant_) h = (h ^ c) * 0x100000001b3ULL;
    experiment::Rng rng(h);
    order_.resize(config_.phrases.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[rng.below(i)]);
  }

  void start_trial() {
    const std::string& phrase = config_.phrases[order_[trial_count_ % order_.size()]];
    engine_.emplace(config_.keyboard, phrase, config_.count_enter);
    ++trial_count_;
  }

  ServiceConfig config_;
  std::optional<Engine> engine_;
  std::string participant_;
  std::string device_;
  std::vector<std::size_t> order_;
  int trial_count_ = 0;
  std::int64_t last_id_ = 0;
};

}  // namespace h4::gateway
