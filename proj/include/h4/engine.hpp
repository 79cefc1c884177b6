#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "h4/codec.hpp"

namespace h4 {

/// A code table together with its tree, shared by every trial typed on it.
class Keyboard {
 public:
  explicit Keyboard(CodeTable table) : table_(std::move(table)), tree_(table_), hash_(table_hash(table_)) {}

  const CodeTable& table() const { return table_; }
  const CodeTree& tree() const { return tree_; }
  const std::string& hash() const { return hash_; }

  bool can_type(std::string_view text) const {
    for (char c : text) {
      try {
        if (!table_.contains(Symbol::from_char(c))) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  }

 private:
  CodeTable table_;
  CodeTree tree_;
  std::string hash_;
};

enum class Outcome : std::uint8_t { descend, emit, rejected };

struct KeystrokeEvent {
  Direction direction;
  std::int64_t t_ms;
  Outcome outcome;
  std::optional<Symbol> symbol;  // set for emit

  friend bool operator==(const KeystrokeEvent&, const KeystrokeEvent&) = default;
};

struct PressResult {
  Outcome outcome;
  std::optional<Symbol> symbol;
  // The emission moved the transcription away from the presented phrase.
  bool wrong = false;
};

/// One presented phrase and everything the participant did to enter it.
struct Trial {
  std::string presented;
  std::string transcribed;
  std::vector<KeystrokeEvent> keystrokes;
  int corrected_count = 0;  // backspaces that actually deleted a character
  std::optional<std::int64_t> started_ms;
  std::optional<std::int64_t> last_emission_ms;  // last emission other than [enter]
  std::optional<std::int64_t> finished_ms;
  bool finished = false;
  bool count_enter = false;
  std::size_t enter_keystrokes = 0;

  /// Keystrokes charged to the trial: all logged presses, minus the [enter]
  /// code unless count_enter is set.
  std::size_t counted_keystrokes() const {
    return keystrokes.size() - (count_enter ? 0 : enter_keystrokes);
  }

  friend bool operator==(const Trial&, const Trial&) = default;
};

/// Selection state machine for one trial.
///
/// The cursor always rests on an internal node of the code tree. A press
/// towards an internal child descends; a press towards a leaf emits that
/// symbol and returns the cursor to the root; a press with no child is
/// rejected but still logged.
class Engine {
 public:
  Engine(std::shared_ptr<const Keyboard> keyboard, std::string presented, bool count_enter = false)
      : keyboard_(std::move(keyboard)) {
    if (presented.empty()) throw Error("presented phrase is empty");
    if (!keyboard_->can_type(presented))
      throw Error("presented phrase \"" + presented + "\" is not encodable by the code table");
    trial_.presented = std::move(presented);
    trial_.count_enter = count_enter;
  }

  PressResult press(Direction d, std::int64_t t_ms) {
    if (trial_.finished) throw Error("press after trial finished");
    if (!trial_.keystrokes.empty() && t_ms < trial_.keystrokes.back().t_ms)
      throw Error("keystroke timestamps must be non-decreasing");
    if (!trial_.started_ms) trial_.started_ms = t_ms;

    const CodeTree& tree = keyboard_->tree();
    const CodeTree::NodeId next = tree.child(cursor_, d);
    if (next == CodeTree::kNone) {
      trial_.keystrokes.push_back({d, t_ms, Outcome::rejected, std::nullopt});
      return {Outcome::rejected, std::nullopt, false};
    }
    if (!tree.is_leaf(next)) {
      cursor_ = next;
      path_.push_back(d);
      trial_.keystrokes.push_back({d, t_ms, Outcome::descend, std::nullopt});
      return {Outcome::descend, std::nullopt, false};
    }

    const Symbol& sym = tree.symbol(next);
    const auto target = target_symbol();
    const bool wrong = target ? *target != sym : sym != enter_symbol();
    trial_.keystrokes.push_back({d, t_ms, Outcome::emit, sym});
    apply(sym, t_ms);
    cursor_ = CodeTree::kRoot;
    path_.clear();
    return {Outcome::emit, sym, wrong};
  }

  /// The symbol a correct typist needs next: [bksp] while the transcription
  /// has a wrong or extra character, otherwise the next presented character.
  /// Empty once the transcription matches the phrase.
  std::optional<Symbol> target_symbol() const {
    const std::string& p = trial_.presented;
    const std::string& t = trial_.transcribed;
    std::size_t common = 0;
    while (common < p.size() && common < t.size() && p[common] == t[common]) ++common;
    if (common < t.size()) return backspace_symbol();
    if (t.size() < p.size()) return Symbol::from_char(p[t.size()]);
    return std::nullopt;
  }

  /// Next key on the shortest correct path. If the cursor is off the target's
  /// code, returns the key towards the nearest leaf so the stray selection
  /// completes and can be erased.
  std::optional<Direction> expected_next_key() const {
    const auto target = target_symbol();
    if (!target) return std::nullopt;
    const Code* code = keyboard_->table().find(*target);
    if (!code) return std::nullopt;
    if (path_.size() < code->size() && std::equal(path_.begin(), path_.end(), code->begin()))
      return (*code)[path_.size()];
    return nearest_leaf_direction();
  }

  std::array<std::vector<Symbol>, 4> boxes() const { return keyboard_->tree().partition(cursor_); }
  std::size_t depth() const { return path_.size(); }
  const Code& path() const { return path_; }
  CodeTree::NodeId cursor() const { return cursor_; }
  const Trial& trial() const { return trial_; }
  const Keyboard& keyboard() const { return *keyboard_; }

 private:
  void apply(const Symbol& sym, std::int64_t t_ms) {
    if (sym == enter_symbol()) {
      trial_.finished = true;
      trial_.finished_ms = t_ms;
      trial_.enter_keystrokes = keyboard_->table().code(sym).size();
      return;
    }
    trial_.last_emission_ms = t_ms;
    if (sym == backspace_symbol()) {
      if (!trial_.transcribed.empty()) {
        trial_.transcribed.pop_back();
        ++trial_.corrected_count;
      }
      return;
    }
    if (auto c = sym.text_char()) trial_.transcribed.push_back(*c);
  }

  std::optional<Direction> nearest_leaf_direction() const {
    const CodeTree& tree = keyboard_->tree();
    std::optional<Direction> best;
    std::size_t best_depth = SIZE_MAX;
    for (Direction d : kDirections) {
      const CodeTree::NodeId c = tree.child(cursor_, d);
      if (c == CodeTree::kNone) continue;
      const std::size_t depth = leaf_depth(c);
      if (depth < best_depth) {
        best_depth = depth;
        best = d;
      }
    }
    return best;
  }

  std::size_t leaf_depth(CodeTree::NodeId node) const {
    const CodeTree& tree = keyboard_->tree();
    if (tree.is_leaf(node)) return 0;
    std::size_t best = SIZE_MAX;
    for (Direction d : kDirections)
      if (auto c = tree.child(node, d); c != CodeTree::kNone) best = std::min(best, leaf_depth(c));
    return best == SIZE_MAX ? best : best + 1;
  }

  std::shared_ptr<const Keyboard> keyboard_;
  Trial trial_;
  CodeTree::NodeId cursor_ = CodeTree::kRoot;
  Code path_;
};

struct LoggedPress {
  Direction direction;
  std::int64_t t_ms;
};

/// Re-derives a trial from its keystroke log.
inline Trial replay(std::shared_ptr<const Keyboard> keyboard, std::string presented,
                    std::span<const LoggedPress> presses, bool count_enter = false) {
  for (std::size_t i = 1; i < presses.size(); ++i)
    if (presses[i].t_ms < presses[i - 1].t_ms)
      throw Error("keystroke log out of order at event " + std::to_string(i));
  Engine engine(std::move(keyboard), std::move(presented), count_enter);
  for (const auto& p : presses) engine.press(p.direction, p.t_ms);
  return engine.trial();
}

inline std::vector<LoggedPress> presses_of(const Trial& trial) {
  std::vector<LoggedPress> out;
  out.reserve(trial.keystrokes.size());
  for (const auto& k : trial.keystrokes) out.push_back({k.direction, k.t_ms});
  return out;
}

}  // namespace h4
