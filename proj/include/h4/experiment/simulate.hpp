#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "h4/engine.hpp"
#include "h4/experiment/random.hpp"
#include "h4/experiment/schedule.hpp"
#include "h4/experiment/session_store.hpp"

namespace h4::experiment {

enum class TypistKind { perfect, noisy };

/// Synthetic participant. Timing is a per-device key interval that shrinks
/// with practice as block^-practice_exponent, with uniform jitter. The noisy
/// typist, at the start of each selection, picks a wrong character with
/// probability error_probability and then corrects it with [bksp].
struct TypistModel {
  TypistKind kind = TypistKind::perfect;
  double error_probability = 0.05;
  double jitter = 0.2;
  double practice_exponent = 0.1;
  double default_interval_ms = 800.0;
  std::map<std::string, double> interval_ms{{"mouse", 700.0}, {"gamepad", 750.0}, {"eye", 1150.0}};
};

inline std::int64_t next_interval(const TypistModel& model, const std::string& device, int block,
                                  Rng& rng) {
  auto it = model.interval_ms.find(device);
  const double base = it == model.interval_ms.end() ? model.default_interval_ms : it->second;
  const double practiced = base * std::pow(static_cast<double>(block), -model.practice_exponent);
  const double jittered = practiced * (1.0 + model.jitter * (2.0 * rng.uniform() - 1.0));
  return std::max<std::int64_t>(1, std::llround(jittered));
}

/// Types `presented` to completion (plus [enter] when the table has one).
inline Trial simulate_trial(const std::shared_ptr<const Keyboard>& keyboard, const std::string& presented,
                            const TypistModel& model, const std::string& device, int block,
                            bool count_enter, Rng& rng) {
  Engine engine(keyboard, presented, count_enter);
  const CodeTable& table = keyboard->table();

  std::vector<Symbol> typeable;
  for (const auto& [sym, code] : table.codes())
    if (!sym.is_command()) typeable.push_back(sym);

  std::int64_t t = 0;
  auto type_code = [&](const Code& code) {
    for (Direction d : code) {
      t += next_interval(model, device, block, rng);
      engine.press(d, t);
    }
  };

  // Each loop iteration completes one selection; the bound guards against a
  // table on which the phrase cannot be corrected (no [bksp]).
  const std::size_t max_selections = 8 * presented.size() + 16;
  for (std::size_t step = 0; step < max_selections; ++step) {
    const auto target = engine.target_symbol();
    if (!target) break;
    if (model.kind == TypistKind::noisy && *target != backspace_symbol() && typeable.size() > 1 &&
        rng.uniform() < model.error_probability) {
      std::vector<Symbol> wrong;
      for (const auto& sym : typeable)
        if (sym != *target) wrong.push_back(sym);
      const Symbol slip = wrong[rng.below(wrong.size())];
      type_code(table.code(slip));
      continue;
    }
    const Code* code = table.find(*target);
    if (!code) break;
    type_code(*code);
  }
  if (const Code* enter = table.find(enter_symbol()); enter && !engine.trial().finished)
    type_code(*enter);
  return engine.trial();
}

/// Runs every scheduled trial and appends it to the store.
inline void simulate_schedule(const Schedule& schedule, const std::shared_ptr<const Keyboard>& keyboard,
                              const TypistModel& model, bool count_enter, SessionStore& store) {
  Rng rng(schedule.seed ^ 0x9e3779b97f4a7c15ULL);
  for (const auto& s : schedule.trials) {
    Trial trial = simulate_trial(keyboard, s.phrase, model, s.device, s.block, count_enter, rng);
    TrialMetrics m = compute_metrics(trial, keyboard->table());
    store.append({{s.participant, s.device, s.block, s.phrase_index}, std::move(trial), keyboard->hash(), m});
  }
}

}  // namespace h4::experiment
