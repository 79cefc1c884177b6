#pragma once

#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4/error.hpp"
#include "h4/experiment/phrase_set.hpp"
#include "h4/experiment/random.hpp"

namespace h4::experiment {

/// Rows of an n×n Latin square built with the Williams construction
/// (first row 0, 1, n-1, 2, n-2, ...; each later row adds 1 mod n). For even
/// n it is also first-order carryover balanced.
inline std::vector<std::vector<std::size_t>> balanced_latin_square(std::size_t n) {
  std::vector<std::size_t> first{0};
  for (std::size_t k = 1, lo = 1, hi = n - 1; k < n; ++k)
    first.push_back(k % 2 == 1 ? lo++ : hi--);
  std::vector<std::vector<std::size_t>> rows(n, std::vector<std::size_t>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) rows[r][c] = (first[c] + r) % n;
  return rows;
}

struct ScheduledTrial {
  std::string participant;
  std::string device;
  int block;           // 1-based, within the device
  int phrase_index;    // 0-based position within the block
  std::size_t source;  // index into the phrase set
  std::string phrase;

  friend bool operator==(const ScheduledTrial&, const ScheduledTrial&) = default;
};

struct Schedule {
  std::uint64_t seed = 0;
  std::vector<std::string> devices;
  int blocks = 0;
  int phrases_per_block = 0;
  std::vector<std::string> participants;
  std::vector<std::vector<std::string>> device_orders;  // per participant
  std::vector<ScheduledTrial> trials;  // in presentation order

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

inline std::string participant_id(std::size_t i) {
  std::string n = std::to_string(i + 1);
  return "p" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

/// Counterbalanced devices × blocks × phrases plan. Participant p follows row
/// p mod |devices| of the Latin square; phrases are drawn without replacement
/// across all blocks of one participant on one device.
inline Schedule make_schedule(std::size_t participants, const std::vector<std::string>& devices,
                              int blocks, int phrases_per_block, const PhraseSet& phrases,
                              std::uint64_t seed) {
  if (devices.empty()) throw Error("schedule needs at least one device");
  if (participants == 0 || participants % devices.size() != 0)
    throw Error("participant count " + std::to_string(participants) +
                " must be a positive multiple of the device count " +
                std::to_string(devices.size()) + " so every device order is used equally");
  if (blocks < 1 || phrases_per_block < 1) throw Error("blocks and phrases per block must be >= 1");
  if (static_cast<std::size_t>(blocks) * static_cast<std::size_t>(phrases_per_block) >
      phrases.phrases.size())
    throw Error("phrase set has " + std::to_string(phrases.phrases.size()) +
                " phrases, fewer than blocks x phrases per block");

  Schedule s;
  s.seed = seed;
  s.devices = devices;
  s.blocks = blocks;
  s.phrases_per_block = phrases_per_block;
  const auto square = balanced_latin_square(devices.size());
  Rng rng(seed);
  std::vector<std::size_t> pool(phrases.phrases.size());

  for (std::size_t p = 0; p < participants; ++p) {
    s.participants.push_back(participant_id(p));
    std::vector<std::string> order;
    for (std::size_t idx : square[p % devices.size()]) order.push_back(devices[idx]);
    for (const auto& device : order) {
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      // Partial Fisher-Yates: the first i slots are the draw.
      std::size_t i = 0;
      for (int b = 1; b <= blocks; ++b) {
        for (int k = 0; k < phrases_per_block; ++k, ++i) {
          const std::size_t j = i + rng.below(pool.size() - i);
          std::swap(pool[i], pool[j]);
          s.trials.push_back({s.participants.back(), device, b, k, pool[i],
                              phrases.phrases[pool[i]]});
        }
      }
    }
    s.device_orders.push_back(std::move(order));
  }
  return s;
}

inline nlohmann::ordered_json to_json(const Schedule& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["devices"] = s.devices;
  j["blocks"] = s.blocks;
  j["phrases_per_block"] = s.phrases_per_block;
  j["participants"] = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < s.participants.size(); ++p)
    j["participants"].push_back({{"id", s.participants[p]}, {"devices", s.device_orders[p]}});
  j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : s.trials) {
    nlohmann::ordered_json row;
    row["participant"] = t.participant;
    row["device"] = t.device;
    row["block"] = t.block;
    row["phrase_index"] = t.phrase_index;
    row["source"] = t.source;
    row["phrase"] = t.phrase;
    j["trials"].push_back(std::move(row));
  }
  return j;
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.devices = j.at("devices").get<std::vector<std::string>>();
  s.blocks = j.at("blocks").get<int>();
  s.phrases_per_block = j.at("phrases_per_block").get<int>();
  for (const auto& p : j.at("participants")) {
    s.participants.push_back(p.at("id").get<std::string>());
    s.device_orders.push_back(p.at("devices").get<std::vector<std::string>>());
  }
  for (const auto& t : j.at("trials"))
    s.trials.push_back({t.at("participant").get<std::string>(), t.at("device").get<std::string>(),
                        t.at("block").get<int>(), t.at("phrase_index").get<int>(),
                        t.at("source").get<std::size_t>(), t.at("phrase").get<std::string>()});
  return s;
}

inline Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schedule " + path);
  try {
    return schedule_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("schedule " + path + ": " + e.what());
  }
}

}  // namespace h4::experiment
