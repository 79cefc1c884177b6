#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h4/experiment/session_store.hpp"

namespace h4::experiment {

enum class GroupBy { device, block, device_block };

struct Stat {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (n - 1); 0 when n == 1
};

/// Sample mean and SD. Throws on an empty sample.
inline Stat describe(const std::vector<double>& xs) {
  if (xs.empty()) throw Error("cannot summarize an empty group");
  Stat s;
  s.n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

enum class Metric { wpm, kspc, efficiency, error_rate };

inline constexpr Metric kMetrics[] = {Metric::wpm, Metric::kspc, Metric::efficiency, Metric::error_rate};

inline std::string metric_name(Metric m) {
  switch (m) {
    case Metric::wpm: return "wpm";
    case Metric::kspc: return "kspc";
    case Metric::efficiency: return "efficiency";
    case Metric::error_rate: return "error_rate";
  }
  return {};
}

inline std::optional<double> metric_value(const TrialMetrics& m, Metric which) {
  switch (which) {
    case Metric::wpm: return m.wpm;
    case Metric::kspc: return m.kspc_empirical;
    case Metric::efficiency: return m.efficiency;
    case Metric::error_rate: return m.uncorrected_error_rate;
  }
  return std::nullopt;
}

struct GroupSummary {
  std::string device;  // empty when grouped by block only
  int block = 0;       // 0 when grouped by device only
  std::map<Metric, Stat> stats;  // metrics undefined for every trial in the group are absent
};

inline std::vector<GroupSummary> summarize(const std::vector<TrialRecord>& records, GroupBy by) {
  if (records.empty()) throw Error("cannot summarize an empty store");
  std::map<std::pair<std::string, int>, std::vector<const TrialRecord*>> groups;
  std::vector<std::pair<std::string, int>> order;  // devices in first-seen order
  for (const auto& r : records) {
    std::pair<std::string, int> key{by == GroupBy::block ? std::string() : r.key.device,
                                    by == GroupBy::device ? 0 : r.key.block};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second < b.second;
  });
  if (by != GroupBy::block) {
    // Keep first-seen device order as the primary key.
    std::vector<std::string> devices;
    for (const auto& r : records)
      if (std::find(devices.begin(), devices.end(), r.key.device) == devices.end())
        devices.push_back(r.key.device);
    std::stable_sort(order.begin(), order.end(), [&devices](const auto& a, const auto& b) {
      const auto ia = std::find(devices.begin(), devices.end(), a.first) - devices.begin();
      const auto ib = std::find(devices.begin(), devices.end(), b.first) - devices.begin();
      return ia != ib ? ia < ib : a.second < b.second;
    });
  }

  std::vector<GroupSummary> out;
  for (const auto& key : order) {
    GroupSummary g;
    g.device = key.first;
    g.block = key.second;
    for (Metric m : kMetrics) {
      std::vector<double> xs;
      for (const TrialRecord* r : groups[key])
        if (auto v = metric_value(r->metrics, m)) xs.push_back(*v);
      if (!xs.empty()) g.stats[m] = describe(xs);
    }
    out.push_back(std::move(g));
  }
  return out;
}

/// Per-participant cell means for an ANOVA: rows are participants (sorted),
/// columns are the conditions produced by `condition` in `columns` order.
/// Throws if any participant lacks a condition.
inline std::vector<std::vector<double>> condition_matrix(
    const std::vector<TrialRecord>& records, Metric metric,
    const std::function<std::string(const TrialRecord&)>& condition,
    const std::vector<std::string>& columns) {
  std::map<std::string, std::map<std::string, std::vector<double>>> cells;
  for (const auto& r : records)
    if (auto v = metric_value(r.metrics, metric)) cells[r.key.participant][condition(r)].push_back(*v);
  std::vector<std::vector<double>> matrix;
  for (const auto& [participant, by_condition] : cells) {
    std::vector<double> row;
    for (const auto& c : columns) {
      auto it = by_condition.find(c);
      if (it == by_condition.end())
        throw Error("participant " + participant + " has no " + metric_name(metric) +
                    " data for condition " + c);
      row.push_back(describe(it->second).mean);
    }
    matrix.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace h4::experiment
