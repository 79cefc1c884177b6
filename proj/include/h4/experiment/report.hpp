#pragma once

#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4/experiment/anova.hpp"
#include "h4/experiment/learning_curve.hpp"
#include "h4/experiment/summary.hpp"

namespace h4::experiment {

struct Report {
  std::string text;
  std::string csv;  // long format, one row per plotted value
};

inline constexpr int kProjectedBlocks = 5;

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string cell(const GroupSummary& g, Metric m) {
  auto it = g.stats.find(m);
  if (it == g.stats.end()) return "               -";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%7.3f (%6.3f)", it->second.mean, it->second.sd);
  return buf;
}

inline void summary_table(std::ostringstream& out, std::ostringstream& csv,
                          const std::vector<GroupSummary>& groups, const char* kind) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %5s %4s  %-17s %-17s %-17s %s\n", "device", "block", "n",
                "wpm", "kspc", "efficiency %", "error rate %");
  out << buf;
  for (const auto& g : groups) {
    std::size_t n = 0;
    for (const auto& [m, s] : g.stats) n = std::max(n, s.n);
    std::snprintf(buf, sizeof buf, "%-10s %5s %4zu  %-17s %-17s %-17s %s\n",
                  g.device.empty() ? "all" : g.device.c_str(),
                  g.block == 0 ? "all" : std::to_string(g.block).c_str(), n,
                  cell(g, Metric::wpm).c_str(), cell(g, Metric::kspc).c_str(),
                  cell(g, Metric::efficiency).c_str(), cell(g, Metric::error_rate).c_str());
    out << buf;
    for (const auto& [m, s] : g.stats)
      csv << kind << ',' << g.device << ',' << g.block << ',' << metric_name(m) << ",," << s.n << ','
          << fmt("%.6f", s.mean) << ',' << fmt("%.6f", s.sd) << ",,\n";
  }
}

inline std::vector<std::string> devices_of(const std::vector<TrialRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records)
    if (std::find(out.begin(), out.end(), r.key.device) == out.end()) out.push_back(r.key.device);
  return out;
}

inline std::vector<std::string> blocks_of(const std::vector<TrialRecord>& records) {
  std::set<int> blocks;
  for (const auto& r : records) blocks.insert(r.key.block);
  std::vector<std::string> out;
  for (int b : blocks) out.push_back(std::to_string(b));
  return out;
}

}  // namespace detail

/// Tables per device, per block and per device × block, repeated-measures
/// ANOVA for device and block effects, and learning-curve fits with
/// projections for the next five blocks. `reference` values, when given, are
/// printed alongside for comparison only.
inline Report make_report(const std::vector<TrialRecord>& records,
                          const std::optional<nlohmann::json>& reference = std::nullopt) {
  if (records.empty()) throw Error("cannot report on an empty session store");
  using detail::fmt;
  std::ostringstream out, csv;
  csv << "kind,device,block,metric,model,n,mean,sd,value,r_squared\n";

  const auto devices = detail::devices_of(records);
  const auto blocks = detail::blocks_of(records);
  std::set<std::string> participants;
  for (const auto& r : records) participants.insert(r.key.participant);

  out << "H4-Writer session report\n";
  out << "trials: " << records.size() << "  participants: " << participants.size() << "  devices:";
  for (const auto& d : devices) out << ' ' << d;
  out << "  blocks: " << blocks.size() << "\n\n";
  out << "Values are mean (sample SD) over trials.\n\n";

  out << "== By device ==\n";
  detail::summary_table(out, csv, summarize(records, GroupBy::device), "device");
  out << "\n== By block ==\n";
  detail::summary_table(out, csv, summarize(records, GroupBy::block), "block");
  out << "\n== By device x block ==\n";
  const auto cells = summarize(records, GroupBy::device_block);
  detail::summary_table(out, csv, cells, "device_block");

  out << "\n== Repeated-measures ANOVA (participant cell means) ==\n";
  for (Metric m : kMetrics) {
    auto line = [&](const char* effect, const std::vector<std::string>& columns,
                    const std::function<std::string(const TrialRecord&)>& condition) {
      out << metric_name(m) << " by " << effect << ": ";
      try {
        const auto r = rm_anova(condition_matrix(records, m, condition, columns), effect);
        out << "F(" << r.df1 << "," << r.df2 << ") = " << fmt("%.4f", r.F)
            << ", p = " << fmt("%.6g", r.p) << (r.degenerate ? "  [zero error variance]" : "") << '\n';
      } catch (const Error& e) {
        out << "n/a (" << e.what() << ")\n";
      }
    };
    line("device", devices, [](const TrialRecord& r) { return r.key.device; });
    line("block", blocks, [](const TrialRecord& r) { return std::to_string(r.key.block); });
  }

  out << "\n== Learning curves (fits on device x block means) ==\n";
  for (const auto& device : devices) {
    for (Metric m : {Metric::wpm, Metric::efficiency, Metric::kspc}) {
      std::vector<CurvePoint> points;
      for (const auto& c : cells)
        if (c.device == device)
          if (auto it = c.stats.find(m); it != c.stats.end())
            points.push_back({static_cast<double>(c.block), it->second.mean});
      for (FitModel model : {FitModel::power, FitModel::linear}) {
        out << device << ' ' << metric_name(m) << ' ' << to_string(model) << ": ";
        try {
          const auto fit = fit_learning_curve(points, model);
          const int last = static_cast<int>(points.back().block);
          out << (model == FitModel::power ? "y = " + fmt("%.4f", fit.intercept) + " * b^" + fmt("%.4f", fit.slope)
                                           : "y = " + fmt("%.4f", fit.intercept) + " + " + fmt("%.4f", fit.slope) + " * b")
              << "  R^2 = " << fmt("%.4f", fit.r_squared) << "  projected:";
          for (int b = last + 1; b <= last + kProjectedBlocks; ++b) {
            out << " b" << b << '=' << fmt("%.3f", fit.predict(b));
            csv << "projection," << device << ',' << b << ',' << metric_name(m) << ',' << to_string(model)
                << ",,,," << fmt("%.6f", fit.predict(b)) << ',' << fmt("%.6f", fit.r_squared) << '\n';
          }
          out << '\n';
        } catch (const Error& e) {
          out << "n/a (" << e.what() << ")\n";
        }
      }
    }
  }

  if (reference) {
    out << "\n== Reference human-study values (for comparison, not targets) ==\n";
    out << reference->dump(2) << '\n';
  }
  return {out.str(), csv.str()};
}

}  // namespace h4::experiment
