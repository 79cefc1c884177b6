#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "h4/error.hpp"
#include "h4/experiment/distributions.hpp"

namespace h4::experiment {

struct AnovaResult {
  double F = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p = 1.0;
  std::string effect;
  // Set when the error term is zero and F is reported by convention.
  bool degenerate = false;
};

/// One-way repeated-measures ANOVA over a participants × conditions matrix.
///
/// Partitions the total sum of squares into condition, subject and residual
/// (condition × subject) terms; F = MS_condition / MS_error with
/// df = (k - 1, (k - 1)(n - 1)). A zero error term yields F = +inf, p = 0
/// (or F = 0, p = 1 when the conditions do not differ either), flagged as
/// degenerate.
inline AnovaResult rm_anova(const std::vector<std::vector<double>>& values, std::string effect = {}) {
  const std::size_t n = values.size();
  if (n < 2) throw Error("repeated-measures ANOVA needs at least two participants");
  const std::size_t k = values.front().size();
  if (k < 2) throw Error("repeated-measures ANOVA needs at least two conditions");
  for (const auto& row : values) {
    if (row.size() != k) throw Error("repeated-measures ANOVA needs a complete matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw Error("repeated-measures ANOVA needs finite cell values");
  }

  double grand = 0.0;
  for (const auto& row : values)
    for (double v : row) grand += v;
  grand /= static_cast<double>(n * k);

  double ss_conditions = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (const auto& row : values) mean += row[c];
    mean /= static_cast<double>(n);
    ss_conditions += static_cast<double>(n) * (mean - grand) * (mean - grand);
  }

  double ss_error = 0.0;
  for (const auto& row : values) {
    double subject_mean = 0.0;
    for (double v : row) subject_mean += v;
    subject_mean /= static_cast<double>(k);
    for (std::size_t c = 0; c < k; ++c) {
      double cond_mean = 0.0;
      for (const auto& r : values) cond_mean += r[c];
      cond_mean /= static_cast<double>(n);
      const double resid = row[c] - subject_mean - cond_mean + grand;
      ss_error += resid * resid;
    }
  }

  AnovaResult r;
  r.effect = std::move(effect);
  r.df1 = static_cast<int>(k - 1);
  r.df2 = static_cast<int>((k - 1) * (n - 1));
  const double ms_conditions = ss_conditions / r.df1;
  const double ms_error = ss_error / r.df2;
  // Residuals below rounding noise of the data count as zero.
  const double scale = std::max(1.0, std::fabs(grand));
  if (ms_error <= 1e-24 * scale * scale) {
    r.degenerate = true;
    if (ms_conditions <= 1e-24 * scale * scale) {
      r.F = 0.0;
      r.p = 1.0;
    } else {
      r.F = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.F = ms_conditions / ms_error;
  r.p = f_distribution_upper_tail(r.F, r.df1, r.df2);
  return r;
}

}  // namespace h4::experiment
