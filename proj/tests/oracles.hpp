#pragma once

// Independent reference computations used to check the library. None of
// these share code paths with the implementation they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

/// Minimum Σ p_i·l_i over every 4-ary prefix code, by exhaustive enumeration
/// of codeword-length vectors. By Kraft-McMillan a prefix code with lengths
/// l_i exists iff Σ 4^-l_i <= 1; lengths beyond the symbol count are never
/// needed.
inline double min_prefix_code_length(const std::vector<double>& weights) {
  const std::size_t m = weights.size();
  double total = 0.0;
  for (double w : weights) total += w;
  const int max_len = static_cast<int>(std::max<std::size_t>(m, 1));
  std::int64_t budget = 1;
  for (int i = 0; i < max_len; ++i) budget *= 4;

  std::vector<int> len(m, 1);
  double best = INFINITY;
  for (;;) {
    std::int64_t kraft = 0;
    for (int l : len) {
      std::int64_t unit = 1;
      for (int i = l; i < max_len; ++i) unit *= 4;
      kraft += unit;
    }
    if (kraft <= budget) {
      double cost = 0.0;
      for (std::size_t i = 0; i < m; ++i) cost += weights[i] / total * len[i];
      best = std::min(best, cost);
    }
    std::size_t i = 0;
    while (i < m && ++len[i] > max_len) len[i++] = 1;
    if (i == m) break;
  }
  return best;
}

/// Edit distance by naive exponential recursion.
inline std::size_t naive_msd(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::string ta = a.substr(1), tb = b.substr(1);
  const std::size_t sub = naive_msd(ta, tb) + (a[0] == b[0] ? 0 : 1);
  return std::min({sub, naive_msd(ta, b) + 1, naive_msd(a, tb) + 1});
}

struct AnovaSums {
  double ss_total, ss_subjects, ss_conditions, ss_error;
  int df1, df2;
  double F;
};

/// Textbook sums of squares: SS_error = SS_total - SS_subjects - SS_conditions.
inline AnovaSums rm_anova_sums(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size(), k = m[0].size();
  double grand = 0.0;
  for (const auto& r : m)
    for (double v : r) grand += v;
  grand /= static_cast<double>(n * k);
  AnovaSums s{};
  for (const auto& r : m)
    for (double v : r) s.ss_total += (v - grand) * (v - grand);
  for (const auto& r : m) {
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(k);
    s.ss_subjects += static_cast<double>(k) * (mean - grand) * (mean - grand);
  }
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (const auto& r : m) mean += r[c];
    mean /= static_cast<double>(n);
    s.ss_conditions += static_cast<double>(n) * (mean - grand) * (mean - grand);
  }
  s.ss_error = s.ss_total - s.ss_subjects - s.ss_conditions;
  s.df1 = static_cast<int>(k - 1);
  s.df2 = static_cast<int>((k - 1) * (n - 1));
  s.F = (s.ss_conditions / s.df1) / (s.ss_error / s.df2);
  return s;
}

struct LineFit {
  double a, b, r_squared;
};

/// Ordinary least squares from the raw normal equations, solved by Cramer's rule.
inline LineFit normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sxx += x[i] * x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LineFit f{};
  f.a = (sy * sxx - sx * sxy) / det;
  f.b = (n * sxy - sx * sy) / det;
  double ybar = sy / n, ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.a - f.b * x[i];
    ss_res += e * e;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r_squared = 1.0 - ss_res / ss_tot;
  return f;
}

}  // namespace oracle
