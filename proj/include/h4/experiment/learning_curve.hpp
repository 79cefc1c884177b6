#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "h4/error.hpp"

namespace h4::experiment {

enum class FitModel { linear, power };

inline std::string to_string(FitModel m) { return m == FitModel::linear ? "linear" : "power"; }

struct CurvePoint {
  double block;
  double value;
};

/// Least-squares trend line. Linear: value = intercept + slope·block.
/// Power: value = intercept·block^slope, fitted as a line in log-log space.
struct FitResult {
  FitModel model = FitModel::power;
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;  // in the fitting space

  double predict(double block) const {
    return model == FitModel::linear ? intercept + slope * block : intercept * std::pow(block, slope);
  }
};

inline FitResult fit_learning_curve(const std::vector<CurvePoint>& points, FitModel model) {
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.block);
  if (distinct.size() < 2) throw Error("learning curve needs at least two distinct blocks");

  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& p : points) {
    if (model == FitModel::power) {
      if (!(p.block > 0.0) || !(p.value > 0.0))
        throw Error("power-law fit needs positive blocks and values");
      xy.emplace_back(std::log(p.block), std::log(p.value));
    } else {
      xy.emplace_back(p.block, p.value);
    }
  }

  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss_res = 0.0;
  for (const auto& [x, y] : xy) {
    const double e = y - (intercept + slope * x);
    ss_res += e * e;
  }

  FitResult r;
  r.model = model;
  r.slope = slope;
  r.intercept = model == FitModel::power ? std::exp(intercept) : intercept;
  // A constant series is fitted exactly by a flat line.
  r.r_squared = ss_res == 0.0 ? 1.0 : (syy == 0.0 ? 0.0 : 1.0 - ss_res / syy);
  return r;
}

}  // namespace h4::experiment
