#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately naive: per-rule dense-grid Mamdani aggregation with a
// separate membership-function transcription, no caching, no grouping.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "gridfuzz/fis.hpp"

namespace oracle {

inline double mf_value(const gridfuzz::MembershipFunction& mf, double x) {
  using gridfuzz::MfKind;
  const double a = mf.params[0];
  const double b = mf.params[1];
  const double c = mf.params[2];
  double d = 0.0;
  switch (mf.kind) {
    case MfKind::Triangular:
      if (x == b) return 1.0;
      if (x > a && x < b) d = (x - a) / (b - a);
      if (x > b && x < c) d = (c - x) / (c - b);
      break;
    case MfKind::LeftShoulder:
      if (x <= a) return 1.0;
      if (x > a && x < b) d = (b - x) / (b - a);
      break;
    case MfKind::RightShoulder:
      if (x >= b) return 1.0;
      if (x > a && x < b) d = (x - a) / (b - a);
      break;
  }
  return d;
}

// Dense-grid Mamdani + MoM; nullopt when no active rule fires.
inline std::optional<double> infer(const gridfuzz::Fis& fis, const std::array<double, 3>& in,
                                   int grid_points) {
  std::vector<double> firing;
  std::vector<int> consequent;
  for (const auto& rule : fis.rules) {
    if (!gridfuzz::rule_active(fis, rule)) continue;
    double strength = 1.0;
    for (int v = 0; v < 3; ++v) {
      const double d = mf_value(
          fis.input_mfs[static_cast<std::size_t>(v)][static_cast<std::size_t>(rule.antecedents[static_cast<std::size_t>(v)])],
          in[static_cast<std::size_t>(v)]);
      if (fis.conjunction == gridfuzz::Norm::Min)
        strength = std::min(strength, d);
      else
        strength *= d;
    }
    strength *= rule.weight;
    firing.push_back(strength);
    consequent.push_back(rule.consequent);
  }
  if (firing.empty()) return std::nullopt;

  const double step = 1.0 / static_cast<double>(grid_points - 1);
  double peak = 0.0;
  double sum = 0.0;
  long count = 0;
  for (int k = 0; k < grid_points; ++k) {
    const double x = static_cast<double>(k) * step;
    double agg = 0.0;
    for (std::size_t r = 0; r < firing.size(); ++r) {
      const double m = mf_value(fis.output_mfs[static_cast<std::size_t>(consequent[r])], x);
      const double v =
          fis.implication == gridfuzz::Norm::Min ? std::min(firing[r], m) : firing[r] * m;
      if (v > agg) agg = v;
    }
    if (agg > peak) {
      peak = agg;
      sum = x;
      count = 1;
    } else if (agg == peak && peak > 0.0) {
      sum += x;
      ++count;
    }
  }
  if (peak <= 0.0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace oracle
