#pragma once

#include <algorithm>
#include <vector>

#include "klrt/survival_data.hpp"

namespace klrt {

enum class Scope { pooled, group0, group1 };

// Right-continuous piecewise-constant curve: value `initial` on [0, t_1),
// then values[k] on [t_k, t_{k+1}).
struct StepCurve {
  double initial = 0.0;
  std::vector<double> times;   // strictly increasing jump times
  std::vector<double> values;  // value at and after each jump

  double at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return initial;
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
  }
};

namespace detail {

inline bool in_scope(const Observation& o, Scope s) {
  switch (s) {
    case Scope::pooled: return true;
    case Scope::group0: return o.group == 0;
    case Scope::group1: return o.group == 1;
  }
  return false;
}

// Distinct-time blocks of the in-scope observations: (time, deaths,
// censorings, at-risk count).
struct Block {
  double time;
  int deaths;
  int censored;
  int at_risk;
};

inline std::vector<Block> scope_blocks(const SurvivalDataset& ds, Scope s) {
  std::vector<Block> blocks;
  int remaining = 0;
  for (const Observation& o : ds.observations())
    if (in_scope(o, s)) ++remaining;
  for (const Observation& o : ds.observations()) {
    if (!in_scope(o, s)) continue;
    if (blocks.empty() || blocks.back().time != o.time)
      blocks.push_back({o.time, 0, 0, remaining});
    // canonical order is nondecreasing in time, so blocks arrive in order
    (o.event ? blocks.back().deaths : blocks.back().censored)++;
    --remaining;
  }
  return blocks;
}

}  // namespace detail

// Kaplan-Meier survival estimator. Jumps only at event times; tied events
// fold into a single factor (1 - d/Y). While no censoring has occurred the
// running product telescopes to (survivors)/(n), computed as a single exact
// division.
inline StepCurve kaplan_meier(const SurvivalDataset& ds, Scope scope = Scope::pooled) {
  StepCurve curve;
  curve.initial = 1.0;
  const std::vector<detail::Block> blocks = detail::scope_blocks(ds, scope);
  if (blocks.empty()) return curve;

  const int scope_n = blocks.front().at_risk;
  double survival = 1.0;
  bool censoring_seen = false;
  int deaths_so_far = 0;
  for (const detail::Block& b : blocks) {
    if (b.deaths > 0) {
      deaths_so_far += b.deaths;
      if (!censoring_seen)
        survival = static_cast<double>(scope_n - deaths_so_far) / scope_n;
      else
        survival *= 1.0 - static_cast<double>(b.deaths) / b.at_risk;
      curve.times.push_back(b.time);
      curve.values.push_back(survival);
    }
    if (b.censored > 0) censoring_seen = true;
  }
  return curve;
}

// Nelson-Aalen cumulative-hazard estimator; jump at t is d(t)/Y(t).
inline StepCurve nelson_aalen(const SurvivalDataset& ds, Scope scope = Scope::pooled) {
  StepCurve curve;
  curve.initial = 0.0;
  double cumulative = 0.0;
  for (const detail::Block& b : detail::scope_blocks(ds, scope)) {
    if (b.deaths == 0) continue;
    cumulative += static_cast<double>(b.deaths) / b.at_risk;
    curve.times.push_back(b.time);
    curve.values.push_back(cumulative);
  }
  return curve;
}

}  // namespace klrt
