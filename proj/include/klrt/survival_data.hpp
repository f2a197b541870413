#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "klrt/errors.hpp"

namespace klrt {

// One right-censored observation: observed time, whether the event (death)
// was observed, and the group membership (0 or 1).
struct Observation {
  double time = 0.0;
  bool event = false;
  int group = 0;
};

// Validated dataset in canonical order: nondecreasing time; ties broken by
// events before censorings, then group 0 before group 1, then input order.
// Canonical order makes downstream sums reproducible; risk sets use the
// >=-time definition so tied observations see identical risk counts either
// way.
class SurvivalDataset {
 public:
  static SurvivalDataset validate_and_sort(std::vector<Observation> raw) {
    if (raw.empty()) throw Error("empty_dataset", "no observations");
    int n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const Observation& o = raw[i];
      if (!(o.time > 0.0) || !std::isfinite(o.time))
        throw Error("non_positive_time",
                    "observation " + std::to_string(i) + ": time must be a positive real");
      if (o.group == 0)
        ++n0;
      else if (o.group == 1)
        ++n1;
      else
        throw Error("bad_group_label",
                    "observation " + std::to_string(i) + ": group must be 0 or 1");
    }
    if (n0 == 0 || n1 == 0)
      throw Error("single_group", "both groups must contain at least one observation");

    std::stable_sort(raw.begin(), raw.end(), [](const Observation& a, const Observation& b) {
      if (a.time != b.time) return a.time < b.time;
      if (a.event != b.event) return a.event;  // events first
      return a.group < b.group;
    });

    SurvivalDataset ds;
    ds.obs_ = std::move(raw);
    ds.n0_ = n0;
    ds.n1_ = n1;
    return ds;
  }

  const std::vector<Observation>& observations() const { return obs_; }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }

  int n() const { return static_cast<int>(obs_.size()); }
  int n0() const { return n0_; }
  int n1() const { return n1_; }

 private:
  SurvivalDataset() = default;

  std::vector<Observation> obs_;
  int n0_ = 0;
  int n1_ = 0;
};

}  // namespace klrt
