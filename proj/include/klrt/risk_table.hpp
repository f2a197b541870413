#pragma once

#include <vector>

#include "klrt/survival_data.hpp"

namespace klrt {

// Counting-process quantities evaluated at each observation, aligned with
// the dataset's canonical order:
//   y_at(i)   pooled number at risk Y(X_i) = #{j : X_j >= X_i}
//   y0/y1     per-group risk counts at X_i
//   y_own(i)  risk count of observation i's own group
//   l_at(i)   L(X_i) = Y0*Y1/Y, with 0/0 = 0
//   f_left(i) pooled Kaplan-Meier CDF left limit F(X_i-), using event times
//             strictly before X_i; tied observations share one value.
class RiskTable {
 public:
  static RiskTable build(const SurvivalDataset& ds) {
    const std::vector<Observation>& obs = ds.observations();
    const int n = ds.n();

    RiskTable rt;
    rt.y_.resize(n);
    rt.y0_.resize(n);
    rt.y1_.resize(n);
    rt.l_.resize(n);
    rt.fleft_.resize(n);
    rt.group_.resize(n);

    // Suffix risk counts per group; ties share the block-start suffix.
    std::vector<int> suffix0(n + 1, 0), suffix1(n + 1, 0);
    for (int i = n - 1; i >= 0; --i) {
      suffix0[i] = suffix0[i + 1] + (obs[i].group == 0 ? 1 : 0);
      suffix1[i] = suffix1[i + 1] + (obs[i].group == 1 ? 1 : 0);
    }

    int block_start = 0;
    double survival = 1.0;       // pooled Kaplan-Meier just before the current block
    bool censoring_seen = false; // while false the product telescopes exactly
    int deaths_so_far = 0;
    double fleft_prev = 0.0;

    for (int i = 0; i < n; ++i) {
      if (i > 0 && obs[i].time != obs[block_start].time) {
        // close the previous block: fold its events into the pooled KM
        int d = 0, c = 0;
        for (int j = block_start; j < i; ++j) (obs[j].event ? d : c)++;
        int y_block = n - block_start;
        if (d > 0) {
          deaths_so_far += d;
          if (!censoring_seen)
            survival = static_cast<double>(n - deaths_so_far) / n;
          else
            survival *= 1.0 - static_cast<double>(d) / y_block;
        }
        if (c > 0) censoring_seen = true;
        block_start = i;
      }
      rt.y0_[i] = suffix0[block_start];
      rt.y1_[i] = suffix1[block_start];
      rt.y_[i] = rt.y0_[i] + rt.y1_[i];
      rt.l_[i] = rt.y_[i] > 0
                     ? static_cast<double>(rt.y0_[i]) * rt.y1_[i] / rt.y_[i]
                     : 0.0;
      // single division while the product still telescopes, so values like
      // m/n land on their canonical doubles (partition-cell membership at
      // exact rational boundaries then resolves the way exact arithmetic
      // would); the max() guards a one-ulp inversion where the two
      // computations splice
      double f = censoring_seen ? 1.0 - survival
                                : static_cast<double>(deaths_so_far) / n;
      if (f < fleft_prev) f = fleft_prev;
      rt.fleft_[i] = f;
      fleft_prev = f;
      rt.group_[i] = obs[i].group;
    }
    return rt;
  }

  int size() const { return static_cast<int>(y_.size()); }
  int y_at(int i) const { return y_[i]; }
  int y0_at(int i) const { return y0_[i]; }
  int y1_at(int i) const { return y1_[i]; }
  int y_own(int i) const { return group_[i] == 0 ? y0_[i] : y1_[i]; }
  double l_at(int i) const { return l_[i]; }
  double f_left(int i) const { return fleft_[i]; }

 private:
  std::vector<int> y_, y0_, y1_;
  std::vector<double> l_, fleft_;
  std::vector<int> group_;
};

// Per-observation statistic vector V_j = L(X_j) * (-1)^{c_j} * Delta_j /
// Y_{c_j}(X_j); censored rows contribute exactly zero.
inline std::vector<double> stat_vector(const SurvivalDataset& ds, const RiskTable& rt) {
  const int n = ds.n();
  std::vector<double> v(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Observation& o = ds[i];
    if (!o.event) continue;
    int y_own = rt.y_own(i);
    if (y_own == 0) continue;  // cannot happen: the observation is at risk of itself
    double sign = o.group == 0 ? 1.0 : -1.0;
    v[i] = rt.l_at(i) * sign / y_own;
  }
  return v;
}

}  // namespace klrt
