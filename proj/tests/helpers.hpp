#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "klrt/klrt.hpp"

namespace testutil {

// A random right-censored two-sample dataset. Survival times are Exp(1)
// within each group (optionally tilted so the groups differ); censoring
// times are Exp(rho) per group, rho = 0 meaning no censoring.
inline klrt::SurvivalDataset random_dataset(klrt::RandomStream& rng, int n0, int n1,
                                            double rho0 = 0.0, double rho1 = 0.0,
                                            double group1_scale = 1.0) {
  std::vector<klrt::Observation> obs;
  obs.reserve(n0 + n1);
  for (int i = 0; i < n0; ++i) {
    double t = rng.next_exponential();
    double c = rho0 > 0.0 ? rng.next_exponential() / rho0
                          : std::numeric_limits<double>::infinity();
    obs.push_back({std::min(t, c), t <= c, 0});
  }
  for (int i = 0; i < n1; ++i) {
    double t = rng.next_exponential() * group1_scale;
    double c = rho1 > 0.0 ? rng.next_exponential() / rho1
                          : std::numeric_limits<double>::infinity();
    obs.push_back({std::min(t, c), t <= c, 1});
  }
  return klrt::SurvivalDataset::validate_and_sort(std::move(obs));
}

inline bool close_rel(double a, double b, double rel) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * std::max(scale, 1e-300);
}

// Asymptotic Kolmogorov distribution tail: P(sup |B| > lambda).
inline double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

// One-sample Kolmogorov-Smirnov p-value against a continuous cdf.
template <typename Cdf>
double ks_pvalue(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return kolmogorov_tail(std::sqrt(n) * d);
}

// Random weight in the RKHS unit ball: w = sum_i a_i K(u_i, .) normalized
// by its RKHS norm. Returns an empty optional when the norm vanishes.
inline std::optional<klrt::WeightFunction> random_unit_ball_weight(
    const klrt::PreparedKernel& pk, klrt::RandomStream& rng, int atoms = 5) {
  auto points = std::make_shared<std::vector<double>>(atoms);
  auto coef = std::make_shared<std::vector<double>>(atoms);
  for (int i = 0; i < atoms; ++i) {
    (*points)[i] = rng.next_double();
    (*coef)[i] = rng.next_normal();
  }
  double norm2 = 0.0;
  double term_scale = 0.0;
  for (int i = 0; i < atoms; ++i)
    for (int j = 0; j < atoms; ++j) {
      double term = (*coef)[i] * (*coef)[j] * pk.eval((*points)[i], (*points)[j]);
      norm2 += term;
      term_scale += std::abs(term);
    }
  // reject draws whose norm is dominated by cancellation: dividing by it
  // would amplify roundoff beyond what downstream tolerances assume
  if (!(norm2 > 1e-6 * std::max(term_scale, 1e-30))) return std::nullopt;
  double inv_norm = 1.0 / std::sqrt(norm2);
  auto shared_pk = std::make_shared<const klrt::PreparedKernel>(pk);
  return klrt::WeightFunction::custom("random-unit-ball", [=](double u) {
    double s = 0.0;
    for (std::size_t i = 0; i < points->size(); ++i)
      s += (*coef)[i] * shared_pk->eval((*points)[i], u);
    return inv_norm * s;
  });
}

}  // namespace testutil
