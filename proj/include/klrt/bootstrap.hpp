#pragma once

#include <cstdint>
#include <vector>

#include "klrt/numerics.hpp"
#include "klrt/parallel.hpp"
#include "klrt/rng.hpp"
#include "klrt/test_engine.hpp"

namespace klrt {

enum class Multiplier { rademacher, standard_normal };

struct BootstrapConfig {
  int replicates = 1000;
  Multiplier multiplier = Multiplier::rademacher;
  std::uint64_t seed = 0;
  double alpha = 0.05;
};

struct TestResult {
  ZStatistic z;
  std::vector<double> bootstrap_values;  // Z_n^W replicates, unscaled
  double quantile = 0.0;                 // empirical (1-alpha)-quantile
  double p_value = 1.0;                  // plus-one Monte-Carlo p-value
  bool reject = false;                   // Z_n > quantile
  BootstrapConfig config;
};

// One Wild Bootstrap replicate Z_n^W for explicit multipliers (one per
// observation, canonical order). The kernel matrix is fixed by the data;
// only V is reweighted.
inline double bootstrap_replicate(const SurvivalDataset& ds, const RiskTable& rt,
                                  const PreparedKernel& pk,
                                  const std::vector<double>& multipliers) {
  return ZForm(ds, rt, pk).replicate(multipliers);
}

namespace detail {

inline std::vector<double> draw_multipliers(Multiplier kind, int n, RandomStream& rng) {
  std::vector<double> w(n);
  if (kind == Multiplier::rademacher)
    for (int i = 0; i < n; ++i) w[i] = rng.next_rademacher();
  else
    for (int i = 0; i < n; ++i) w[i] = rng.next_normal();
  return w;
}

}  // namespace detail

// The full testing procedure: evaluate Z_n, draw N Wild Bootstrap
// replicates, and compare against the empirical (1-alpha)-quantile.
// Replicate r draws its multipliers from the counter-based stream keyed by
// (seed, r), so results are identical for any thread count.
inline TestResult run_test(const SurvivalDataset& ds, const KernelSpec& spec,
                           const BootstrapConfig& cfg) {
  if (cfg.replicates < 1) throw Error("bad_config", "replicates must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error("bad_config", "alpha must lie in (0,1)");

  RiskTable rt = RiskTable::build(ds);
  PreparedKernel pk = prepare(spec, ds, rt);
  ZForm form(ds, rt, pk);

  TestResult result;
  result.config = cfg;
  result.z.z = form.value();
  result.z.n = ds.n();
  result.z.n0 = ds.n0();
  result.z.n1 = ds.n1();
  result.z.scaled = static_cast<double>(ds.n0()) * ds.n1() / ds.n() * result.z.z;

  const int n = ds.n();
  result.bootstrap_values.resize(cfg.replicates);
  parallel_for(cfg.replicates, [&](int r) {
    RandomStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    std::vector<double> w = detail::draw_multipliers(cfg.multiplier, n, rng);
    result.bootstrap_values[r] = form.replicate(w);
  });

  result.quantile = quantile(result.bootstrap_values, 1.0 - cfg.alpha);
  int count_ge = 0;
  for (double v : result.bootstrap_values)
    if (v >= result.z.z) ++count_ge;
  result.p_value = (1.0 + count_ge) / (cfg.replicates + 1.0);
  result.reject = result.z.z > result.quantile;
  return result;
}

}  // namespace klrt
