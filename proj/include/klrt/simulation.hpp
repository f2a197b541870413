#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "klrt/bootstrap.hpp"
#include "klrt/numerics.hpp"
#include "klrt/parallel.hpp"
#include "klrt/rng.hpp"

namespace klrt {

// Parametric cumulative-hazard families for the synthetic studies. Group 0
// always draws from the null model Lambda(t) = t; group 1 from one of:
//   proportional: Lambda(t; theta) = theta * t,            theta in (0, 2]
//   weibull:      Lambda(t; theta) = t^theta,              theta in (0, 2]
//   periodic:     Lambda(t; theta) = t - sin(pi theta t)/(pi theta),
//                                                          theta in (0, 15]
// theta = 0 is excluded: no survival distribution exists there (Lambda must
// start at 0 and grow without bound).
struct HazardFamily {
  enum class Kind { proportional, weibull, periodic };

  Kind kind = Kind::proportional;
  double theta = 1.0;

  static HazardFamily null_model() { return {Kind::proportional, 1.0}; }

  void validate() const {
    switch (kind) {
      case Kind::proportional:
      case Kind::weibull:
        if (!(theta > 0.0 && theta <= 2.0))
          throw Error("bad_theta", "theta must lie in (0,2] for this family");
        return;
      case Kind::periodic:
        if (!(theta > 0.0 && theta <= 15.0))
          throw Error("bad_theta", "theta must lie in (0,15] for the periodic family");
        return;
    }
    throw Error("bad_theta", "unknown hazard family");
  }

  double cumulative_hazard(double t) const {
    switch (kind) {
      case Kind::proportional: return theta * t;
      case Kind::weibull: return std::pow(t, theta);
      case Kind::periodic: {
        double pt = 3.14159265358979323846 * theta;
        return t - std::sin(pt * t) / pt;
      }
    }
    return 0.0;
  }

  // Lambda^{-1}(e); closed form where available, bisection for the periodic
  // family. The bracket [0, e + 2/(pi theta)] always contains the root since
  // Lambda(t) >= t - 1/(pi theta).
  double inverse_cumulative_hazard(double e) const {
    switch (kind) {
      case Kind::proportional: return e / theta;
      case Kind::weibull: return std::pow(e, 1.0 / theta);
      case Kind::periodic: {
        double pt = 3.14159265358979323846 * theta;
        double hi = e + 2.0 / pt;
        return bisect([this, e](double t) { return cumulative_hazard(t) - e; }, 0.0, hi,
                      1e-12);
      }
    }
    return 0.0;
  }
};

inline const char* family_name(HazardFamily::Kind k) {
  switch (k) {
    case HazardFamily::Kind::proportional: return "proportional";
    case HazardFamily::Kind::weibull: return "weibull";
    case HazardFamily::Kind::periodic: return "periodic";
  }
  return "?";
}

// Inverse-transform sampling: T = Lambda^{-1}(E), E ~ Exp(1).
inline std::vector<double> sample_survival(const HazardFamily& family, int count,
                                           RandomStream& rng) {
  family.validate();
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = family.inverse_cumulative_hazard(rng.next_exponential());
  return out;
}

// P(C < T) for C ~ Exp(rho) and T from the family. Substituting
// u = Lambda(t) turns it into an integral against the Exp(1) density:
//   P = int_0^inf (1 - exp(-rho Lambda^{-1}(u))) e^{-u} du.
inline double censoring_fraction(const HazardFamily& family, double rho) {
  family.validate();
  if (rho <= 0.0) return 0.0;
  auto integrand = [&](double u) {
    return (1.0 - std::exp(-rho * family.inverse_cumulative_hazard(u))) * std::exp(-u);
  };
  // e^{-40} ~ 4e-18: the truncated tail is negligible at the 1e-3 scale
  return integrate(integrand, 0.0, 40.0, 1e-7);
}

// Exponential censoring rate hitting a target censored fraction. The
// proportional family has the closed form P = rho/(theta + rho); the others
// bisect on the integral above.
inline double calibrate_censoring(const HazardFamily& family, double target) {
  family.validate();
  if (!(target >= 0.0 && target < 1.0))
    throw Error("bad_config", "target censoring fraction must lie in [0,1)");
  if (target == 0.0) return 0.0;
  if (family.kind == HazardFamily::Kind::proportional)
    return family.theta * target / (1.0 - target);

  double hi = 1.0;
  int doublings = 0;
  while (censoring_fraction(family, hi) < target) {
    hi *= 2.0;
    if (++doublings > 60) throw Error("no_convergence", "censoring calibration bracket blew up");
  }
  return bisect([&](double rho) { return censoring_fraction(family, rho) - target; }, 0.0, hi,
                2e-4);
}

// ---------------------------------------------------------------------------
// Experiment harness
// ---------------------------------------------------------------------------

struct ScenarioConfig {
  int n0 = 30, n1 = 30;
  HazardFamily::Kind family = HazardFamily::Kind::proportional;
  std::vector<double> theta_grid;
  double censoring0 = 0.0, censoring1 = 0.0;  // target censored fractions
  int repetitions = 1000;
  BootstrapConfig bootstrap;
  std::vector<std::pair<std::string, KernelSpec>> kernels;  // (name, spec)
};

struct ReportCell {
  std::string kernel;
  double theta = 0.0;
  int rejections = 0;
  int repetitions = 0;
  double rate = 0.0;
  double se = 0.0;  // binomial Monte-Carlo standard error
};

struct ExperimentReport {
  ScenarioConfig config;
  std::uint64_t master_seed = 0;
  std::vector<ReportCell> cells;  // theta-major, kernel-minor
  double runtime_seconds = 0.0;
};

namespace detail {

// One simulated dataset: group 0 from the null model, group 1 from the
// alternative, per-group exponential censoring.
inline SurvivalDataset simulate_dataset(const HazardFamily& alt, int n0, int n1, double rho0,
                                        double rho1, RandomStream& rng) {
  std::vector<Observation> obs;
  obs.reserve(n0 + n1);
  const HazardFamily null_model = HazardFamily::null_model();
  for (int i = 0; i < n0; ++i) {
    double t = null_model.inverse_cumulative_hazard(rng.next_exponential());
    double c =
        rho0 > 0.0 ? rng.next_exponential() / rho0 : std::numeric_limits<double>::infinity();
    obs.push_back({std::min(t, c), t <= c, 0});
  }
  for (int i = 0; i < n1; ++i) {
    double t = alt.inverse_cumulative_hazard(rng.next_exponential());
    double c =
        rho1 > 0.0 ? rng.next_exponential() / rho1 : std::numeric_limits<double>::infinity();
    obs.push_back({std::min(t, c), t <= c, 1});
  }
  return SurvivalDataset::validate_and_sort(std::move(obs));
}

}  // namespace detail

// Runs the full campaign: repetitions x theta grid x kernels, tallying
// rejections. Repetition r re-creates its noise stream from
// (master_seed, r) for every theta, so cells along the grid see matched
// draws and power curves are comparable point to point. Repetitions run in
// parallel; tallies are reduced in repetition order.
inline ExperimentReport run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed) {
  if (cfg.repetitions < 1) throw Error("bad_config", "repetitions must be >= 1");
  if (cfg.theta_grid.empty()) throw Error("bad_config", "theta grid is empty");
  if (cfg.kernels.empty()) throw Error("bad_config", "kernel list is empty");
  auto t_start = std::chrono::steady_clock::now();

  const int n_theta = static_cast<int>(cfg.theta_grid.size());
  const int n_kernel = static_cast<int>(cfg.kernels.size());

  // Censoring rates: group 0 once, group 1 recalibrated per theta.
  const double rho0 = calibrate_censoring(HazardFamily::null_model(), cfg.censoring0);
  std::vector<double> rho1(n_theta);
  std::vector<HazardFamily> alts(n_theta);
  for (int t = 0; t < n_theta; ++t) {
    alts[t] = HazardFamily{cfg.family, cfg.theta_grid[t]};
    alts[t].validate();
    rho1[t] = calibrate_censoring(alts[t], cfg.censoring1);
  }

  std::vector<std::vector<char>> rejected(
      cfg.repetitions, std::vector<char>(static_cast<std::size_t>(n_theta) * n_kernel, 0));
  parallel_for(cfg.repetitions, [&](int rep) {
    const std::uint64_t rep_key = derive_seed(master_seed, 1, static_cast<std::uint64_t>(rep));
    for (int t = 0; t < n_theta; ++t) {
      RandomStream rng(rep_key, 0);  // same stream for every theta: matched noise
      SurvivalDataset ds =
          detail::simulate_dataset(alts[t], cfg.n0, cfg.n1, rho0, rho1[t], rng);
      for (int k = 0; k < n_kernel; ++k) {
        BootstrapConfig bcfg = cfg.bootstrap;
        bcfg.seed = derive_seed(master_seed, 2 + static_cast<std::uint64_t>(t),
                                static_cast<std::uint64_t>(rep) * 131 + k);
        TestResult res = run_test(ds, cfg.kernels[k].second, bcfg);
        rejected[rep][static_cast<std::size_t>(t) * n_kernel + k] = res.reject ? 1 : 0;
      }
    }
  });

  ExperimentReport report;
  report.config = cfg;
  report.master_seed = master_seed;
  for (int t = 0; t < n_theta; ++t) {
    for (int k = 0; k < n_kernel; ++k) {
      ReportCell cell;
      cell.kernel = cfg.kernels[k].first;
      cell.theta = cfg.theta_grid[t];
      cell.repetitions = cfg.repetitions;
      for (int rep = 0; rep < cfg.repetitions; ++rep)
        cell.rejections += rejected[rep][static_cast<std::size_t>(t) * n_kernel + k];
      cell.rate = static_cast<double>(cell.rejections) / cfg.repetitions;
      cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) / cfg.repetitions);
      report.cells.push_back(std::move(cell));
    }
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

// Asymptotic mean of the scaled statistic under the null with Exp(1)
// survival in both groups and Exp(rho_c) censoring:
//   E(Z) = int_0^tau K(F0(x), F0(x)) psi(x) dF0(x)
//        = int_0^1 K(u,u) psi~(u) du
// with psi~(u) = (1-u)^{rho0+rho1} / (eta (1-u)^{rho0} + (1-eta) (1-u)^{rho1}).
// Monte-Carlo means of (n0 n1 / n) Z_n approach this value.
inline double asymptotic_mean_oracle(const PreparedKernel& pk, double eta, double rho0,
                                     double rho1) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error("bad_config", "eta must lie in (0,1)");
  if (rho0 < 0.0 || rho1 < 0.0) throw Error("bad_config", "censoring rates must be >= 0");
  auto integrand = [&](double u) {
    double s = 1.0 - u;
    double g0 = std::pow(s, rho0);
    double g1 = std::pow(s, rho1);
    double denom = eta * g0 + (1.0 - eta) * g1;
    double psi = denom > 0.0 ? g0 * g1 / denom : 0.0;
    return pk.eval(u, u) * psi;
  };
  return integrate(integrand, 0.0, 1.0, 1e-9);
}

}  // namespace klrt
