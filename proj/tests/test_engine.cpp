#include <catch2/catch.hpp>

#include <cmath>

#include "helpers.hpp"
#include "klrt/klrt.hpp"

using namespace klrt;

namespace {

SurvivalDataset three_row_dataset() {
  return SurvivalDataset::validate_and_sort({{1, true, 0}, {2, true, 0}, {3, true, 1}});
}

std::vector<KernelSpec> kernel_variants() {
  return {
      kernel_by_name("lrp"),
      kernel_by_name("lrc"),
      kernel_by_name("p2w"),
      kernel_by_name("p4w"),
      kernel_by_name("per4"),
      kernel_by_name("per5"),
      kernel_by_name("sek"),
      SquaredExponentialKernel{MedianHeuristic{}},
      NormalizedPearsonKernel{4, WeightFunction::constant1()},
      WeightedLogRankKernel{WeightFunction::beta_shape(1, 2)},
  };
}

}  // namespace

TEST_CASE("Z_n matches the hand-computed quadratic form") {
  auto ds = three_row_dataset();
  auto rt = RiskTable::build(ds);
  auto pk = prepare(kernel_by_name("lrp"), ds, rt);
  auto z = z_statistic(ds, rt, pk);
  REQUIRE(z.z == Approx(25.0 / 16).epsilon(1e-14));
  REQUIRE(z.scaled == Approx((2.0 * 1 / 3) * 25 / 16).epsilon(1e-14));
  auto zb = z_statistic_bruteforce(ds, rt, pk);
  REQUIRE(zb.z == Approx(25.0 / 16).epsilon(1e-14));
}

TEST_CASE("zero kernel and all-censored data give Z_n = 0") {
  auto ds = three_row_dataset();
  auto rt = RiskTable::build(ds);
  auto zero = prepare(
      WeightedLogRankKernel{WeightFunction::custom("0", [](double) { return 0.0; })}, ds, rt);
  REQUIRE(z_statistic(ds, rt, zero).z == 0.0);

  auto censored = SurvivalDataset::validate_and_sort({{1, false, 0}, {2, false, 1}});
  auto rt2 = RiskTable::build(censored);
  auto pk = prepare(kernel_by_name("sek"), censored, rt2);
  REQUIRE(z_statistic(censored, rt2, pk).z == 0.0);
  REQUIRE(z_statistic_bruteforce(censored, rt2, pk).z == 0.0);
}

TEST_CASE("engine and brute-force oracle agree across kernels and datasets") {
  RandomStream rng(101, 0);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    int n0 = 1 + static_cast<int>(rng.next_u64() % 25);
    int n1 = 1 + static_cast<int>(rng.next_u64() % 25);
    double rho = 0.7 * rng.next_double();
    auto ds = testutil::random_dataset(rng, n0, n1, rho, rho);
    auto rt = RiskTable::build(ds);
    for (const auto& spec : kernel_variants()) {
      auto pk = prepare(spec, ds, rt);
      double a = z_statistic(ds, rt, pk).z;
      double b = z_statistic_bruteforce(ds, rt, pk).z;
      INFO("rep " << rep << " kernel " << describe(spec));
      REQUIRE(testutil::close_rel(a, b, 1e-10));
      ++checked;
    }
  }
  REQUIRE(checked == 20 * 10);
}

TEST_CASE("weighted log-rank statistic and variance match the hand example") {
  auto ds = three_row_dataset();
  auto rt = RiskTable::build(ds);
  auto r = weighted_logrank(ds, rt, WeightFunction::constant1());
  REQUIRE(r.statistic == Approx(1.25).epsilon(1e-14));
  REQUIRE(r.variance_estimate == Approx(17.0 / 24).epsilon(1e-14));
  REQUIRE(r.standardized ==
          Approx(std::sqrt(2.0 / 3) * 1.25 / std::sqrt(17.0 / 24)).epsilon(1e-12));

  auto censored = SurvivalDataset::validate_and_sort({{1, false, 0}, {2, false, 1}});
  auto r2 = weighted_logrank(censored, RiskTable::build(censored), WeightFunction::constant1());
  REQUIRE(r2.statistic == 0.0);
  REQUIRE(r2.variance_estimate == 0.0);
  REQUIRE(r2.standardized == 0.0);
}

TEST_CASE("rank-one kernels square the log-rank statistic") {
  RandomStream rng(103, 0);
  std::vector<WeightFunction> weights = {WeightFunction::constant1(),
                                         WeightFunction::centered_linear(),
                                         WeightFunction::monomial(2)};
  for (int rep = 0; rep < 10; ++rep) {
    auto ds = testutil::random_dataset(rng, 8 + rep, 6 + rep, 0.3, 0.2);
    auto rt = RiskTable::build(ds);
    for (const auto& w : weights) {
      auto pk = prepare(WeightedLogRankKernel{w}, ds, rt);
      double z = z_statistic(ds, rt, pk).z;
      double lrt = weighted_logrank(ds, rt, w).statistic;
      REQUIRE(testutil::close_rel(z, lrt * lrt, 1e-12));
    }
  }
}

TEST_CASE("pearson kernels decompose into per-cell log-rank statistics") {
  RandomStream rng(104, 0);
  for (int rep = 0; rep < 10; ++rep) {
    auto ds = testutil::random_dataset(rng, 10 + rep, 9, 0.3, 0.3);
    auto rt = RiskTable::build(ds);
    for (int cells : {4, 5}) {
      auto pk = prepare(PearsonKernel{cells, WeightFunction::constant1()}, ds, rt);
      double z = z_statistic(ds, rt, pk).z;
      double total = 0.0;
      for (int j = 0; j < cells; ++j) {
        auto restricted = WeightFunction::custom(
            "cell", [cells, j](double u) { return pearson_cell(u, cells) == j ? 1.0 : 0.0; });
        double cell_stat = weighted_logrank(ds, rt, restricted).statistic;
        total += cell_stat * cell_stat;
      }
      REQUIRE(testutil::close_rel(z, total, 1e-10));
    }
  }
}

TEST_CASE("swapping group labels leaves Z_n unchanged") {
  RandomStream rng(105, 0);
  for (int rep = 0; rep < 5; ++rep) {
    auto ds = testutil::random_dataset(rng, 9, 13, 0.4, 0.2);
    std::vector<Observation> raw(ds.observations());
    for (auto& o : raw) o.group = 1 - o.group;
    auto swapped = SurvivalDataset::validate_and_sort(raw);
    auto rt = RiskTable::build(ds);
    auto rt2 = RiskTable::build(swapped);
    for (const auto& name : {"lrp", "lrc", "sek", "per4"}) {
      auto spec = kernel_by_name(name);
      double a = z_statistic(ds, rt, prepare(spec, ds, rt)).z;
      double b = z_statistic(swapped, rt2, prepare(spec, swapped, rt2)).z;
      REQUIRE(testutil::close_rel(a, b, 1e-12));
    }
  }
}

TEST_CASE("scaling the kernel scales Z_n linearly") {
  RandomStream rng(106, 0);
  auto ds = testutil::random_dataset(rng, 11, 7, 0.3, 0.5);
  auto rt = RiskTable::build(ds);
  auto w = WeightFunction::centered_linear();
  auto scaled_w = WeightFunction::custom("c*(x-1/2)", [](double u) { return 1.7 * (u - 0.5); });
  double z1 = z_statistic(ds, rt, prepare(WeightedLogRankKernel{w}, ds, rt)).z;
  double z2 = z_statistic(ds, rt, prepare(WeightedLogRankKernel{scaled_w}, ds, rt)).z;
  REQUIRE(testutil::close_rel(z2, 1.7 * 1.7 * z1, 1e-12));
}

TEST_CASE("Z_n is nonnegative up to roundoff of the PSD form") {
  RandomStream rng(107, 0);
  for (int rep = 0; rep < 20; ++rep) {
    auto ds = testutil::random_dataset(rng, 4 + rep, 3 + rep, 0.5, 0.5);
    auto rt = RiskTable::build(ds);
    for (const auto& spec : kernel_variants()) {
      auto pk = prepare(spec, ds, rt);
      ZForm form(ds, rt, pk);
      REQUIRE(form.value() >= -1e-12 * std::max(form.gram_trace(), 1.0));
    }
  }
}

TEST_CASE("optimal weight of the constant kernel is a constant sign") {
  auto ds = three_row_dataset();
  auto rt = RiskTable::build(ds);
  auto pk = prepare(kernel_by_name("lrp"), ds, rt);
  auto w = optimal_weight_function(ds, rt, pk);
  // sum of V is positive here, so the achieving direction is +1
  REQUIRE(w(0.1) == Approx(1.0).epsilon(1e-12));
  REQUIRE(w(0.9) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("optimal weight achieves the supremum") {
  RandomStream rng(108, 0);
  for (const auto& name : {"sek", "p2w", "per4", "lrc"}) {
    auto ds = testutil::random_dataset(rng, 14, 12, 0.3, 0.3, 1.6);
    auto rt = RiskTable::build(ds);
    auto pk = prepare(kernel_by_name(name), ds, rt);
    double z = z_statistic(ds, rt, pk).z;
    if (z <= 0.0) continue;

    // exact closure form
    auto w = optimal_weight_function(ds, rt, pk);
    double lrt = weighted_logrank(ds, rt, w).statistic;
    REQUIRE(testutil::close_rel(lrt * lrt, z, 1e-8));

    // tabulated on a grid that contains the F(X-) knots
    std::vector<double> grid;
    for (int g = 0; g < 64; ++g) grid.push_back(g / 64.0);
    for (int i = 0; i < ds.n(); ++i) grid.push_back(rt.f_left(i));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = w(grid[i]);
    auto tab = WeightFunction::tabulated(grid, values);
    double lrt_tab = weighted_logrank(ds, rt, tab).statistic;
    REQUIRE(testutil::close_rel(lrt_tab * lrt_tab, z, 1e-8));
  }
}

TEST_CASE("optimal weight errors out on a degenerate statistic") {
  auto censored = SurvivalDataset::validate_and_sort({{1, false, 0}, {2, false, 1}});
  auto rt = RiskTable::build(censored);
  auto pk = prepare(kernel_by_name("sek"), censored, rt);
  CHECK_THROWS_WITH(optimal_weight_function(censored, rt, pk),
                    Catch::Contains("degenerate_statistic"));
}

TEST_CASE("random unit-ball weights never beat the supremum") {
  RandomStream rng(109, 0);
  for (const auto& name : {"sek", "lrc"}) {
    auto ds = testutil::random_dataset(rng, 13, 11, 0.2, 0.4, 1.5);
    auto rt = RiskTable::build(ds);
    auto pk = prepare(kernel_by_name(name), ds, rt);
    double z = z_statistic(ds, rt, pk).z;
    int tried = 0;
    for (int attempt = 0; attempt < 1000 && tried < 100; ++attempt) {
      auto w = testutil::random_unit_ball_weight(pk, rng);
      if (!w) continue;
      double lrt = weighted_logrank(ds, rt, *w).statistic;
      REQUIRE(lrt * lrt <= z * (1.0 + 1e-9));
      ++tried;
    }
    REQUIRE(tried == 100);
  }
}

TEST_CASE("bundled-fixture statistics match exact rational arithmetic") {
  // expected values computed independently with exact fractions over the
  // bundled file, then converted to double once at the end
  auto ds = SurvivalDataset::validate_and_sort(
      read_survival_csv_file(std::string(KLRT_DATA_DIR) + "/gtsg.csv"));
  auto rt = RiskTable::build(ds);
  struct Case {
    KernelSpec spec;
    double expected;
  };
  std::vector<Case> cases = {
      {kernel_by_name("lrp"), 0.008836184880562932},
      {kernel_by_name("lrc"), 0.037822855385975206},
      {kernel_by_name("per4"), 0.1397995141490648},
      {kernel_by_name("per5"), 0.11468734478883988},
  };
  for (const auto& c : cases) {
    auto pk = prepare(c.spec, ds, rt);
    INFO(describe(c.spec));
    REQUIRE(z_statistic(ds, rt, pk).z == Approx(c.expected).epsilon(1e-12));
    REQUIRE(z_statistic_bruteforce(ds, rt, pk).z == Approx(c.expected).epsilon(1e-12));
  }
  auto lr = weighted_logrank(ds, rt, WeightFunction::constant1());
  REQUIRE(lr.statistic == Approx(-0.094000983402105595).epsilon(1e-12));
  REQUIRE(lr.variance_estimate == Approx(0.88375443021633227).epsilon(1e-12));
}

TEST_CASE("tabulated optimal weight spans the default grid") {
  RandomStream rng(110, 0);
  auto ds = testutil::random_dataset(rng, 10, 10, 0.0, 0.0, 2.0);
  auto rt = RiskTable::build(ds);
  auto pk = prepare(kernel_by_name("sek"), ds, rt);
  auto tab = optimal_weight(ds, rt, pk);
  REQUIRE(tab.grid.size() == 512);
  REQUIRE(tab.grid.front() == 0.0);
  REQUIRE(tab.grid.back() == Approx(511.0 / 512));
  auto small = optimal_weight(ds, rt, pk, 16);
  REQUIRE(small.grid.size() == 16);
}
