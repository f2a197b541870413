// Command-line driver: `klrt test` runs the kernel log-rank test on a CSV
// dataset and prints a JSON result document; `klrt simulate` runs a
// synthetic power/level campaign and writes JSON + CSV reports.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "klrt/klrt.hpp"

namespace {

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

klrt::KernelSpec kernel_from_flags(const std::string& name, const std::string& sigma,
                                   const std::string& weight_expr, bool normalized) {
  const bool is_pearson = name == "per4" || name == "per5";
  if (!sigma.empty() && name != "sek")
    throw klrt::Error("bad_kernel", "--sigma only applies to --kernel sek");
  if (!weight_expr.empty() && name != "custom" && !is_pearson)
    throw klrt::Error("bad_kernel", "--weight applies to custom and pearson kernels");
  if (normalized && !is_pearson)
    throw klrt::Error("bad_kernel", "--normalized applies to pearson kernels");

  if (name == "custom") {
    if (weight_expr.empty())
      throw klrt::Error("bad_kernel", "--kernel custom requires --weight EXPR");
    return klrt::WeightedLogRankKernel{klrt::parse_weight(weight_expr)};
  }
  if (is_pearson) {
    int cells = name == "per4" ? 4 : 5;
    klrt::WeightFunction w = weight_expr.empty() ? klrt::WeightFunction::constant1()
                                                 : klrt::parse_weight(weight_expr);
    if (normalized) return klrt::NormalizedPearsonKernel{cells, w};
    return klrt::PearsonKernel{cells, w};
  }
  if (name == "sek" && !sigma.empty()) {
    if (sigma == "median") return klrt::SquaredExponentialKernel{klrt::MedianHeuristic{}};
    char* end = nullptr;
    double s = std::strtod(sigma.c_str(), &end);
    if (end != sigma.c_str() + sigma.size())
      throw klrt::Error("bad_kernel", "--sigma must be a number or 'median'");
    if (!(s > 0.0)) throw klrt::Error("zero_bandwidth", "--sigma must be > 0");
    return klrt::SquaredExponentialKernel{s};
  }
  return klrt::kernel_by_name(name);
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string item = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      char* end = nullptr;
      double v = std::strtod(item.c_str(), &end);
      if (end != item.c_str() + item.size())
        throw klrt::Error("bad_config", "cannot parse number '" + item + "'");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_test(const std::string& input, const std::string& kernel_name, const std::string& sigma,
             const std::string& weight_expr, bool normalized, int replicates, double alpha,
             std::uint64_t seed, const std::string& multiplier,
             const std::string& optimal_weight_path, bool deterministic) {
  klrt::KernelSpec spec = kernel_from_flags(kernel_name, sigma, weight_expr, normalized);
  auto ds = klrt::SurvivalDataset::validate_and_sort(klrt::read_survival_csv_file(input));

  klrt::BootstrapConfig cfg;
  cfg.replicates = replicates;
  cfg.alpha = alpha;
  cfg.seed = seed;
  if (multiplier == "rademacher")
    cfg.multiplier = klrt::Multiplier::rademacher;
  else if (multiplier == "normal")
    cfg.multiplier = klrt::Multiplier::standard_normal;
  else
    throw klrt::Error("bad_config", "--multiplier must be rademacher or normal");

  klrt::TestResult result = klrt::run_test(ds, spec, cfg);

  if (!optimal_weight_path.empty()) {
    auto rt = klrt::RiskTable::build(ds);
    auto pk = klrt::prepare(spec, ds, rt);
    klrt::TabulatedWeight w = klrt::optimal_weight(ds, rt, pk);
    klrt::write_file(optimal_weight_path, klrt::weight_csv(w));
  }

  auto doc = klrt::result_document(result, spec, deterministic ? "" : iso_timestamp());
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& family, const std::string& theta_list, int n0, int n1,
                 double cens0, double cens1, const std::string& kernel_list, int reps,
                 int replicates, double alpha, std::uint64_t seed, const std::string& out_dir,
                 bool deterministic) {
  klrt::ScenarioConfig cfg;
  if (family == "proportional")
    cfg.family = klrt::HazardFamily::Kind::proportional;
  else if (family == "weibull")
    cfg.family = klrt::HazardFamily::Kind::weibull;
  else if (family == "periodic")
    cfg.family = klrt::HazardFamily::Kind::periodic;
  else
    throw klrt::Error("bad_config", "--family must be proportional, weibull or periodic");

  cfg.theta_grid = parse_double_list(theta_list);
  cfg.n0 = n0;
  cfg.n1 = n1;
  cfg.censoring0 = cens0;
  cfg.censoring1 = cens1;
  cfg.repetitions = reps;
  cfg.bootstrap.replicates = replicates;
  cfg.bootstrap.alpha = alpha;

  std::size_t pos = 0;
  while (pos <= kernel_list.size()) {
    std::size_t comma = kernel_list.find(',', pos);
    std::string name =
        kernel_list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!name.empty()) cfg.kernels.emplace_back(name, klrt::kernel_by_name(name));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  klrt::ExperimentReport report = klrt::run_scenario(cfg, seed);
  double runtime = report.runtime_seconds;
  if (deterministic) report.runtime_seconds = 0.0;  // keep report files byte-stable

  std::filesystem::create_directories(out_dir);
  klrt::write_file(out_dir + "/report.json", klrt::report_json(report).dump(2) + "\n");
  klrt::write_file(out_dir + "/report.csv", klrt::report_csv(report));

  std::printf("%-8s %8s %12s %8s %8s\n", "kernel", "theta", "rejections", "rate", "se");
  for (const klrt::ReportCell& c : report.cells)
    std::printf("%-8s %8.4f %7d/%-4d %8.4f %8.4f\n", c.kernel.c_str(), c.theta, c.rejections,
                c.repetitions, c.rate, c.se);
  if (deterministic)
    std::printf("report written to %s\n", out_dir.c_str());
  else
    std::printf("report written to %s (%.1f s)\n", out_dir.c_str(), runtime);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel log-rank two-sample test for right-censored survival data"};
  app.require_subcommand(1);

  // --- test ---
  auto* test = app.add_subcommand("test", "run the test on a CSV dataset");
  std::string input, kernel_name = "sek", sigma, weight_expr, multiplier = "rademacher";
  std::string optimal_weight_path;
  int replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool deterministic = false;
  bool normalized = false;
  test->add_option("--input", input, "CSV file with columns time,event,group")->required();
  test->add_option("--kernel", kernel_name,
                   "kernel: lrp|lrc|p2w|p4w|per4|per5|sek|custom (default sek)");
  test->add_option("--sigma", sigma, "SEK bandwidth: a positive number or 'median'");
  test->add_option("--weight", weight_expr,
                   "weight for custom/pearson kernels: 1 | x-1/2 | x^D | beta:P:Q");
  test->add_flag("--normalized", normalized, "variance-normalize the pearson cells");
  test->add_option("--bootstrap", replicates, "number of Wild Bootstrap replicates");
  test->add_option("--alpha", alpha, "test level in (0,1)");
  test->add_option("--seed", seed, "random seed");
  test->add_option("--multiplier", multiplier, "bootstrap multipliers: rademacher|normal");
  test->add_option("--optimal-weight", optimal_weight_path,
                   "write the supremum-achieving weight to this CSV path");
  test->add_flag("--deterministic", deterministic, "suppress the timestamp field");

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "run a synthetic level/power campaign");
  std::string family, theta_list, kernel_list = "sek", out_dir = "klrt-report";
  int n0 = 30, n1 = 30, reps = 1000, sim_replicates = 1000;
  double cens0 = 0.1, cens1 = 0.1, sim_alpha = 0.05;
  std::uint64_t sim_seed = 0;
  bool sim_deterministic = false;
  sim->add_option("--family", family, "hazard family: proportional|weibull|periodic")->required();
  sim->add_option("--theta-grid", theta_list, "comma-separated theta values")->required();
  sim->add_option("--n0", n0, "group 0 size");
  sim->add_option("--n1", n1, "group 1 size");
  sim->add_option("--cens0", cens0, "target censored fraction, group 0");
  sim->add_option("--cens1", cens1, "target censored fraction, group 1");
  sim->add_option("--kernels", kernel_list, "comma-separated kernel names");
  sim->add_option("--reps", reps, "simulated datasets per cell");
  sim->add_option("--bootstrap", sim_replicates, "Wild Bootstrap replicates per test");
  sim->add_option("--alpha", sim_alpha, "test level");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--out", out_dir, "output directory for report.json / report.csv");
  sim->add_flag("--deterministic", sim_deterministic,
                "suppress runtime metadata so reports are byte-stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // errors map to exit 1; --help stays 0
  }

  try {
    if (test->parsed())
      return cmd_test(input, kernel_name, sigma, weight_expr, normalized, replicates, alpha,
                      seed, multiplier, optimal_weight_path, deterministic);
    if (sim->parsed())
      return cmd_simulate(family, theta_list, n0, n1, cens0, cens1, kernel_list, reps,
                          sim_replicates, sim_alpha, sim_seed, out_dir, sim_deterministic);
  } catch (const klrt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
