#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "klrt/bootstrap.hpp"
#include "klrt/simulation.hpp"
#include "klrt/version.hpp"

namespace klrt {

// ---------------------------------------------------------------------------
// Test result document (the `test` subcommand's stdout payload)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json result_document(const TestResult& r, const KernelSpec& spec,
                                              const std::string& timestamp = "") {
  nlohmann::ordered_json doc;
  doc["statistic"] = r.z.z;
  doc["scaled_statistic"] = r.z.scaled;
  doc["p_value"] = r.p_value;
  doc["quantile"] = r.quantile;
  doc["reject"] = r.reject;
  doc["alpha"] = r.config.alpha;
  doc["kernel"] = describe(spec);
  doc["n"] = r.z.n;
  doc["n0"] = r.z.n0;
  doc["n1"] = r.z.n1;
  doc["bootstrap"] = {
      {"replicates", r.config.replicates},
      {"multiplier", r.config.multiplier == Multiplier::rademacher ? "rademacher" : "normal"},
      {"seed", r.config.seed},
  };
  doc["version"] = version_string();
  if (!timestamp.empty()) doc["timestamp"] = timestamp;
  return doc;
}

// ---------------------------------------------------------------------------
// Experiment report (JSON + flat CSV for external plotting)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["family"] = family_name(report.config.family);
  doc["theta_grid"] = report.config.theta_grid;
  doc["n0"] = report.config.n0;
  doc["n1"] = report.config.n1;
  doc["censoring0"] = report.config.censoring0;
  doc["censoring1"] = report.config.censoring1;
  doc["repetitions"] = report.config.repetitions;
  doc["alpha"] = report.config.bootstrap.alpha;
  doc["bootstrap_replicates"] = report.config.bootstrap.replicates;
  doc["multiplier"] =
      report.config.bootstrap.multiplier == Multiplier::rademacher ? "rademacher" : "normal";
  doc["master_seed"] = report.master_seed;
  doc["runtime_seconds"] = report.runtime_seconds;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const ReportCell& c : report.cells) {
    cells.push_back({{"kernel", c.kernel},
                     {"theta", c.theta},
                     {"rejections", c.rejections},
                     {"repetitions", c.repetitions},
                     {"rate", c.rate},
                     {"se", c.se}});
  }
  doc["cells"] = cells;
  doc["version"] = version_string();
  return doc;
}

inline std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "kernel,theta,n0,n1,cens0,cens1,reps,rejections,rate,se\n";
  out.precision(17);
  for (const ReportCell& c : report.cells) {
    out << c.kernel << ',' << c.theta << ',' << report.config.n0 << ',' << report.config.n1
        << ',' << report.config.censoring0 << ',' << report.config.censoring1 << ','
        << c.repetitions << ',' << c.rejections << ',' << c.rate << ',' << c.se << '\n';
  }
  return out.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write file: " + path);
  out << contents;
}

inline std::string weight_csv(const TabulatedWeight& w) {
  std::ostringstream out;
  out << "u,weight\n";
  out.precision(17);
  for (std::size_t i = 0; i < w.grid.size(); ++i)
    out << w.grid[i] << ',' << w.values[i] << '\n';
  return out.str();
}

}  // namespace klrt
