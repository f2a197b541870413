#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "klrt/kernels.hpp"

namespace klrt {

// The named kernels of the experiments and the CLI:
//   lrp   classical log-rank          K(u,v) = 1
//   lrc   crossing-sensitive log-rank K(u,v) = (u-1/2)(v-1/2)
//   p2w   projection on span{1, x}
//   p4w   projection on span{1, x, x^2, x^3}
//   per4  Pearson partition, 4 cells, unit weight
//   per5  Pearson partition, 5 cells, unit weight
//   sek   squared exponential, sigma = 0.1 unless overridden
inline KernelSpec kernel_by_name(const std::string& name) {
  if (name == "lrp") return WeightedLogRankKernel{WeightFunction::constant1()};
  if (name == "lrc") return WeightedLogRankKernel{WeightFunction::centered_linear()};
  if (name == "p2w")
    return ProjectionKernel{{WeightFunction::constant1(), WeightFunction::monomial(1)}};
  if (name == "p4w")
    return ProjectionKernel{{WeightFunction::constant1(), WeightFunction::monomial(1),
                             WeightFunction::monomial(2), WeightFunction::monomial(3)}};
  if (name == "per4") return PearsonKernel{4, WeightFunction::constant1()};
  if (name == "per5") return PearsonKernel{5, WeightFunction::constant1()};
  if (name == "sek") return SquaredExponentialKernel{0.1};
  throw Error("bad_kernel", "unknown kernel name: " + name);
}

// Weight expressions accepted by `--kernel custom --weight EXPR`:
//   "1"          constant
//   "x-1/2"      centered linear
//   "x^D"        monomial of integer degree D
//   "beta:P:Q"   x^P (1-x)^Q
inline WeightFunction parse_weight(const std::string& expr) {
  if (expr == "1" || expr == "one") return WeightFunction::constant1();
  if (expr == "x-1/2" || expr == "centered") return WeightFunction::centered_linear();
  if (expr.rfind("x^", 0) == 0) {
    char* end = nullptr;
    long d = std::strtol(expr.c_str() + 2, &end, 10);
    if (end == expr.c_str() + expr.size() && d >= 0)
      return WeightFunction::monomial(static_cast<int>(d));
  }
  if (expr.rfind("beta:", 0) == 0) {
    std::size_t sep = expr.find(':', 5);
    if (sep != std::string::npos) {
      char* e1 = nullptr;
      char* e2 = nullptr;
      std::string ps = expr.substr(5, sep - 5);
      std::string qs = expr.substr(sep + 1);
      double p = std::strtod(ps.c_str(), &e1);
      double q = std::strtod(qs.c_str(), &e2);
      if (!ps.empty() && e1 == ps.c_str() + ps.size() && !qs.empty() &&
          e2 == qs.c_str() + qs.size())
        return WeightFunction::beta_shape(p, q);
    }
  }
  throw Error("bad_weight", "cannot parse weight expression: " + expr);
}

}  // namespace klrt
