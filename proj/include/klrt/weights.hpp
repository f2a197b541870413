#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "klrt/errors.hpp"

namespace klrt {

// Weight function omega: [0,1) -> R. Named shapes carry a label so kernel
// specifications can be echoed back through the CLI.
class WeightFunction {
 public:
  static WeightFunction constant1() {
    return WeightFunction("1", [](double) { return 1.0; });
  }

  static WeightFunction centered_linear() {
    return WeightFunction("x-1/2", [](double u) { return u - 0.5; });
  }

  static WeightFunction monomial(int degree) {
    if (degree < 0) throw Error("bad_weight", "monomial degree must be >= 0");
    return WeightFunction("x^" + std::to_string(degree),
                          [degree](double u) { return std::pow(u, degree); });
  }

  static WeightFunction beta_shape(double p, double q) {
    return WeightFunction(
        "x^" + format_param(p) + "(1-x)^" + format_param(q),
        [p, q](double u) { return std::pow(u, p) * std::pow(1.0 - u, q); });
  }

  static WeightFunction custom(std::string label, std::function<double(double)> fn) {
    return WeightFunction(std::move(label), std::move(fn));
  }

  // Piecewise-linear interpolant through (grid[i], values[i]); exact at the
  // knots, clamped outside the grid range.
  static WeightFunction tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.empty() || grid.size() != values.size())
      throw Error("bad_weight", "tabulated weight needs matching nonempty grid and values");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1]))
        throw Error("bad_weight", "tabulated weight grid must be strictly increasing");
    auto g = std::make_shared<std::vector<double>>(std::move(grid));
    auto v = std::make_shared<std::vector<double>>(std::move(values));
    return WeightFunction("tabulated", [g, v](double u) {
      const std::vector<double>& x = *g;
      const std::vector<double>& y = *v;
      if (u <= x.front()) return y.front();
      if (u >= x.back()) return y.back();
      auto it = std::upper_bound(x.begin(), x.end(), u);
      std::size_t k = static_cast<std::size_t>(it - x.begin());  // x[k-1] <= u < x[k]
      if (u == x[k - 1]) return y[k - 1];
      double t = (u - x[k - 1]) / (x[k] - x[k - 1]);
      return y[k - 1] + t * (y[k] - y[k - 1]);
    });
  }

  double operator()(double u) const { return fn_(u); }
  const std::string& label() const { return label_; }

 private:
  WeightFunction(std::string label, std::function<double(double)> fn)
      : label_(std::move(label)), fn_(std::move(fn)) {}

  static std::string format_param(double x) {
    if (x == static_cast<long long>(x))
      return std::to_string(static_cast<long long>(x));
    std::string s = std::to_string(x);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  std::string label_;
  std::function<double(double)> fn_;
};

}  // namespace klrt
