#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "klrt/numerics.hpp"
#include "klrt/risk_table.hpp"
#include "klrt/survival_data.hpp"
#include "klrt/weights.hpp"

namespace klrt {

// ---------------------------------------------------------------------------
// Kernel specifications. All kernels act on [0,1)^2, the scale of the pooled
// Kaplan-Meier left limits.
// ---------------------------------------------------------------------------

// K(u,v) = w(u) w(v); recovers the single weighted log-rank test.
struct WeightedLogRankKernel {
  WeightFunction weight;
};

// K(u,v) = w(u) w(v) 1{u,v in the same cell}, cells partitioning [0,1) into
// k intervals I_0 = [0,1/k], I_j = (j/k,(j+1)/k].
struct PearsonKernel {
  int cells = 4;
  WeightFunction weight = WeightFunction::constant1();
};

// Pearson kernel with each cell divided by the estimated per-cell variance
// sigma_j^2; empty cells contribute zero.
struct NormalizedPearsonKernel {
  int cells = 4;
  WeightFunction weight = WeightFunction::constant1();
};

// K(u,v) = w(u)^T P+ w(v), P the estimated Gram matrix of the basis under
// the data-driven measure; equals the orthonormalized-basis sum kernel.
struct ProjectionKernel {
  std::vector<WeightFunction> basis;
};

struct MedianHeuristic {};

// K(u,v) = exp(-(u-v)^2 / sigma^2).
struct SquaredExponentialKernel {
  std::variant<double, MedianHeuristic> bandwidth = 0.1;
};

using KernelSpec = std::variant<WeightedLogRankKernel, PearsonKernel, NormalizedPearsonKernel,
                                ProjectionKernel, SquaredExponentialKernel>;

inline std::string describe(const KernelSpec& spec) {
  struct Visitor {
    std::string operator()(const WeightedLogRankKernel& k) const {
      return "weighted-log-rank(" + k.weight.label() + ")";
    }
    std::string operator()(const PearsonKernel& k) const {
      return "pearson(k=" + std::to_string(k.cells) + ",w=" + k.weight.label() + ")";
    }
    std::string operator()(const NormalizedPearsonKernel& k) const {
      return "normalized-pearson(k=" + std::to_string(k.cells) + ",w=" + k.weight.label() + ")";
    }
    std::string operator()(const ProjectionKernel& k) const {
      std::string s = "projection(";
      for (std::size_t i = 0; i < k.basis.size(); ++i) {
        if (i) s += ",";
        s += k.basis[i].label();
      }
      return s + ")";
    }
    std::string operator()(const SquaredExponentialKernel& k) const {
      if (std::holds_alternative<MedianHeuristic>(k.bandwidth)) return "sek(sigma=median)";
      std::string s = std::to_string(std::get<double>(k.bandwidth));
      while (!s.empty() && s.back() == '0') s.pop_back();
      if (!s.empty() && s.back() == '.') s.pop_back();
      return "sek(sigma=" + s + ")";
    }
  };
  return std::visit(Visitor{}, spec);
}

// Index of the partition cell containing u: I_0 = [0, 1/k] and
// I_j = (j/k, (j+1)/k] for j >= 1.
inline int pearson_cell(double u, int k) {
  int j = static_cast<int>(std::ceil(u * k)) - 1;
  if (j < 0) j = 0;
  if (j > k - 1) j = k - 1;
  return j;
}

// ---------------------------------------------------------------------------
// Prepared kernels: spec plus any data-dependent fitted state, exposing a
// pure symmetric point evaluation. Immutable after prepare().
// ---------------------------------------------------------------------------

class PreparedKernel {
 public:
  double eval(double u, double v) const {
    switch (spec_.index()) {
      case 0: {
        const WeightFunction& w = std::get<WeightedLogRankKernel>(spec_).weight;
        return w(u) * w(v);
      }
      case 1: {
        const PearsonKernel& k = std::get<PearsonKernel>(spec_);
        if (pearson_cell(u, k.cells) != pearson_cell(v, k.cells)) return 0.0;
        return k.weight(u) * k.weight(v);
      }
      case 2: {
        const NormalizedPearsonKernel& k = std::get<NormalizedPearsonKernel>(spec_);
        int cu = pearson_cell(u, k.cells);
        if (cu != pearson_cell(v, k.cells)) return 0.0;
        return k.weight(u) * k.weight(v) * inv_cell_variance_[cu];
      }
      case 3: {
        // canonical argument order keeps eval(u,v) bit-identical to eval(v,u)
        if (u > v) std::swap(u, v);
        const std::vector<WeightFunction>& basis = std::get<ProjectionKernel>(spec_).basis;
        const int k = static_cast<int>(basis.size());
        double total = 0.0;
        for (int a = 0; a < k; ++a) {
          double row = 0.0;
          for (int b = 0; b < k; ++b) row += projection_pinv_->at(a, b) * basis[b](v);
          total += basis[a](u) * row;
        }
        return total;
      }
      case 4: {
        double d = u - v;
        return std::exp(-(d * d) / (sigma_ * sigma_));
      }
    }
    return 0.0;
  }

  const KernelSpec& spec() const { return spec_; }

  // Resolved SEK bandwidth (meaningful for squared-exponential kernels).
  double bandwidth() const { return sigma_; }

  // Fitted per-cell variances of a normalized Pearson kernel.
  const std::vector<double>& cell_variances() const { return cell_variance_; }

 private:
  friend PreparedKernel prepare(const KernelSpec&, const SurvivalDataset&, const RiskTable&);

  explicit PreparedKernel(KernelSpec spec) : spec_(std::move(spec)) {}

  KernelSpec spec_;
  std::vector<double> cell_variance_;      // normalized Pearson: sigma_j^2
  std::vector<double> inv_cell_variance_;  // 1/sigma_j^2, 0 for empty cells
  std::shared_ptr<const SymmetricMatrix> projection_pinv_;
  double sigma_ = 0.0;
};

namespace detail {

// Median of pairwise |fleft_i - fleft_j| over i < j; 0.1 when the median is
// zero (all transformed values tied).
inline double median_heuristic_bandwidth(const RiskTable& rt) {
  const int n = rt.size();
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diffs.push_back(std::abs(rt.f_left(i) - rt.f_left(j)));
  if (diffs.empty()) return 0.1;
  std::sort(diffs.begin(), diffs.end());
  std::size_t m = diffs.size();
  double med = (m % 2 == 1) ? diffs[m / 2] : 0.5 * (diffs[m / 2 - 1] + diffs[m / 2]);
  return med > 0.0 ? med : 0.1;
}

}  // namespace detail

inline PreparedKernel prepare(const KernelSpec& spec, const SurvivalDataset& ds,
                              const RiskTable& rt) {
  PreparedKernel pk(spec);
  const int n = ds.n();

  if (const auto* pearson = std::get_if<PearsonKernel>(&spec)) {
    if (pearson->cells < 1) throw Error("bad_kernel_spec", "Pearson kernel needs k >= 1");
  } else if (const auto* norm = std::get_if<NormalizedPearsonKernel>(&spec)) {
    if (norm->cells < 1) throw Error("bad_kernel_spec", "Pearson kernel needs k >= 1");
    // sigma_j^2 = n/(n0 n1) sum over events with F(X-) in I_j of
    //             w(F(X-))^2 L(X)/Y(X)
    const double scale = static_cast<double>(n) / (static_cast<double>(ds.n0()) * ds.n1());
    pk.cell_variance_.assign(norm->cells, 0.0);
    for (int i = 0; i < n; ++i) {
      if (!ds[i].event) continue;
      double u = rt.f_left(i);
      double w = norm->weight(u);
      pk.cell_variance_[pearson_cell(u, norm->cells)] +=
          scale * w * w * rt.l_at(i) / rt.y_at(i);
    }
    pk.inv_cell_variance_.assign(norm->cells, 0.0);
    for (int j = 0; j < norm->cells; ++j)
      if (pk.cell_variance_[j] > 0.0) pk.inv_cell_variance_[j] = 1.0 / pk.cell_variance_[j];
  } else if (const auto* proj = std::get_if<ProjectionKernel>(&spec)) {
    if (proj->basis.empty()) throw Error("empty_basis", "projection kernel needs basis functions");
    const int k = static_cast<int>(proj->basis.size());
    const double scale = static_cast<double>(n) / (static_cast<double>(ds.n0()) * ds.n1());
    SymmetricMatrix p_hat(k);
    for (int i = 0; i < n; ++i) {
      if (!ds[i].event) continue;
      double u = rt.f_left(i);
      double mass = scale * rt.l_at(i) / rt.y_at(i);
      std::vector<double> w(k);
      for (int a = 0; a < k; ++a) w[a] = proj->basis[a](u);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b <= a; ++b) p_hat.at(a, b) += mass * w[a] * w[b];
    }
    pk.projection_pinv_ =
        std::make_shared<const SymmetricMatrix>(pseudo_inverse(p_hat, 1e-10));
  } else if (const auto* sek = std::get_if<SquaredExponentialKernel>(&spec)) {
    if (std::holds_alternative<MedianHeuristic>(sek->bandwidth)) {
      pk.sigma_ = detail::median_heuristic_bandwidth(rt);
    } else {
      double s = std::get<double>(sek->bandwidth);
      if (!(s > 0.0)) throw Error("zero_bandwidth", "explicit bandwidth must be > 0");
      pk.sigma_ = s;
    }
  }
  return pk;
}

// n x n Gram matrix of eval over a point set in [0,1).
inline SymmetricMatrix gram_matrix(const PreparedKernel& pk, const std::vector<double>& points) {
  if (points.empty()) throw Error("empty_list", "gram_matrix needs at least one point");
  for (double p : points)
    if (!(p >= 0.0 && p < 1.0))
      throw Error("point_out_of_range", "kernel arguments must lie in [0,1)");
  const int m = static_cast<int>(points.size());
  SymmetricMatrix g(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) g.at(i, j) = pk.eval(points[i], points[j]);
  return g;
}

}  // namespace klrt
