#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "klrt/errors.hpp"

namespace klrt {

// Dense symmetric matrix in packed lower-triangular storage.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim)
      : dim_(dim), a_(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0) {
    if (dim < 1) throw Error("bad_dimension", "matrix dimension must be >= 1");
  }

  int dim() const { return dim_; }

  double& at(int i, int j) { return a_[index(i, j)]; }
  double at(int i, int j) const { return a_[index(i, j)]; }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

 private:
  std::size_t index(int i, int j) const {
    if (j > i) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int dim_;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;   // unordered
  std::vector<double> vectors;  // column k = vectors[k*n .. k*n+n-1]
};

// Cyclic Jacobi eigendecomposition. Intended for the small matrices this
// library needs (projection bases, Gram checks); O(n^3) per sweep.
inline EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, int max_sweeps = 64) {
  const int n = m.dim();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m.at(i, j);
  }
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  if (frob == 0.0 || n == 1) {
    EigenDecomposition d;
    d.values.resize(n);
    for (int i = 0; i < n; ++i) d.values[i] = A(i, i);
    d.vectors = std::move(v);
    return d;
  }

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * A(p, q) * A(p, q);
    if (std::sqrt(off) <= 1e-15 * frob) {
      EigenDecomposition d;
      d.values.resize(n);
      for (int i = 0; i < n; ++i) d.values[i] = A(i, i);
      d.vectors.resize(static_cast<std::size_t>(n) * n);
      // store eigenvector k contiguously
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          d.vectors[static_cast<std::size_t>(k) * n + i] = v[static_cast<std::size_t>(i) * n + k];
      return d;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(p, k) = A(k, p);
          A(k, q) = s * akp + c * akq;
          A(q, k) = A(k, q);
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v[static_cast<std::size_t>(k) * n + p];
          double vkq = v[static_cast<std::size_t>(k) * n + q];
          v[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
          v[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  throw Error("eigen_failure", "Jacobi iteration did not converge");
}

// Moore-Penrose pseudo-inverse of a symmetric matrix. Eigenvalues below
// rel_tol times the largest magnitude are treated as zero.
inline SymmetricMatrix pseudo_inverse(const SymmetricMatrix& m, double rel_tol = 1e-10) {
  if (rel_tol <= 0.0) throw Error("bad_tolerance", "rel_tol must be > 0");
  const int n = m.dim();
  EigenDecomposition d = jacobi_eigen(m);
  double max_abs = 0.0;
  for (double lam : d.values) max_abs = std::max(max_abs, std::abs(lam));
  SymmetricMatrix out(n);
  if (max_abs == 0.0) return out;
  for (int k = 0; k < n; ++k) {
    double lam = d.values[k];
    if (std::abs(lam) < rel_tol * max_abs) continue;
    double inv = 1.0 / lam;
    const double* vk = &d.vectors[static_cast<std::size_t>(k) * n];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) out.at(i, j) += inv * vk[i] * vk[j];
  }
  return out;
}

// Smallest eigenvalue, for positive-semidefiniteness checks.
inline double min_eigenvalue(const SymmetricMatrix& m) {
  EigenDecomposition d = jacobi_eigen(m);
  return *std::min_element(d.values.begin(), d.values.end());
}

// Bisection on a bracketing interval. Stops when |f| < tol or the interval
// shrinks below tol; at most max_iter halvings.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol, int max_iter = 200) {
  if (tol <= 0.0) throw Error("bad_tolerance", "tol must be > 0");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error("no_bracket", "f(lo) and f(hi) have the same sign");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (std::abs(fm) < tol || (hi - lo) * 0.5 < tol) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  throw Error("max_iterations", "bisection did not converge within iteration budget");
}

// Empirical quantile: sorted-order statistic at 1-based index ceil(q*N).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("empty_list", "quantile of an empty list");
  if (!(q > 0.0 && q < 1.0)) throw Error("bad_quantile", "q must lie in (0,1)");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  if (k < 1) k = 1;
  if (k > n) k = n;
  return values[k - 1];
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw Error("quadrature_failure", "integrand is not finite");
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  // depth cap: accept the refined estimate; by then the subinterval is so
  // narrow (2^-60 of the range) that weak endpoint singularities cannot
  // contribute at the requested tolerance
  if (std::abs(delta) <= 15.0 * tol || depth > 60)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Simpson quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw Error("quadrature_failure", "integrand is not finite");
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace klrt
