#pragma once

// Derivative-free minimizers: golden-section search in 1D and a Nelder-Mead
// simplex for small fixed dimensions.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "gabor/errors.hpp"

namespace gabor {

/// Golden-section search on [lo, hi] driven by a strict ordering.
///
/// `less(a, b)` must return true when f(a) < f(b). Supplying the ordering
/// directly lets callers compare through an accurate difference f(a) - f(b)
/// instead of two rounded values, which matters near flat minima.
template <typename Scalar, typename Less>
Scalar golden_section_by_order(Less&& less, Scalar lo, Scalar hi, Scalar tol, int max_iter = 500) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar a = lo;
  Scalar b = hi;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (less(c, d)) {
      b = d;
      d = c;
      c = b - inv_phi * (b - a);
    } else {
      a = c;
      c = d;
      d = a + inv_phi * (b - a);
    }
  }
  return (a + b) / 2;
}

template <typename Scalar, typename F>
Scalar golden_section(F&& f, Scalar lo, Scalar hi, Scalar tol, int max_iter = 500) {
  return golden_section_by_order([&](Scalar u, Scalar v) { return f(u) < f(v); }, lo, hi, tol,
                                 max_iter);
}

template <typename Scalar, int N>
struct SimplexResult {
  Eigen::Matrix<Scalar, N, 1> argmin;
  Scalar min_value;
  int iterations;
};

/// Nelder-Mead with standard coefficients. Stops once every vertex lies within
/// `tol` (max-norm) of the best one; throws ConvergenceFailure after max_iter.
template <typename Scalar, int N, typename F>
SimplexResult<Scalar, N> nelder_mead(F&& f, const Eigen::Matrix<Scalar, N, 1>& start,
                                     const Eigen::Matrix<Scalar, N, 1>& step, Scalar tol,
                                     int max_iter = 10000) {
  using Point = Eigen::Matrix<Scalar, N, 1>;
  std::array<Point, N + 1> x;
  std::array<Scalar, N + 1> fx;
  x[0] = start;
  for (int i = 0; i < N; ++i) {
    x[i + 1] = start;
    x[i + 1](i) += step(i);
  }
  for (int i = 0; i <= N; ++i) fx[i] = f(x[i]);

  std::array<int, N + 1> order;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i <= N; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return fx[i] < fx[j]; });
    const int best = order[0];
    const int worst = order[N];
    const int second = order[N - 1];

    Scalar size = 0;
    for (int i = 0; i <= N; ++i) size = std::max(size, (x[i] - x[best]).cwiseAbs().maxCoeff());
    if (size <= tol) return {x[best], fx[best], iter};

    Point centroid = Point::Zero();
    for (int i = 0; i <= N; ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= Scalar(N);

    const Point reflected = centroid + (centroid - x[worst]);
    const Scalar fr = f(reflected);
    if (fr < fx[best]) {
      const Point expanded = centroid + 2 * (centroid - x[worst]);
      const Scalar fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = reflected;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const Point contracted =
        outside ? Point(centroid + (reflected - centroid) / 2) : Point(centroid + (x[worst] - centroid) / 2);
    const Scalar fc = f(contracted);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = contracted;
      fx[worst] = fc;
      continue;
    }
    for (int i = 0; i <= N; ++i) {
      if (i == best) continue;
      x[i] = x[best] + (x[i] - x[best]) / 2;
      fx[i] = f(x[i]);
    }
  }
  throw ConvergenceFailure("simplex refinement did not reach the requested tolerance");
}

}  // namespace gabor
