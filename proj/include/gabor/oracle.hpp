#pragma once

// Independent checks of the closed forms: quadrature of the defining inner
// products, naive summation of F, exhaustive grid extrema, and both sides of
// the Poisson-summation identity behind b(q) = c(q).
//
// Nothing here shares code with the certified series evaluation beyond the
// radius selection, so agreement between the two is meaningful.

#include <complex>
#include <cstdint>

#include "gabor/framebounds.hpp"

namespace gabor::oracle {

struct QuadratureSpec {
  /// integration interval is [-half_width, half_width]
  double half_width = 0;
  int nodes = 0;
  /// |I(2N) - I(N)| at acceptance
  double residual = 0;
};

struct QuadratureValue {
  std::complex<double> value;
  QuadratureSpec spec;
};

inline constexpr double kQuadratureTol = 1e-10;

/// <g_{-gamma}, M_{l/alpha} T_{k/beta} g_{-gamma}> by composite Gauss-Legendre
/// quadrature of the defining integral, doubling the node count from 400
/// until two successive results agree within 1e-10.
QuadratureValue inner_product_quadrature(std::int64_t k, std::int64_t l, double alpha, double beta,
                                         double gamma);

/// Naive (1/(alpha beta)) sum_{|k|,|l| <= radius} of Janssen coefficients times
/// e^{2 pi i (k x + l w)}; the real part.
double brute_force_F(double x, double omega, const GaborConfig& cfg, int radius);

struct GridExtrema {
  double min = 0;
  TorusPoint argmin;
  double max = 0;
  TorusPoint argmax;
};

/// Exhaustive scan of brute_force_F on (i/grid_n, j/grid_n). Ties within a few
/// ulps keep the first point in (x, omega) lexicographic order.
GridExtrema grid_extrema(const GaborConfig& cfg, int grid_n, int radius = 50);

struct PoissonCheck {
  double lhs = 0;
  double lhs_imag = 0;
  double rhs = 0;
  bool pass = false;
};

/// sum exp(-(2pi/sqrt3)(k^2 - kl + l^2)) e^{-2 pi i (k+l)/3}
///   = sum exp(-(2pi/sqrt3)((k+1/3)^2 + (k+1/3)(l+1/3) + (l+1/3)^2)).
PoissonCheck poisson_bc_check(double tolerance);

}  // namespace gabor::oracle
