#pragma once

// Minimization of the upper frame bound over the shear and the aspect of a
// lattice of fixed density 2n, and the sweep over reduced binary forms that
// checks minimality of the hexagonal theta function.

#include <vector>

#include "gabor/framebounds.hpp"
#include "gabor/lattice.hpp"

namespace gabor {

/// B for the lattice [[alpha, 0], [alpha gamma, beta]] at density 2n.
double upper_bound_at(double alpha, double beta, double gamma, int n, double eps = kDefaultEps);

/// B(gamma1) - B(gamma2) for fixed alpha, beta, summed term by term so the
/// difference keeps full relative accuracy even when the two values agree to
/// many digits.
double upper_bound_difference(double alpha, double beta, int n, double gamma1, double gamma2,
                              double eps = kDefaultEps);

struct ScanResult {
  std::vector<double> gammas;
  std::vector<double> values;
  double argmin = 0;
  double min_value = 0;
  double argmax = 0;
  double max_value = 0;
};

/// B over one shear period gamma = i (beta/alpha) / samples, i < samples.
ScanResult scan_gamma(double alpha, double beta, int n, int samples);

struct ShearMinimum {
  double gamma_star = 0;
  double upper_star = 0;
  /// False when alpha < 1/(sqrt(2) sqrt(2n)), where the minimizer is not known
  /// to sit at beta/(2 alpha).
  bool hypothesis_holds = true;
};

/// Golden-section minimization of B(gamma) on [0, beta/(2 alpha)].
ShearMinimum minimize_gamma(double alpha, double beta, int n, double tol);

/// Same on an explicit bracket [lo, hi].
ShearMinimum minimize_gamma_on(double alpha, double beta, int n, double lo, double hi, double tol);

struct LatticeMinimum {
  Lattice2D lattice;
  double upper_star = 0;
  int iterations = 0;
  bool hexagonal_equivalent = false;
};

/// Coarse grid over (alpha, gamma) followed by simplex refinement; throws
/// ConvergenceFailure when the simplex needs more than max_iter iterations.
LatticeMinimum minimize_lattice(int n, double tol, int max_iter = 10000);

struct MontgomeryRow {
  double rho = 0;
  int evaluated = 0;
  int violations = 0;
  /// min over the grid of theta_q(rho) - theta_h(rho)
  double min_margin = 0;
  QuadraticFormD min_margin_form;
  /// smallest margin among forms not equivalent to h
  double min_margin_off_hexagonal = 0;
  /// margins <= the equality tolerance at forms not equivalent to h
  int spurious_equalities = 0;
};

struct MontgomeryReport {
  int grid_n = 0;
  double tolerance = 0;
  std::vector<MontgomeryRow> rows;
  bool passed() const;
};

/// Lower end of the reduced-form sweep in the leading coefficient a.
inline constexpr double kMontgomeryMinA = 0.1;

/// The grid_n x grid_n reduced forms with discriminant -1 used by the sweep:
/// a in [kMontgomeryMinA, 1/sqrt 3], b in [sqrt(max(0, 4a^2 - 1)), a],
/// c = (b^2 + 1)/(4a).
std::vector<QuadraticFormD> reduced_form_grid(int grid_n);

MontgomeryReport verify_montgomery(const std::vector<double>& rho_list, int grid_n);

}  // namespace gabor
