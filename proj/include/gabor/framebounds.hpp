#pragma once

// Sharp frame bounds of the Gabor system G(g0, L) with the standard Gaussian
// g0(t) = 2^{1/4} exp(-pi t^2) and a lattice L of density 2n.
//
// The bounds are the extrema over the torus of
//
//   F(x, w) = (1/(alpha beta)) sum_{k,l} <g, M_{l/alpha} T_{k/beta} g> e^{2 pi i (k x + l w)}
//
// for the chirped window g = g_{-gamma} on the rectangular lattice; at even
// density every coefficient is a positive Gaussian, F is real, and its maximum
// sits at the origin. The upper bound is computed along three independent
// series so each can cross-check the others.

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

#include "gabor/lattice.hpp"
#include "gabor/theta.hpp"

namespace gabor {

/// Lattice of density 2n paired with the standard Gaussian window.
class GaborConfig {
public:
  /// Throws DensityMismatch unless vol(lattice) = 1/(2n) within 1e-12 relative.
  static GaborConfig make(const Lattice2D& lattice, int n);

  /// Infers n from the lattice density; throws DensityMismatch for odd or
  /// fractional density.
  static GaborConfig for_lattice(const Lattice2D& lattice);

  /// No density check. Only meant for tests of the truncation machinery.
  static GaborConfig unchecked(const Lattice2D& lattice, int n);

  const Lattice2D& lattice() const { return lattice_; }
  int n() const { return n_; }
  double density() const { return 2.0 * n_; }

private:
  GaborConfig(const Lattice2D& lattice, int n) : lattice_(lattice), n_(n) {}

  Lattice2D lattice_;
  int n_;
};

struct TorusPoint {
  double x = 0;
  double omega = 0;
};

/// A(g0)(x, w) = exp(-pi/2 (x^2 + w^2)).
double ambiguity_gaussian(double x, double omega);

/// <g_{-gamma}, M_{l/alpha} T_{k/beta} g_{-gamma}>
///   = exp(-pi i k l / (alpha beta)) exp(-pi/2 (k^2/beta^2 + (l/alpha + k gamma/beta)^2)).
std::complex<double> janssen_coefficient(std::int64_t k, std::int64_t l, double alpha, double beta,
                                         double gamma);

/// F(x, w) with certified truncation; periodic with period 1 in both arguments.
double fourier_series_F(double x, double omega, const GaborConfig& cfg, double eps = kDefaultEps);

/// B = 2n sum exp(-pi/2 (k^2/beta^2 + l^2/alpha^2)) exp(-pi/2 (k^2 gamma^2/beta^2 - 2 k l gamma/(alpha beta))).
SeriesValue<double> upper_bound_even(const GaborConfig& cfg, double eps = kDefaultEps);

/// B = 2 theta_q(1/n), cross-checked against 2n theta_q(n); q the normalized lattice form.
SeriesValue<double> upper_bound_theta_route(const GaborConfig& cfg, double eps = kDefaultEps);

/// B = 2 sum over lattice points of A(g0)(2 lambda).
SeriesValue<double> upper_bound_ambiguity_route(const GaborConfig& cfg, double eps = kDefaultEps);

struct GridMinimum {
  double value = 0;
  TorusPoint argmin;
};

inline constexpr int kDefaultGrid = 96;

/// Minimum of F over a grid_n x grid_n torus grid, refined by local descent.
/// The value is an upper estimate of the lower frame bound A.
GridMinimum lower_bound_grid(const GaborConfig& cfg, int grid_n = kDefaultGrid,
                             double eps = kDefaultEps);

struct BoundPair {
  double lower = 0;
  double upper = 0;
  double condition() const { return upper / lower; }
};

/// Square lattice at redundancy 2 through Gamma(3/4).
BoundPair closed_form_square_red2();

/// Hexagonal lattice at redundancy 2: A = 2 b(q), B = 2 a(q), q = exp(-2 pi / sqrt 3).
BoundPair hexagonal_red2_bounds();

enum class LowerBoundSource { closed_form, grid };

std::string_view to_string(LowerBoundSource source);

struct FrameBoundReport {
  double upper = 0;
  /// Sharp A when the lattice is the square or hexagonal one at density 2,
  /// otherwise the refined grid minimum of F.
  double lower = 0;
  LowerBoundSource lower_source = LowerBoundSource::grid;
  double lower_grid = 0;
  double condition = 0;
  int grid_n = 0;
  double grid_resolution = 0;
  TorusPoint argmax;
  TorusPoint argmin;
  /// upper_bound_even, upper_bound_theta_route, upper_bound_ambiguity_route.
  std::array<SeriesValue<double>, 3> routes;
  double route_spread = 0;
  TruncationSpec<double> truncation;
};

FrameBoundReport report(const GaborConfig& cfg, int grid_n = kDefaultGrid, double eps = kDefaultEps);

/// Maps a point of F for the stored lattice to the coordinates of its mirror
/// image (shear -gamma): (x, w) -> (x, -w mod 1).
TorusPoint mirror_frequency(TorusPoint p);

}  // namespace gabor
