#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "gabor/framebounds.hpp"
#include "test_support.hpp"

using namespace gabor;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRoot2 = std::sqrt(2.0);

// 30-digit reference values (mpmath direct summation)
constexpr double kSquareB = 2.3606811980321924521;
constexpr double kSquareA = 1.6692536833481463726;
constexpr double kHexB = 2.3191905339278567315;
constexpr double kHexRatio = 1.2599210498948731648;

double max_route_gap(const GaborConfig& cfg) {
  const double r0 = upper_bound_even(cfg).value;
  const double r1 = upper_bound_theta_route(cfg).value;
  const double r2 = upper_bound_ambiguity_route(cfg).value;
  return std::max({std::abs(r0 - r1), std::abs(r0 - r2), std::abs(r1 - r2)});
}

double bound_at(double alpha, double beta, double gamma, int n) {
  return upper_bound_even(GaborConfig::make(Lattice2D::from_params(alpha, beta, gamma), n)).value;
}

}  // namespace

TEST_CASE("GaborConfig density checks") {
  CHECK(GaborConfig::make(square(1), 1).density() == 2);
  CHECK(GaborConfig::for_lattice(hexagonal(3)).n() == 3);
  CHECK_THROWS_AS(GaborConfig::make(square(1), 2), DensityMismatch);
  CHECK_THROWS_AS(GaborConfig::for_lattice(Lattice2D::from_params(1.0, 1.0, 0.0)), DensityMismatch);
  CHECK_THROWS_AS(GaborConfig::for_lattice(Lattice2D::from_params(1.0, 1.0 / 3, 0.0)), DensityMismatch);
  CHECK_THROWS_AS(GaborConfig::make(Lattice2D::from_params(0.7071, 0.7071, 0.0), 1), DensityMismatch);
}

TEST_CASE("ambiguity function of the Gaussian") {
  CHECK(ambiguity_gaussian(0, 0) == 1.0);
  CHECK(ambiguity_gaussian(1, 0) == Approx(0.20787957635076190855).epsilon(1e-15));
  CHECK(ambiguity_gaussian(0.3, 1.7) == ambiguity_gaussian(1.7, 0.3));
}

TEST_CASE("Janssen coefficients") {
  const double a = 1 / kRoot2;
  CHECK(janssen_coefficient(0, 0, a, a, 0.0) == std::complex<double>(1.0, 0.0));
  const auto c10 = janssen_coefficient(1, 0, a, a, 0.0);
  CHECK(c10.real() == Approx(0.04321391826377224977).epsilon(1e-15));
  CHECK(c10.imag() == 0.0);
  const auto c11 = janssen_coefficient(1, 1, a, a, 0.0);
  CHECK(c11.real() == Approx(std::exp(-2 * kPi)).epsilon(1e-14));
    // kl / (alpha beta) = 2 up to rounding of alpha beta
  CHECK(std::abs(c11.imag()) < 1e-14 * std::abs(c11.real()));
  // odd product kl / (alpha beta) at density 1 flips the sign
  const auto odd = janssen_coefficient(1, 1, 1.0, 1.0, 0.0);
  CHECK(odd.real() == Approx(-std::exp(-kPi)).epsilon(1e-14));
}

TEST_CASE("Fourier series F") {
  const auto sq = GaborConfig::make(square(1), 1);
  CHECK(fourier_series_F(0, 0, sq) == Approx(kSquareB).epsilon(1e-14));
  CHECK(fourier_series_F(0.5, 0.5, sq) == Approx(kSquareA).epsilon(1e-14));
  CHECK_THROWS_AS(fourier_series_F(0, 0, sq, 0.0), NonPositiveParameter);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cfg = GaborConfig::make(testing::random_even_lattice(1 + trial % 2), 1 + trial % 2);
    const double x = testing::uniform(0, 1);
    const double w = testing::uniform(0, 1);
    const double f = fourier_series_F(x, w, cfg);
    CHECK(fourier_series_F(x + 1, w, cfg) == Approx(f).epsilon(1e-13));
    CHECK(fourier_series_F(x, w + 1, cfg) == Approx(f).epsilon(1e-13));
    CHECK(fourier_series_F(-x, -w, cfg) == Approx(f).epsilon(1e-13));
  }
}

TEST_CASE("upper bound routes on the reference lattices") {
  const auto sq = GaborConfig::make(square(1), 1);
  const auto hx = GaborConfig::make(hexagonal(1), 1);
  const double gamma34 = std::tgamma(0.75);
  CHECK(upper_bound_even(sq).value == Approx(2 * std::sqrt(kPi) / (gamma34 * gamma34)).epsilon(1e-14));
  for (const auto& route : {upper_bound_even(sq), upper_bound_theta_route(sq), upper_bound_ambiguity_route(sq)}) {
    CHECK(route.value == Approx(kSquareB).epsilon(1e-14));
    CHECK(route.truncation.certified_tail <= kDefaultEps);
  }
  for (const auto& route : {upper_bound_even(hx), upper_bound_theta_route(hx), upper_bound_ambiguity_route(hx)}) {
    CHECK(route.value == Approx(kHexB).epsilon(1e-14));
  }
  const auto lat = hexagonal(1);
  const double shifted =
      upper_bound_even(GaborConfig::make(Lattice2D::from_params(lat.alpha(), lat.beta(),
                                                                 lat.gamma() + lat.shear_period()), 1))
          .value;
  CHECK(shifted == Approx(kHexB).epsilon(1e-14));
}

TEST_CASE("theta route evaluates both sides of the modular identity") {
  for (int n : {1, 2, 3}) {
    const auto cfg = GaborConfig::make(testing::random_even_lattice(n), n);
    const auto q = quadratic_form(cfg.lattice());
    const double at_inverse = 2 * lattice_theta(q, 1.0 / n).value;
    const double at_n = 2.0 * n * lattice_theta(q, static_cast<double>(n)).value;
    CHECK(std::abs(at_inverse - at_n) < 1e-12);
    CHECK(upper_bound_theta_route(cfg).value == Approx(at_inverse).epsilon(1e-15));
  }
}

TEST_CASE("single-term truncation guard") {
  // volume far from 1/(2n): only the origin survives the tail bound
  const auto huge = GaborConfig::unchecked(Lattice2D::from_params(10.0, 10.0, 0.0), 1);
  const auto b = upper_bound_ambiguity_route(huge);
  CHECK(b.value == 2.0);
  CHECK(b.truncation.radius == 1);
}

TEST_CASE("three-route agreement on random lattices") {
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2;
    const auto cfg = GaborConfig::make(testing::random_even_lattice(n), n);
    worst = std::max(worst, max_route_gap(cfg));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("SL(2,Z) invariance of the upper bound") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2;
    const auto lat = testing::random_even_lattice(n);
    IntMatrix2 m;
    do {
      m << static_cast<std::int64_t>(testing::uniform(-5, 6)), static_cast<std::int64_t>(testing::uniform(-5, 6)),
          static_cast<std::int64_t>(testing::uniform(-5, 6)), static_cast<std::int64_t>(testing::uniform(-5, 6));
    } while (m.determinant() != 1);
    const auto moved = GaborConfig::make(rebase(lat, m), n);
    const auto base = GaborConfig::make(lat, n);
    CHECK(std::abs(upper_bound_even(moved).value - upper_bound_even(base).value) < 1e-11);
    CHECK(std::abs(upper_bound_ambiguity_route(moved).value - upper_bound_theta_route(base).value) < 1e-11);
  }
}

TEST_CASE("shear periodicity, symmetry and rectangular maximality") {
  for (const int n : {1, 2}) {
    const double alpha = 0.8 / std::sqrt(2.0 * n);
    const double beta = 1 / (2.0 * n * alpha);
    const double period = beta / alpha;
    for (int i = 0; i < 20; ++i) {
      const double t = period / 2 * i / 20;
      const double g = period * i / 20;
      CHECK(std::abs(bound_at(alpha, beta, g + period, n) - bound_at(alpha, beta, g, n)) < 1e-11);
      CHECK(std::abs(bound_at(alpha, beta, period / 2 + t, n) - bound_at(alpha, beta, period / 2 - t, n)) < 1e-11);
    }
    const double rectangular = bound_at(alpha, beta, 0.0, n);
    for (int i = 1; i < 50; ++i) CHECK(bound_at(alpha, beta, period * i / 50, n) < rectangular);
  }
}

TEST_CASE("hexagonal lattice minimizes the upper bound at density 2") {
  const double hex = upper_bound_even(GaborConfig::make(hexagonal(1), 1)).value;
  const auto h = hexagonal_form<double>();
  for (int i = 0; i < 30; ++i) {
    const double alpha = 0.4 + 1.2 * i / 29;
    const double beta = 0.5 / alpha;
    for (int j = 0; j < 30; ++j) {
      const auto lat = Lattice2D::from_params(alpha, beta, beta / alpha * j / 30);
      const double b = upper_bound_even(GaborConfig::make(lat, 1)).value;
      CHECK(b >= hex - 1e-12);
      if (b < hex + 1e-12) CHECK(forms_equivalent(quadratic_form(lat), h, 1e-9));
    }
  }
}

TEST_CASE("F is real, positive and maximal at the origin") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    const auto cfg = GaborConfig::make(testing::random_even_lattice(n), n);
    const double top = upper_bound_even(cfg).value;
    const int grid = 16;
    double best = -1;
    TorusPoint at;
    double lowest = top;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double f = fourier_series_F(static_cast<double>(i) / grid, static_cast<double>(j) / grid, cfg);
        lowest = std::min(lowest, f);
        if (f > best) {
          best = f;
          at = {static_cast<double>(i) / grid, static_cast<double>(j) / grid};
        }
      }
    }
    CHECK(lowest > 0);
    CHECK(at.x == 0.0);
    CHECK(at.omega == 0.0);
    CHECK(best == Approx(top).epsilon(1e-13));
  }
}

TEST_CASE("grid lower bound") {
  const auto sq = lower_bound_grid(GaborConfig::make(square(1), 1));
  CHECK(sq.value == Approx(kSquareA).epsilon(1e-13));
  CHECK(std::abs(sq.argmin.x - 0.5) < 1e-9);
  CHECK(std::abs(sq.argmin.omega - 0.5) < 1e-9);

  const auto hx = lower_bound_grid(GaborConfig::make(hexagonal(1), 1));
  CHECK(hx.value == Approx(hexagonal_red2_bounds().lower).epsilon(1e-13));
  const auto mirrored = mirror_frequency(hx.argmin);
  CHECK(std::abs(mirrored.x - 1.0 / 3) < 1e-9);
  CHECK(std::abs(mirrored.omega - 1.0 / 3) < 1e-9);

  for (int trial = 0; trial < 5; ++trial) {
    const auto cfg = GaborConfig::make(testing::random_even_lattice(2), 2);
    const auto m = lower_bound_grid(cfg, 32);
    CHECK(m.value > 0);
    CHECK(m.value <= upper_bound_even(cfg).value);
    // refinement lands on a point no coarse grid sample beats
    CHECK(m.value <= lower_bound_grid(cfg, 16).value + 1e-12);
  }
  CHECK_THROWS_AS(lower_bound_grid(GaborConfig::make(square(1), 1), 7), GridTooCoarse);
}

TEST_CASE("closed forms at redundancy 2") {
  const auto sq = closed_form_square_red2();
  CHECK(sq.upper == Approx(kSquareB).epsilon(1e-14));
  CHECK(sq.lower == Approx(kSquareA).epsilon(1e-14));
  CHECK(std::abs(sq.condition() - kRoot2) < 1e-13);
  CHECK(std::abs(sq.upper * sq.upper - 2 * sq.lower * sq.lower) < 1e-12);
  CHECK(std::tgamma(0.75) == Approx(1.2254167024651776451).epsilon(1e-15));

  const auto hx = hexagonal_red2_bounds();
  CHECK(std::abs(hx.condition() - std::cbrt(2.0)) < 1e-12);
  CHECK(hx.condition() == Approx(1.2599).epsilon(1e-4));
  CHECK(hx.upper == Approx(kHexB).epsilon(1e-14));
  CHECK(hx.lower / 2 == Approx(cubic_theta(CubicKind::c, 2 * kPi / std::sqrt(3.0))).epsilon(1e-13));
}

TEST_CASE("report") {
  const auto sq = report(GaborConfig::make(square(1), 1));
  CHECK(sq.lower_source == LowerBoundSource::closed_form);
  CHECK(sq.condition == Approx(kRoot2).epsilon(1e-13));
  CHECK(sq.lower_grid == Approx(sq.lower).epsilon(1e-12));
  CHECK(sq.route_spread < 1e-11);

  const auto hx = report(GaborConfig::make(hexagonal(1), 1));
  CHECK(hx.lower_source == LowerBoundSource::closed_form);
  CHECK(hx.condition == Approx(kHexRatio).epsilon(1e-12));
  CHECK(hx.argmax.x == 0.0);
  CHECK(hx.argmax.omega == 0.0);

  // a rotated square lattice is still recognised
  const double c = std::cos(0.4), s = std::sin(0.4), a = 1 / kRoot2;
  const auto rotated = report(GaborConfig::make(from_matrix(c * a, -s * a, s * a, c * a), 1));
  CHECK(rotated.lower_source == LowerBoundSource::closed_form);

  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 3;
    const auto r = report(GaborConfig::make(testing::random_even_lattice(n), n), 32);
    CHECK(r.lower_source == LowerBoundSource::grid);
    CHECK(r.lower > 0);
    CHECK(r.lower <= r.upper);
    CHECK(r.condition == Approx(r.upper / r.lower).epsilon(1e-15));
    double tails = 0;
    for (const auto& route : r.routes) tails += route.truncation.certified_tail;
    CHECK(r.route_spread < 1e-11);
    // the tails can sit far below one ulp of B; rounding of the sums is allowed on top
    const double rounding = 4 * std::numeric_limits<double>::epsilon() * r.upper;
    INFO("spread ", r.route_spread, " tails ", tails);
    CHECK(r.route_spread <= 3 * (tails + rounding));
    CHECK(r.grid_n == 32);
    CHECK(r.grid_resolution == Approx(1.0 / 32));
  }
  CHECK(to_string(LowerBoundSource::grid) == "grid");
  CHECK(to_string(LowerBoundSource::closed_form) == "closed_form");
}

TEST_CASE("Montgomery vartheta reproduces the upper bound of a sheared lattice") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const double alpha = testing::uniform(1.0, 2.0) / (2 * std::sqrt(static_cast<double>(n)));
    const double beta = 1 / (2.0 * n * alpha);
    const double gamma = testing::uniform(0.01, 0.49) * beta / alpha;
    const double via_vartheta =
        2.0 * n * montgomery_vartheta(gamma * alpha / beta, 2 * alpha * alpha * n, static_cast<double>(n)).value;
    CHECK(via_vartheta == Approx(bound_at(alpha, beta, gamma, n)).epsilon(1e-13));
  }
}
