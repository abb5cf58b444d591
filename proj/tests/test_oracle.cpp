#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gabor/oracle.hpp"
#include "test_support.hpp"

using namespace gabor;
using namespace gabor::oracle;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvRoot2 = 1 / std::sqrt(2.0);

}  // namespace

TEST_CASE("quadrature of the defining inner product") {
  for (const double gamma : {0.0, 0.3, -1.2}) {
    const auto one = inner_product_quadrature(0, 0, 0.7, 0.9, gamma);
    CHECK(std::abs(one.value - std::complex<double>(1.0, 0.0)) < 1e-12);
  }
  const auto c10 = inner_product_quadrature(1, 0, kInvRoot2, kInvRoot2, 0.0);
  CHECK(std::abs(c10.value - std::exp(-kPi)) < 1e-10);
  CHECK(c10.spec.residual < kQuadratureTol);
  CHECK(c10.spec.nodes >= 400);
  CHECK(c10.spec.half_width >= 6);

  // value fixed once from this quadrature: 5.06002231153592531e-14, real
  const auto c12 = inner_product_quadrature(1, 2, 0.5, 1.0, 0.3);
  CHECK(std::abs(c12.value - janssen_coefficient(1, 2, 0.5, 1.0, 0.3)) < 1e-10);
  CHECK(std::abs(c12.value.real() - 5.06002231153592531e-14) < 1e-15);

  CHECK_THROWS_AS(inner_product_quadrature(1, 0, 0.0, 1.0, 0.0), NonPositiveParameter);
}

TEST_CASE("quadrature agrees with the closed form on a sweep") {
  struct Params {
    double alpha, beta, gamma;
  };
  for (const Params p : {Params{kInvRoot2, kInvRoot2, 0.0}, Params{0.5, 1.0, 0.3}, Params{0.8, 0.3125, -0.7}}) {
    for (int k = -2; k <= 2; ++k) {
      for (int l = -2; l <= 2; ++l) {
        const auto q = inner_product_quadrature(k, l, p.alpha, p.beta, p.gamma);
        INFO("k=", k, " l=", l, " alpha=", p.alpha);
        CHECK(std::abs(q.value - janssen_coefficient(k, l, p.alpha, p.beta, p.gamma)) < 1e-10);
      }
    }
  }
}

TEST_CASE("brute-force F") {
  const auto sq = GaborConfig::make(square(1), 1);
  CHECK(brute_force_F(0, 0, sq, 50) == Approx(2.3606811980321924521).epsilon(1e-14));

  for (int trial = 0; trial < 5; ++trial) {
    const auto cfg = GaborConfig::make(testing::random_even_lattice(1), 1);
    double previous = 0;
    for (const int r : {1, 2, 5, 50}) {
      const double v = brute_force_F(0, 0, cfg, r);
      CHECK(v >= previous);
      previous = v;
    }
  }

  const auto hx = GaborConfig::make(hexagonal(1), 1);
  const auto at = mirror_frequency({1.0 / 3, 1.0 / 3});
  CHECK(brute_force_F(at.x, at.omega, hx, 50) == Approx(hexagonal_red2_bounds().lower).epsilon(1e-13));
}

TEST_CASE("certified F agrees with the naive sum") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2;
    const auto cfg = GaborConfig::make(testing::random_even_lattice(n), n);
    const double x = testing::uniform(0, 1);
    const double w = testing::uniform(0, 1);
    CHECK(std::abs(fourier_series_F(x, w, cfg) - brute_force_F(x, w, cfg, 50)) < 1e-11);
  }
}

TEST_CASE("exhaustive grid extrema") {
  const auto sq = grid_extrema(GaborConfig::make(square(1), 1), 96);
  CHECK(sq.argmin.x == 0.5);
  CHECK(sq.argmin.omega == 0.5);
  CHECK(sq.argmax.x == 0.0);
  CHECK(sq.argmax.omega == 0.0);
  CHECK(sq.min == Approx(1.6692536833481463726).epsilon(1e-13));

  const auto hx = grid_extrema(GaborConfig::make(hexagonal(1), 1), 96);
  const auto mirrored = mirror_frequency(hx.argmin);
  CHECK(std::abs(mirrored.x - 1.0 / 3) <= 1.0 / 96);
  CHECK(std::abs(mirrored.omega - 1.0 / 3) <= 1.0 / 96);
  CHECK(hx.argmax.x == 0.0);
  CHECK(hx.argmax.omega == 0.0);

  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    const auto e = grid_extrema(GaborConfig::make(testing::random_even_lattice(n), n), 24, 20);
    CHECK(e.argmax.x == 0.0);
    CHECK(e.argmax.omega == 0.0);
    CHECK(e.min > 0);
  }
  CHECK_THROWS_AS(grid_extrema(GaborConfig::make(square(1), 1), 7), GridTooCoarse);
}

TEST_CASE("Poisson summation behind b = c") {
  const auto check = poisson_bc_check(1e-12);
  CHECK(check.pass);
  CHECK(std::abs(check.lhs_imag) < 1e-13);
  CHECK(check.lhs == Approx(0.92037137331794249766).epsilon(1e-13));
  const double c = cubic_theta(CubicKind::c, 2 * kPi / std::sqrt(3.0));
  CHECK(std::abs(check.lhs - c) < 1e-12);
  CHECK(std::abs(check.rhs - c) < 1e-12);
}
