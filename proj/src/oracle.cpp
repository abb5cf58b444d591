#include "gabor/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace gabor::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelOrder = 20;
constexpr int kBaseNodes = 400;
constexpr int kMaxDoublings = 8;

/// Composite Gauss-Legendre on [lo, hi] with `panels` panels of order 20.
template <typename F>
std::complex<double> composite_gauss(F&& f, double lo, double hi, int panels) {
  using Rule = boost::math::quadrature::gauss<double, kPanelOrder>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double width = (hi - lo) / panels;
  std::complex<double> total = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = width / 2;
    std::complex<double> panel = 0;
    // the rule stores the non-negative half of a symmetric node set
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        panel += w[i] * f(mid);
      } else {
        panel += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
      }
    }
    total += half * panel;
  }
  return total;
}

}  // namespace

QuadratureValue inner_product_quadrature(std::int64_t k, std::int64_t l, double alpha, double beta,
                                         double gamma) {
  if (!(alpha > 0) || !(beta > 0)) throw NonPositiveParameter("alpha and beta must be positive");
  const double shift = static_cast<double>(k) / beta;
  const double freq = static_cast<double>(l) / alpha;
  const std::complex<double> i(0, 1);
  // g_{-gamma}(t) conj(M_{freq} T_{shift} g_{-gamma}(t)), with |g|^2 normalized to 1
  auto integrand = [&](double t) {
    const double u = t - shift;
    return std::sqrt(2.0) * std::exp(-i * kPi * gamma * t * t) * std::exp(-kPi * t * t) *
           std::exp(i * kPi * gamma * u * u) * std::exp(-kPi * u * u) * std::exp(-2.0 * i * kPi * freq * t);
  };
  const double half_width = 6 + std::abs(shift);
  int nodes = kBaseNodes;
  auto previous = composite_gauss(integrand, -half_width, half_width, nodes / kPanelOrder);
  for (int d = 0; d < kMaxDoublings; ++d) {
    nodes *= 2;
    const auto current = composite_gauss(integrand, -half_width, half_width, nodes / kPanelOrder);
    const double residual = std::abs(current - previous);
    if (residual <= kQuadratureTol) return {current, {half_width, nodes, residual}};
    previous = current;
  }
  std::ostringstream os;
  os << "quadrature for (k, l) = (" << k << ", " << l << ") did not settle with " << nodes << " nodes";
  throw QuadratureNotConverged(os.str());
}

double brute_force_F(double x, double omega, const GaborConfig& cfg, int radius) {
  if (radius < 1) throw InvalidArgument("brute-force radius must be at least 1");
  const auto& lat = cfg.lattice();
  std::complex<double> sum = 0;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    for (std::int64_t l = -radius; l <= radius; ++l) {
      const double phase = 2 * kPi * (static_cast<double>(k) * x + static_cast<double>(l) * omega);
      sum += janssen_coefficient(k, l, lat.alpha(), lat.beta(), lat.gamma()) * std::polar(1.0, phase);
    }
  }
  return sum.real() / lat.volume();
}

GridExtrema grid_extrema(const GaborConfig& cfg, int grid_n, int radius) {
  if (grid_n < 8) {
    std::ostringstream os;
    os << "grid of " << grid_n << " points per axis is too coarse (minimum 8)";
    throw GridTooCoarse(os.str());
  }
  if (radius < 1) throw InvalidArgument("brute-force radius must be at least 1");
  const auto& lat = cfg.lattice();
  const std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  std::vector<std::complex<double>> coeff(side * side);
  for (std::int64_t k = -radius; k <= radius; ++k) {
    for (std::int64_t l = -radius; l <= radius; ++l) {
      coeff[static_cast<std::size_t>(k + radius) * side + static_cast<std::size_t>(l + radius)] =
          janssen_coefficient(k, l, lat.alpha(), lat.beta(), lat.gamma());
    }
  }
  // e^{2 pi i m / n}, indexed by m mod n so grid phases are exact
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(grid_n));
  for (int m = 0; m < grid_n; ++m) roots[static_cast<std::size_t>(m)] = std::polar(1.0, 2 * kPi * m / grid_n);

  GridExtrema out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  constexpr double tie = 8 * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      std::complex<double> sum = 0;
      for (std::int64_t k = -radius; k <= radius; ++k) {
        for (std::int64_t l = -radius; l <= radius; ++l) {
          const std::int64_t m = ((k * i + l * j) % grid_n + grid_n) % grid_n;
          sum += coeff[static_cast<std::size_t>(k + radius) * side + static_cast<std::size_t>(l + radius)] *
                 roots[static_cast<std::size_t>(m)];
        }
      }
      const double v = sum.real() / lat.volume();
      const TorusPoint p{static_cast<double>(i) / grid_n, static_cast<double>(j) / grid_n};
      if (!std::isfinite(out.min) || v < out.min - tie * std::abs(out.min)) {
        out.min = v;
        out.argmin = p;
      }
      if (!std::isfinite(out.max) || v > out.max + tie * std::abs(out.max)) {
        out.max = v;
        out.argmax = p;
      }
    }
  }
  return out;
}

PoissonCheck poisson_bc_check(double tolerance) {
  if (!(tolerance > 0)) throw InvalidArgument("tolerance must be positive");
  const double scale = 2 * kPi / std::sqrt(3.0);
  // both exponents are scale * (x^2 +- x y + y^2) >= (scale / 2) (x^2 + y^2)
  Matrix2<double> q;
  q << scale / kPi, scale / (2 * kPi), scale / (2 * kPi), scale / kPi;
  const std::int64_t r = gaussian_sum_radius(q, 1e-16, true).radius;

  std::complex<double> lhs = 0;
  double rhs = 0;
  for (std::int64_t k = -r; k <= r; ++k) {
    for (std::int64_t l = -r; l <= r; ++l) {
      const double kk = static_cast<double>(k);
      const double ll = static_cast<double>(l);
      const double left_exponent = scale * (kk * kk - kk * ll + ll * ll);
      lhs += std::exp(-left_exponent) * std::polar(1.0, -2 * kPi * (kk + ll) / 3);
      const double x = kk + 1.0 / 3;
      const double y = ll + 1.0 / 3;
      rhs += std::exp(-scale * (x * x + x * y + y * y));
    }
  }
  PoissonCheck out{lhs.real(), lhs.imag(), rhs, false};
  out.pass = std::abs(out.lhs - out.rhs) < tolerance && std::abs(out.lhs_imag) < tolerance;
  return out;
}

}  // namespace gabor::oracle
