#include "gabor/framebounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "gabor/minimizers.hpp"

namespace gabor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDensityTol = 1e-12;

/// Exponent matrix of the Janssen coefficients: |c_{k,l}| = exp(-pi v^T Q v).
Matrix2<double> coefficient_exponent(const Lattice2D& lat) {
  const double a = lat.alpha();
  const double b = lat.beta();
  const double g = lat.gamma();
  Matrix2<double> q;
  q << (1 + g * g) / (2 * b * b), g / (2 * a * b), g / (2 * a * b), 1 / (2 * a * a);
  return q;
}

/// The cosine series of F with the coefficients materialized once.
class TorusSeries {
public:
  TorusSeries(const GaborConfig& cfg, double eps) {
    const double scale = cfg.density();
    const Matrix2<double> q = coefficient_exponent(cfg.lattice());
    truncation_ = gaussian_sum_radius(q, eps / scale);
    truncation_.epsilon = eps;
    truncation_.certified_tail *= scale;
    const std::int64_t r = truncation_.radius;
    for (std::int64_t k = -r; k <= r; ++k) {
      for (std::int64_t l = -r; l <= r; ++l) {
        const double kk = static_cast<double>(k);
        const double ll = static_cast<double>(l);
        const double e = q(0, 0) * kk * kk + 2 * q(0, 1) * kk * ll + q(1, 1) * ll * ll;
        const double c = scale * std::exp(-kPi * e);
        if (c > 0) terms_.push_back({k, l, c});
      }
    }
    // smallest coefficients first for the running sums
    std::sort(terms_.begin(), terms_.end(), [](const Term& u, const Term& v) { return u.c < v.c; });
  }

  const TruncationSpec<double>& truncation() const { return truncation_; }

  std::complex<double> complex_value(double x, double omega) const {
    detail::CompensatedSum<std::complex<double>> sum;
    for (const auto& t : terms_) {
      const double phase = 2 * kPi * (static_cast<double>(t.k) * x + static_cast<double>(t.l) * omega);
      sum.add(std::polar(t.c, phase));
    }
    return sum.value();
  }

  double value(double x, double omega) const {
    detail::CompensatedSum<double> sum;
    for (const auto& t : terms_) {
      sum.add(t.c * std::cos(2 * kPi * (static_cast<double>(t.k) * x + static_cast<double>(t.l) * omega)));
    }
    return sum.value();
  }

  struct Jet {
    double f = 0;
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  };

  Jet jet(double x, double omega) const {
    Jet j;
    for (const auto& t : terms_) {
      const Eigen::Vector2d freq(2 * kPi * static_cast<double>(t.k), 2 * kPi * static_cast<double>(t.l));
      const double arg = freq.x() * x + freq.y() * omega;
      const double c = t.c * std::cos(arg);
      const double s = t.c * std::sin(arg);
      j.f += c;
      j.gradient -= s * freq;
      j.hessian -= c * freq * freq.transpose();
    }
    return j;
  }

  /// Values on the grid (i/n, j/n); the phases use exact index arithmetic mod n.
  std::vector<double> grid(int n) const {
    std::vector<double> cosines(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) cosines[static_cast<std::size_t>(m)] = std::cos(2 * kPi * m / n);
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        detail::CompensatedSum<double> sum;
        for (const auto& t : terms_) {
          const std::int64_t m = ((t.k * i + t.l * j) % n + n) % n;
          sum.add(t.c * cosines[static_cast<std::size_t>(m)]);
        }
        values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
            sum.value();
      }
    }
    return values;
  }

private:
  struct Term {
    std::int64_t k;
    std::int64_t l;
    double c;
  };
  std::vector<Term> terms_;
  TruncationSpec<double> truncation_;
};

double wrap_unit(double u) {
  double w = u - std::floor(u);
  if (w >= 1) w = 0;
  return w;
}

struct GridScan {
  double min = 0;
  TorusPoint argmin;
  double max = 0;
  TorusPoint argmax;
};

/// Ties within a few ulps keep the first point in (x, omega) lexicographic order.
GridScan scan_grid(const TorusSeries& series, int n) {
  const auto values = series.grid(n);
  GridScan scan;
  scan.min = std::numeric_limits<double>::infinity();
  scan.max = -std::numeric_limits<double>::infinity();
  constexpr double tie = 8 * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
      const TorusPoint p{static_cast<double>(i) / n, static_cast<double>(j) / n};
      if (v < scan.min - tie * std::abs(scan.min) || !std::isfinite(scan.min)) {
        scan.min = v;
        scan.argmin = p;
      }
      if (v > scan.max + tie * std::abs(scan.max) || !std::isfinite(scan.max)) {
        scan.max = v;
        scan.argmax = p;
      }
    }
  }
  return scan;
}

/// Coordinate golden-section sweeps inside one grid cell, then Newton steps on
/// the analytic derivatives of the cosine series.
GridMinimum refine_minimum(const TorusSeries& series, TorusPoint start, double cell) {
  TorusPoint p = start;
  double fp = series.value(p.x, p.omega);
  for (int sweep = 0; sweep < 4; ++sweep) {
    const TorusPoint before = p;
    p.x = golden_section([&](double x) { return series.value(x, p.omega); }, p.x - cell, p.x + cell, 1e-8);
    p.omega = golden_section([&](double w) { return series.value(p.x, w); }, p.omega - cell, p.omega + cell, 1e-8);
    if (std::abs(p.x - before.x) + std::abs(p.omega - before.omega) < 1e-9) break;
  }
  const double swept = series.value(p.x, p.omega);
  if (swept > fp) {
    p = start;
  } else {
    fp = swept;
  }

  for (int iter = 0; iter < 50; ++iter) {
    const auto j = series.jet(p.x, p.omega);
    Eigen::LLT<Eigen::Matrix2d> llt(j.hessian);
    if (llt.info() != Eigen::Success) break;
    const Eigen::Vector2d step = -llt.solve(j.gradient);
    if (!step.allFinite() || step.norm() > cell) break;
    const TorusPoint next{p.x + step.x(), p.omega + step.y()};
    const double fn = series.value(next.x, next.omega);
    if (fn > fp + 4 * std::numeric_limits<double>::epsilon() * std::abs(fp)) break;
    p = next;
    fp = std::min(fp, fn);
    if (step.norm() < 1e-12) break;
  }
  return {series.value(p.x, p.omega), {wrap_unit(p.x), wrap_unit(p.omega)}};
}

void check_grid(int grid_n) {
  if (grid_n < 8) {
    std::ostringstream os;
    os << "grid of " << grid_n << " points per axis is too coarse (minimum 8)";
    throw GridTooCoarse(os.str());
  }
}

}  // namespace

GaborConfig GaborConfig::make(const Lattice2D& lattice, int n) {
  if (n < 1) throw InvalidArgument("redundancy index n must be at least 1");
  const double mismatch = std::abs(lattice.volume() * 2.0 * n - 1.0);
  if (mismatch > kDensityTol) {
    std::ostringstream os;
    os.precision(17);
    os << "lattice density " << lattice.density() << " does not equal 2n = " << 2 * n;
    throw DensityMismatch(os.str());
  }
  return GaborConfig(lattice, n);
}

GaborConfig GaborConfig::for_lattice(const Lattice2D& lattice) {
  const double half = lattice.density() / 2;
  const double n = std::round(half);
  if (n < 1 || std::abs(half - n) > kDensityTol * half) {
    std::ostringstream os;
    os.precision(17);
    os << "lattice density " << lattice.density() << " is not an even integer";
    throw DensityMismatch(os.str());
  }
  return make(lattice, static_cast<int>(n));
}

GaborConfig GaborConfig::unchecked(const Lattice2D& lattice, int n) { return GaborConfig(lattice, n); }

double ambiguity_gaussian(double x, double omega) { return std::exp(-kPi / 2 * (x * x + omega * omega)); }

std::complex<double> janssen_coefficient(std::int64_t k, std::int64_t l, double alpha, double beta,
                                         double gamma) {
  if (!(alpha > 0) || !(beta > 0)) throw NonPositiveParameter("alpha and beta must be positive");
  const double kk = static_cast<double>(k);
  const double ll = static_cast<double>(l);
  const double shifted = ll / alpha + kk * gamma / beta;
  const double modulus = std::exp(-kPi / 2 * (kk * kk / (beta * beta) + shifted * shifted));
  // e^{-pi i t} only depends on t mod 2
  const double turns = std::fmod(kk * ll / (alpha * beta), 2.0);
  return std::polar(modulus, -kPi * turns);
}

double fourier_series_F(double x, double omega, const GaborConfig& cfg, double eps) {
  detail::check_eps(eps);
  const TorusSeries series(cfg, eps);
  const auto v = series.complex_value(x, omega);
  if (std::abs(v.imag()) > 1e-12) {
    std::ostringstream os;
    os << "F has imaginary residue " << v.imag() << " at even density";
    throw IdentityViolation(os.str());
  }
  return v.real();
}

SeriesValue<double> upper_bound_even(const GaborConfig& cfg, double eps) {
  detail::check_eps(eps);
  const auto& lat = cfg.lattice();
  const double a = lat.alpha();
  const double b = lat.beta();
  const double g = lat.gamma();
  const double scale = cfg.density();
  auto spec = gaussian_sum_radius(coefficient_exponent(lat), eps / scale);
  const std::int64_t r = spec.radius;
  detail::CompensatedSum<double> sum;
  for (std::int64_t k = -r; k <= r; ++k) {
    const double kk = static_cast<double>(k);
    for (std::int64_t l = -r; l <= r; ++l) {
      const double ll = static_cast<double>(l);
      const double separable = kk * kk / (b * b) + ll * ll / (a * a);
      const double shear = kk * kk * g * g / (b * b) - 2 * kk * ll * g / (a * b);
      // one exponential: for skewed lattices the two factors under- and overflow
      sum.add(std::exp(-kPi / 2 * (separable + shear)));
    }
  }
  spec.epsilon = eps;
  spec.certified_tail *= scale;
  return {scale * sum.value(), spec};
}

SeriesValue<double> upper_bound_theta_route(const GaborConfig& cfg, double eps) {
  detail::check_eps(eps);
  const double n = cfg.n();
  const auto q = quadratic_form(cfg.lattice());
  const auto small = lattice_theta(q, 1 / n, eps / 2);
  const auto large = lattice_theta(q, n, eps / (2 * n));
  const double b_small = 2 * small.value;
  const double b_large = 2 * n * large.value;
  const double tails = 2 * small.truncation.certified_tail + 2 * n * large.truncation.certified_tail;
  if (std::abs(b_small - b_large) > tails + 1e-12 * std::max(b_small, 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "modular identity violated: 2 theta(1/n) = " << b_small << ", 2n theta(n) = " << b_large;
    throw IdentityViolation(os.str());
  }
  auto spec = small.truncation;
  spec.epsilon = eps;
  spec.certified_tail *= 2;
  return {b_small, spec};
}

SeriesValue<double> upper_bound_ambiguity_route(const GaborConfig& cfg, double eps) {
  detail::check_eps(eps);
  const auto& lat = cfg.lattice();
  // A(g0)(2 lambda) = exp(-2 pi |S v|^2) = exp(-pi v^T (2 G) v)
  const Matrix2<double> q = 2 * gram(lat);
  auto spec = gaussian_sum_radius(q, eps / 2);
  const std::int64_t r = spec.radius;
  detail::CompensatedSum<double> sum;
  for (std::int64_t k = -r; k <= r; ++k) {
    for (std::int64_t l = -r; l <= r; ++l) {
      const Vector2<double> p = lat.point(k, l);
      sum.add(ambiguity_gaussian(2 * p.x(), 2 * p.y()));
    }
  }
  spec.epsilon = eps;
  spec.certified_tail *= 2;
  return {2 * sum.value(), spec};
}

GridMinimum lower_bound_grid(const GaborConfig& cfg, int grid_n, double eps) {
  check_grid(grid_n);
  detail::check_eps(eps);
  const TorusSeries series(cfg, eps);
  const auto scan = scan_grid(series, grid_n);
  return refine_minimum(series, scan.argmin, 1.0 / grid_n);
}

BoundPair closed_form_square_red2() {
  const double g = std::tgamma(0.75);
  const double root4_pi = std::pow(kPi, 0.25);
  const double upper_factor = root4_pi / g;
  const double lower_factor = root4_pi / (std::pow(2.0, 0.25) * g);
  return {2 * lower_factor * lower_factor, 2 * upper_factor * upper_factor};
}

BoundPair hexagonal_red2_bounds() {
  const double t = 2 * kPi / std::sqrt(3.0);
  const double a = cubic_theta(CubicKind::a, t);
  const double b = cubic_theta(CubicKind::b, t);
  const double c = cubic_theta(CubicKind::c, t);
  if (std::abs(b - c) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "b(q) = " << b << " and c(q) = " << c << " differ";
    throw IdentityViolation(os.str());
  }
  const BoundPair bounds{2 * b, 2 * a};
  const double cube_gap = bounds.upper * bounds.upper * bounds.upper -
                          2 * bounds.lower * bounds.lower * bounds.lower;
  if (std::abs(cube_gap) > 1e-12) {
    std::ostringstream os;
    os << "B^3 - 2 A^3 = " << cube_gap;
    throw IdentityViolation(os.str());
  }
  return bounds;
}

std::string_view to_string(LowerBoundSource source) {
  return source == LowerBoundSource::closed_form ? "closed_form" : "grid";
}

FrameBoundReport report(const GaborConfig& cfg, int grid_n, double eps) {
  check_grid(grid_n);
  detail::check_eps(eps);
  FrameBoundReport out;
  out.routes = {upper_bound_even(cfg, eps), upper_bound_theta_route(cfg, eps),
                upper_bound_ambiguity_route(cfg, eps)};
  out.upper = out.routes[0].value;
  out.truncation = out.routes[0].truncation;
  for (std::size_t i = 0; i < out.routes.size(); ++i) {
    for (std::size_t j = i + 1; j < out.routes.size(); ++j) {
      out.route_spread = std::max(out.route_spread, std::abs(out.routes[i].value - out.routes[j].value));
    }
  }

  const TorusSeries series(cfg, eps);
  const auto scan = scan_grid(series, grid_n);
  const auto refined = refine_minimum(series, scan.argmin, 1.0 / grid_n);
  out.grid_n = grid_n;
  out.grid_resolution = 1.0 / grid_n;
  out.argmax = scan.argmax;
  out.argmin = refined.argmin;
  out.lower_grid = refined.value;
  out.lower = refined.value;
  out.lower_source = LowerBoundSource::grid;

  if (cfg.n() == 1) {
    constexpr double kFormTol = 1e-9;
    const auto q = quadratic_form(cfg.lattice());
    if (forms_equivalent(q, quadratic_form(square<double>(1)), kFormTol)) {
      out.lower = closed_form_square_red2().lower;
      out.lower_source = LowerBoundSource::closed_form;
    } else if (forms_equivalent(q, hexagonal_form<double>(), kFormTol)) {
      out.lower = hexagonal_red2_bounds().lower;
      out.lower_source = LowerBoundSource::closed_form;
    }
  }
  out.condition = out.upper / out.lower;
  return out;
}

TorusPoint mirror_frequency(TorusPoint p) { return {wrap_unit(p.x), wrap_unit(-p.omega)}; }

}  // namespace gabor
