#include "gabor/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gabor/minimizers.hpp"

namespace gabor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kScanDensityTol = 1e-9;

void check_density(double alpha, double beta, int n) {
  if (n < 1) throw InvalidArgument("redundancy index n must be at least 1");
  if (!(alpha > 0) || !(beta > 0)) throw NonPositiveParameter("alpha and beta must be positive");
  const double mismatch = std::abs(alpha * beta * 2.0 * n - 1.0);
  if (mismatch > kScanDensityTol) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha * beta = " << alpha * beta << " does not equal 1/(2n) = " << 0.5 / n;
    throw DensityMismatch(os.str());
  }
}

/// (1 + g^2) k^2 / b^2 - 2 k l g / (a b) + l^2 / a^2, the exponent of B over -pi/2.
double shear_exponent(double a, double b, double g, double k, double l) {
  return (1 + g * g) * k * k / (b * b) - 2 * k * l * g / (a * b) + l * l / (a * a);
}

std::int64_t difference_radius(double a, double b, double g, double scale, double eps) {
  Matrix2<double> q;
  q << (1 + g * g) / (2 * b * b), -g / (2 * a * b), -g / (2 * a * b), 1 / (2 * a * a);
  return gaussian_sum_radius(q, eps / scale).radius;
}

double hypothesis_alpha(int n) { return 1 / (std::sqrt(2.0) * std::sqrt(2.0 * n)); }

}  // namespace

double upper_bound_at(double alpha, double beta, double gamma, int n, double eps) {
  // the series is valid for any lattice; callers check the density
  const auto lat = Lattice2D::from_params(alpha, beta, gamma);
  return upper_bound_even(GaborConfig::unchecked(lat, n), eps).value;
}

double upper_bound_difference(double alpha, double beta, int n, double gamma1, double gamma2, double eps) {
  detail::check_eps(eps);
  const double scale = 2.0 * n;
  // both series get their own certified radius; sum over the larger square
  const std::int64_t r = std::max(difference_radius(alpha, beta, gamma1, scale, eps / 2),
                                   difference_radius(alpha, beta, gamma2, scale, eps / 2));
  detail::CompensatedSum<double> sum;
  for (std::int64_t k = -r; k <= r; ++k) {
    const double kk = static_cast<double>(k);
    for (std::int64_t l = -r; l <= r; ++l) {
      const double ll = static_cast<double>(l);
      const double e2 = shear_exponent(alpha, beta, gamma2, kk, ll);
      // E(g1) - E(g2) = (g1 - g2) [(g1 + g2) k^2 / b^2 - 2 k l / (a b)]
      const double gap = (gamma1 - gamma2) * ((gamma1 + gamma2) * kk * kk / (beta * beta) -
                                              2 * kk * ll / (alpha * beta));
      sum.add(std::exp(-kPi / 2 * e2) * std::expm1(-kPi / 2 * gap));
    }
  }
  return scale * sum.value();
}

ScanResult scan_gamma(double alpha, double beta, int n, int samples) {
  if (samples < 16) {
    std::ostringstream os;
    os << "scan needs at least 16 samples (got " << samples << ")";
    throw InvalidArgument(os.str());
  }
  check_density(alpha, beta, n);
  const double period = beta / alpha;
  ScanResult out;
  out.gammas.reserve(static_cast<std::size_t>(samples));
  out.values.reserve(static_cast<std::size_t>(samples));
  out.min_value = std::numeric_limits<double>::infinity();
  out.max_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double g = period * i / samples;
    const double b = upper_bound_at(alpha, beta, g, n);
    out.gammas.push_back(g);
    out.values.push_back(b);
    // strict comparisons: the smaller gamma wins ties
    if (b < out.min_value) {
      out.min_value = b;
      out.argmin = g;
    }
    if (b > out.max_value) {
      out.max_value = b;
      out.argmax = g;
    }
  }
  return out;
}

ShearMinimum minimize_gamma_on(double alpha, double beta, int n, double lo, double hi, double tol) {
  check_density(alpha, beta, n);
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (!(hi > lo)) throw InvalidArgument("empty shear bracket");
  auto less = [&](double u, double v) { return upper_bound_difference(alpha, beta, n, u, v) < 0; };
  ShearMinimum out;
  // golden section stops at bracket width tol; the midpoint is within tol / 2
  out.gamma_star = golden_section_by_order(less, lo, hi, tol, 10000);
  out.upper_star = upper_bound_at(alpha, beta, out.gamma_star, n);
  out.hypothesis_holds = alpha >= hypothesis_alpha(n) * (1 - 1e-12);
  return out;
}

ShearMinimum minimize_gamma(double alpha, double beta, int n, double tol) {
  check_density(alpha, beta, n);
  return minimize_gamma_on(alpha, beta, n, 0.0, beta / (2 * alpha), tol);
}

LatticeMinimum minimize_lattice(int n, double tol, int max_iter) {
  if (n < 1) throw InvalidArgument("redundancy index n must be at least 1");
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  const double root2n = std::sqrt(2.0 * n);
  const double alpha_lo = hypothesis_alpha(n);
  const double alpha_hi = 2 / root2n;

  // gamma = u * beta / (2 alpha); u = 1 is the half-period shear
  auto objective = [n](double alpha, double u) {
    if (!(alpha > 0) || !std::isfinite(u)) return std::numeric_limits<double>::infinity();
    const double beta = 1 / (2.0 * n * alpha);
    return upper_bound_at(alpha, beta, u * beta / (2 * alpha), n);
  };

  constexpr int kCoarse = 24;
  double best_alpha = alpha_lo;
  double best_u = 0;
  double best_gamma = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarse; ++i) {
    const double alpha = alpha_lo + (alpha_hi - alpha_lo) * i / (kCoarse - 1);
    const double beta = 1 / (2.0 * n * alpha);
    for (int j = 0; j < kCoarse; ++j) {
      const double u = static_cast<double>(j) / (kCoarse - 1);
      const double gamma = u * beta / (2 * alpha);
      const double v = objective(alpha, u);
      const bool better = v < best_value ||
                          (v == best_value && (gamma < best_gamma || (gamma == best_gamma && alpha < best_alpha)));
      if (better) {
        best_value = v;
        best_alpha = alpha;
        best_u = u;
        best_gamma = gamma;
      }
    }
  }

  const Eigen::Vector2d start(best_alpha, best_u);
  const Eigen::Vector2d step((alpha_hi - alpha_lo) / (kCoarse - 1), 1.0 / (kCoarse - 1));
  const auto simplex = nelder_mead<double, 2>([&](const Eigen::Vector2d& p) { return objective(p.x(), p.y()); },
                                              start, step, tol, max_iter);

  const double alpha = simplex.argmin.x();
  const double beta = 1 / (2.0 * n * alpha);
  LatticeMinimum out{Lattice2D::from_params(alpha, beta, simplex.argmin.y() * beta / (2 * alpha)),
                     simplex.min_value, simplex.iterations, false};
  out.upper_star = upper_bound_even(GaborConfig::make(out.lattice, n)).value;
  out.hexagonal_equivalent = forms_equivalent(quadratic_form(out.lattice), hexagonal_form<double>(), 1e-6);
  return out;
}

std::vector<QuadraticFormD> reduced_form_grid(int grid_n) {
  if (grid_n < 2) throw InvalidArgument("reduced-form grid needs at least 2 points per axis");
  const double a_hi = 1 / std::sqrt(3.0);
  std::vector<QuadraticFormD> forms;
  forms.reserve(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    const double a = kMontgomeryMinA + (a_hi - kMontgomeryMinA) * i / (grid_n - 1);
    const double b_lo = std::min(a, std::sqrt(std::max(0.0, 4 * a * a - 1)));
    for (int j = 0; j < grid_n; ++j) {
      const double b = b_lo + (a - b_lo) * j / (grid_n - 1);
      forms.push_back({a, b, (b * b + 1) / (4 * a)});
    }
  }
  return forms;
}

bool MontgomeryReport::passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const MontgomeryRow& r) { return r.violations == 0 && r.spurious_equalities == 0; });
}

MontgomeryReport verify_montgomery(const std::vector<double>& rho_list, int grid_n) {
  if (grid_n < 10) throw InvalidArgument("Montgomery sweep needs a grid of at least 10 x 10");
  if (rho_list.empty()) throw InvalidArgument("no rho values given");
  constexpr double kEqualityTol = 1e-12;
  const auto forms = reduced_form_grid(grid_n);
  const auto h = hexagonal_form<double>();

  std::vector<bool> hexagonal(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) hexagonal[i] = forms_equivalent(forms[i], h, 1e-9);

  MontgomeryReport out;
  out.grid_n = grid_n;
  out.tolerance = kEqualityTol;
  for (const double rho : rho_list) {
    if (!(rho > 0)) throw NonPositiveParameter("rho must be positive");
    const double theta_h = lattice_theta(h, rho).value;
    MontgomeryRow row;
    row.rho = rho;
    row.min_margin = std::numeric_limits<double>::infinity();
    row.min_margin_off_hexagonal = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < forms.size(); ++i) {
      const double margin = lattice_theta(forms[i], rho).value - theta_h;
      ++row.evaluated;
      if (margin < -kEqualityTol) ++row.violations;
      if (margin < row.min_margin) {
        row.min_margin = margin;
        row.min_margin_form = forms[i];
      }
      if (!hexagonal[i]) {
        row.min_margin_off_hexagonal = std::min(row.min_margin_off_hexagonal, margin);
        if (margin <= kEqualityTol) ++row.spurious_equalities;
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace gabor
