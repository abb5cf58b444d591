#pragma once

// Theta series over Z and Z^2 with certified truncation.
//
// Every two-dimensional sum here has the shape
//
//     sum_{k,l} w(k,l) exp(-pi (v + s)^T Q (v + s)),   v = (k, l),  |w| <= 1,
//
// and is cut to the square max(|k|, |l|) <= K. With lambda the smallest
// eigenvalue of Q the omitted mass is dominated by the separable sum
// sum exp(-pi lambda (x^2 + y^2)) over the same index set, which in turn is
// bounded by 1D Gaussian tails and a geometric majorant.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string_view>

#include "gabor/errors.hpp"
#include "gabor/lattice.hpp"

namespace gabor {

inline constexpr double kDefaultEps = 1e-15;
inline constexpr std::int64_t kMaxTruncationRadius = 1'000'000;

template <typename Scalar>
struct TruncationSpec {
  Scalar epsilon{};
  std::int64_t radius{};
  /// Upper bound on the absolute value of everything outside the radius.
  Scalar certified_tail{};
};

template <typename Scalar>
struct SeriesValue {
  Scalar value{};
  TruncationSpec<Scalar> truncation;
};

namespace detail {

/// Neumaier compensated summation.
template <typename T>
class CompensatedSum {
public:
  void add(T x) {
    using std::abs;
    const T t = sum_ + x;
    comp_ += abs(sum_) >= abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  T sum_{};
  T comp_{};
};

template <typename R>
class CompensatedSum<std::complex<R>> {
public:
  void add(std::complex<R> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  std::complex<R> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum<R> re_;
  CompensatedSum<R> im_;
};

template <typename Scalar>
void check_scale(std::string_view name, Scalar x) {
  if (!(x > 0)) {
    std::ostringstream os;
    os << name << " must be positive (got " << x << ")";
    throw NonPositiveParameter(os.str());
  }
  if (x < Scalar(1e-6) || x > Scalar(1e6)) {
    std::ostringstream os;
    os << name << " = " << x << " is outside the supported range [1e-6, 1e6]";
    throw ParameterOutOfRange(os.str());
  }
}

template <typename Scalar>
void check_eps(Scalar eps) {
  if (!(eps > 0)) throw NonPositiveParameter("truncation tolerance eps must be positive");
}

/// Majorant of sum_{j >= 0} exp(-t (m0 + j)^2) for t, m0 > 0, from
/// (m0 + j)^2 >= m0^2 + 2 m0 j.
template <typename Scalar>
Scalar gaussian_tail_1d(Scalar t, Scalar m0) {
  using std::exp;
  using std::expm1;
  return exp(-t * m0 * m0) / -expm1(-2 * t * m0);
}

/// Bound on sum_{|k| > K} exp(-t (k + s)^2) for a shift |s| <= 1/2 (or 0).
template <typename Scalar>
Scalar tail_1d(Scalar t, std::int64_t radius, bool shifted) {
  const Scalar first = static_cast<Scalar>(radius) + (shifted ? Scalar(0.5) : Scalar(1));
  return 2 * gaussian_tail_1d(t, first);
}

/// Bound on the full sum_k exp(-t (k + s)^2).
template <typename Scalar>
Scalar total_1d(Scalar t, bool shifted) {
  return 1 + 2 * gaussian_tail_1d(t, shifted ? Scalar(0.5) : Scalar(1));
}

/// Bound on the separable 2D mass outside max(|k|, |l|) <= K:
/// S^2 - S_K^2 = (S - S_K)(S + S_K) <= T * 2 S.
template <typename Scalar>
Scalar square_tail(Scalar t, std::int64_t radius, bool shifted) {
  return 2 * tail_1d(t, radius, shifted) * total_1d(t, shifted);
}

/// Least K >= 1 whose tail bound (times scale) is below eps.
template <typename Scalar, typename TailFn>
TruncationSpec<Scalar> least_radius(Scalar eps, TailFn&& tail) {
  for (std::int64_t k = 1; k <= kMaxTruncationRadius; ++k) {
    const Scalar bound = tail(k);
    if (bound < eps) return {eps, k, bound};
  }
  std::ostringstream os;
  os << "truncation radius for eps = " << eps << " exceeds " << kMaxTruncationRadius;
  throw TruncationOverflow(os.str());
}

template <typename Scalar>
Scalar min_eigenvalue(const Matrix2<Scalar>& q) {
  return QuadraticForm<Scalar>::from_matrix(q).min_eigenvalue();
}

}  // namespace detail

/// Radius for sum_{k,l} w exp(-pi (v+s)^T Q (v+s)), |w| <= 1, within eps.
template <typename Scalar>
TruncationSpec<Scalar> gaussian_sum_radius(const Matrix2<Scalar>& q, Scalar eps,
                                           bool shifted = false) {
  detail::check_eps(eps);
  const Scalar lambda = detail::min_eigenvalue(q);
  if (!(lambda > 0)) throw NonPositiveParameter("Gaussian exponent matrix is not positive definite");
  const Scalar t = std::numbers::pi_v<Scalar> * lambda;
  return detail::least_radius(eps, [&](std::int64_t k) { return detail::square_tail(t, k, shifted); });
}

/// Certified sum_{k,l} w(k,l) exp(-pi (v+s)^T Q (v+s)) with |w| <= 1.
///
/// The weight may return a real or a complex number; the result has the same type.
template <typename Scalar, typename Weight>
auto gaussian_lattice_sum(const Matrix2<Scalar>& q, const Vector2<Scalar>& shift, Scalar eps,
                          Weight&& weight) {
  using std::exp;
  using Value = decltype(weight(std::int64_t{}, std::int64_t{}) * Scalar{});
  const bool shifted = shift.x() != 0 || shift.y() != 0;
  const auto spec = gaussian_sum_radius(q, eps, shifted);
  const std::int64_t radius = spec.radius;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  detail::CompensatedSum<Value> sum;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    const Scalar x = static_cast<Scalar>(k) + shift.x();
    for (std::int64_t l = -radius; l <= radius; ++l) {
      const Scalar y = static_cast<Scalar>(l) + shift.y();
      const Scalar e = q(0, 0) * x * x + 2 * q(0, 1) * x * y + q(1, 1) * y * y;
      sum.add(weight(k, l) * exp(-pi * e));
    }
  }
  return SeriesValue<Value>{sum.value(), {spec.epsilon, spec.radius, spec.certified_tail}};
}

template <typename Scalar>
SeriesValue<Scalar> gaussian_lattice_sum(const Matrix2<Scalar>& q, Scalar eps) {
  return gaussian_lattice_sum(q, Vector2<Scalar>::Zero().eval(), eps,
                              [](std::int64_t, std::int64_t) { return Scalar(1); });
}

enum class JacobiKind { two = 2, three = 3, four = 4 };

/// theta_2(s) = sum exp(-pi (k - 1/2)^2 s), theta_3(s) = sum exp(-pi k^2 s),
/// theta_4(s) = sum (-1)^k exp(-pi k^2 s), for s > 0.
template <typename Scalar>
SeriesValue<Scalar> jacobi_theta_certified(JacobiKind kind, Scalar s, Scalar eps = Scalar(kDefaultEps)) {
  using std::exp;
  detail::check_scale("theta argument s", s);
  detail::check_eps(eps);
  const Scalar t = std::numbers::pi_v<Scalar> * s;
  const bool shifted = kind == JacobiKind::two;
  const auto spec = detail::least_radius(eps, [&](std::int64_t k) { return detail::tail_1d(t, k, shifted); });
  detail::CompensatedSum<Scalar> sum;
  // smallest terms first
  for (std::int64_t k = spec.radius; k >= 1; --k) {
    const Scalar kk = static_cast<Scalar>(k);
    switch (kind) {
      case JacobiKind::two:
        sum.add(2 * exp(-t * (kk - Scalar(0.5)) * (kk - Scalar(0.5))));
        break;
      case JacobiKind::three:
        sum.add(2 * exp(-t * kk * kk));
        break;
      case JacobiKind::four:
        sum.add((k % 2 == 0 ? 2 : -2) * exp(-t * kk * kk));
        break;
    }
  }
  if (kind != JacobiKind::two) sum.add(Scalar(1));
  return {sum.value(), spec};
}

template <typename Scalar>
Scalar jacobi_theta(JacobiKind kind, Scalar s) {
  return jacobi_theta_certified(kind, s).value;
}

/// Overload taking the kind as the integer 2, 3 or 4.
template <typename Scalar>
Scalar jacobi_theta(int kind, Scalar s) {
  if (kind < 2 || kind > 4) throw InvalidArgument("Jacobi theta kind must be 2, 3 or 4");
  return jacobi_theta(static_cast<JacobiKind>(kind), s);
}

/// Radius and tail bound for theta_q(rho) at tolerance eps.
template <typename Scalar>
TruncationSpec<Scalar> truncation_radius(const QuadraticForm<Scalar>& q, Scalar rho, Scalar eps) {
  if (!q.positive_definite()) throw NonPositiveParameter("quadratic form is not positive definite");
  detail::check_scale("rho", rho);
  return gaussian_sum_radius(Matrix2<Scalar>(2 * rho * q.matrix()), eps);
}

/// theta_q(rho) = sum_{k,l} exp(-2 pi rho q(k, l)).
template <typename Scalar>
SeriesValue<Scalar> lattice_theta(const QuadraticForm<Scalar>& q, Scalar rho,
                                  Scalar eps = Scalar(kDefaultEps)) {
  if (!q.positive_definite()) throw NonPositiveParameter("quadratic form is not positive definite");
  detail::check_scale("rho", rho);
  return gaussian_lattice_sum(Matrix2<Scalar>(2 * rho * q.matrix()), eps);
}

/// vartheta(r, s; c) = sum_k exp(-c pi s k^2) sum_l exp(-(c pi / s)(l + k r)^2)
/// for 0 < r < 1/2, s >= 1/2, c > 0.
template <typename Scalar>
SeriesValue<Scalar> montgomery_vartheta(Scalar r, Scalar s, Scalar c, Scalar eps = Scalar(kDefaultEps)) {
  if (!(c > 0)) throw NonPositiveParameter("density parameter c must be positive");
  if (!(s > 0)) throw NonPositiveParameter("aspect parameter s must be positive");
  if (!(r > 0 && r < Scalar(0.5))) throw ParameterOutOfRange("shear parameter r must lie in (0, 1/2)");
  if (s < Scalar(0.5)) throw ParameterOutOfRange("aspect parameter s must be at least 1/2");
  detail::check_scale("c", c);
  detail::check_scale("s", s);
  // c pi [ (s + r^2/s) k^2 + 2 (r/s) k l + l^2 / s ]
  Matrix2<Scalar> q;
  q << c * (s + r * r / s), c * r / s, c * r / s, c / s;
  return gaussian_lattice_sum(q, eps);
}

enum class CubicKind { a, b, c };

namespace detail {

template <typename Scalar>
Matrix2<Scalar> cubic_exponent(Scalar t) {
  // exp(-t (k^2 + k l + l^2)) = exp(-pi v^T Q v)
  const Scalar w = t / std::numbers::pi_v<Scalar>;
  Matrix2<Scalar> q;
  q << w, w / 2, w / 2, w;
  return q;
}

}  // namespace detail

/// Borwein cubic theta functions at nome q = exp(-t):
///   a = sum q^{k^2+kl+l^2},  b = sum q^{k^2+kl+l^2} cos(2 pi (k - l) / 3),
///   c = sum q^{(k+1/3)^2 + (k+1/3)(l+1/3) + (l+1/3)^2}.
template <typename Scalar>
SeriesValue<Scalar> cubic_theta_certified(CubicKind which, Scalar t, Scalar eps = Scalar(kDefaultEps)) {
  using std::cos;
  detail::check_scale("cubic theta parameter t", t);
  const auto q = detail::cubic_exponent(t);
  const Scalar third = Scalar(1) / 3;
  switch (which) {
    case CubicKind::a:
      return gaussian_lattice_sum(q, eps);
    case CubicKind::b: {
      // cos(2 pi m / 3) is 1 for m = 0 mod 3 and -1/2 otherwise
      auto weight = [](std::int64_t k, std::int64_t l) {
        const std::int64_t m = ((k - l) % 3 + 3) % 3;
        return m == 0 ? Scalar(1) : Scalar(-0.5);
      };
      return gaussian_lattice_sum(q, Vector2<Scalar>::Zero().eval(), eps, weight);
    }
    case CubicKind::c:
      return gaussian_lattice_sum(q, Vector2<Scalar>(third, third), eps,
                                  [](std::int64_t, std::int64_t) { return Scalar(1); });
  }
  throw InvalidArgument("unknown cubic theta kind");
}

template <typename Scalar>
Scalar cubic_theta(CubicKind which, Scalar t) {
  return cubic_theta_certified(which, t).value;
}

/// b(q) through the primitive cube root of unity zeta_3^{k-l}; the imaginary part
/// cancels in conjugate pairs and is only returned for checking.
template <typename Scalar>
std::complex<Scalar> cubic_theta_b_complex(Scalar t, Scalar eps = Scalar(kDefaultEps)) {
  detail::check_scale("cubic theta parameter t", t);
  const std::complex<Scalar> zeta = std::polar(Scalar(1), 2 * std::numbers::pi_v<Scalar> / 3);
  const std::complex<Scalar> powers[3] = {Scalar(1), zeta, zeta * zeta};
  auto weight = [&](std::int64_t k, std::int64_t l) { return powers[((k - l) % 3 + 3) % 3]; };
  return gaussian_lattice_sum(detail::cubic_exponent(t), Vector2<Scalar>::Zero().eval(), eps, weight).value;
}

}  // namespace gabor
