#pragma once

// Planar lattices in the time-frequency plane and their binary quadratic forms.
//
// A lattice is stored through its canonical lower-triangular generator
//
//     S = [ alpha        0    ]
//         [ alpha*gamma  beta ]
//
// whose columns are the basis vectors. Any generator M factors as M = Q S with
// Q orthogonal; the orthogonal factor is dropped because rotations leave the
// Gaussian Gabor frame bounds unchanged. The shear gamma is kept in
// [0, beta/alpha), the period under the basis change (e1, e2) -> (e1 + e2, e2).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "gabor/errors.hpp"

namespace gabor {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Integer basis change; determinant +1 for SL(2,Z) elements.
using IntMatrix2 = Eigen::Matrix<std::int64_t, 2, 2>;

/// Symmetric positive definite 2x2 matrix S^T S.
template <typename Scalar>
using GramMatrix = Matrix2<Scalar>;

template <typename Scalar>
class Lattice2 {
public:
  using Matrix = Matrix2<Scalar>;

  /// Builds the lattice with generator [[alpha, 0], [alpha*gamma, beta]].
  static Lattice2 from_params(Scalar alpha, Scalar beta, Scalar gamma) {
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
      throw NonPositiveParameter("lattice parameters alpha and beta must be positive and finite");
    }
    if (!std::isfinite(gamma)) {
      throw InvalidArgument("lattice shear must be finite");
    }
    return Lattice2(alpha, beta, reduce_shear(gamma, beta / alpha));
  }

  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }
  Scalar gamma() const { return gamma_; }

  Scalar s11() const { return alpha_; }
  Scalar s21() const { return alpha_ * gamma_; }
  Scalar s22() const { return beta_; }

  Scalar volume() const { return alpha_ * beta_; }
  Scalar density() const { return Scalar(1) / volume(); }

  /// Period of the upper frame bound in gamma.
  Scalar shear_period() const { return beta_ / alpha_; }

  Matrix generator() const {
    Matrix s;
    s << alpha_, Scalar(0), alpha_ * gamma_, beta_;
    return s;
  }

  /// Lattice point S (k, l)^T.
  Vector2<Scalar> point(std::int64_t k, std::int64_t l) const {
    const Scalar kk = static_cast<Scalar>(k);
    const Scalar ll = static_cast<Scalar>(l);
    return {alpha_ * kk, alpha_ * gamma_ * kk + beta_ * ll};
  }

private:
  Lattice2(Scalar alpha, Scalar beta, Scalar gamma) : alpha_(alpha), beta_(beta), gamma_(gamma) {}

  static Scalar reduce_shear(Scalar gamma, Scalar period) {
    using std::floor;
    Scalar g = gamma - floor(gamma / period) * period;
    // values a few ulps below the period belong to the class of 0
    if (g >= period || period - g <= 64 * std::numeric_limits<Scalar>::epsilon() * period) {
      g = Scalar(0);
    }
    if (g < 0) g = Scalar(0);
    return g;
  }

  Scalar alpha_;
  Scalar beta_;
  Scalar gamma_;
};

using Lattice2D = Lattice2<double>;

/// Canonical lattice generated by the columns of m.
template <typename Derived>
Lattice2<typename Derived::Scalar> from_matrix(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2,
                "from_matrix expects a 2x2 generator");
  const Scalar det = m.determinant();
  const Scalar scale = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || abs(det) <= Scalar(1e-14) * scale * scale) {
    std::ostringstream os;
    os << "generator is singular (|det| = " << abs(det) << ")";
    throw SingularMatrix(os.str());
  }
  const Matrix2<Scalar> g = m.transpose() * m;
  const Scalar beta = sqrt(g(1, 1));
  const Scalar alpha = abs(det) / beta;
  const Scalar gamma = g(0, 1) / (beta * alpha);
  return Lattice2<Scalar>::from_params(alpha, beta, gamma);
}

/// Generator given row by row: [[m11, m12], [m21, m22]].
template <typename Scalar>
Lattice2<Scalar> from_matrix(Scalar m11, Scalar m12, Scalar m21, Scalar m22) {
  Matrix2<Scalar> m;
  m << m11, m12, m21, m22;
  return from_matrix(m);
}

/// Hexagonal lattice of density 2n.
template <typename Scalar = double>
Lattice2<Scalar> hexagonal(int n) {
  using std::sqrt;
  if (n < 1) throw InvalidArgument("redundancy index n must be at least 1");
  const Scalar root2n = sqrt(Scalar(2 * n));
  const Scalar root4of3 = sqrt(sqrt(Scalar(3)));
  const Scalar alpha = root4of3 / (sqrt(Scalar(2)) * root2n);
  const Scalar beta = sqrt(Scalar(2)) / (root4of3 * root2n);
  return Lattice2<Scalar>::from_params(alpha, beta, Scalar(1) / sqrt(Scalar(3)));
}

/// Square lattice of density 2n.
template <typename Scalar = double>
Lattice2<Scalar> square(int n) {
  using std::sqrt;
  if (n < 1) throw InvalidArgument("redundancy index n must be at least 1");
  const Scalar side = Scalar(1) / sqrt(Scalar(2 * n));
  return Lattice2<Scalar>::from_params(side, side, Scalar(0));
}

template <typename Scalar>
GramMatrix<Scalar> gram(const Lattice2<Scalar>& lattice) {
  const Scalar a = lattice.alpha();
  const Scalar b = lattice.beta();
  const Scalar g = lattice.gamma();
  GramMatrix<Scalar> m;
  m << (1 + g * g) * a * a, a * b * g, a * b * g, b * b;
  return m;
}

/// vol(L)^{-1} L. The map is an involution in two dimensions.
template <typename Scalar>
Lattice2<Scalar> adjoint(const Lattice2<Scalar>& lattice) {
  const Scalar v = lattice.volume();
  return Lattice2<Scalar>::from_params(lattice.alpha() / v, lattice.beta() / v, lattice.gamma());
}

template <typename Scalar>
Lattice2<Scalar> scaled(const Lattice2<Scalar>& lattice, Scalar factor) {
  return Lattice2<Scalar>::from_params(factor * lattice.alpha(), factor * lattice.beta(),
                                       lattice.gamma());
}

/// Lattice with generator S * basis.
template <typename Scalar>
Lattice2<Scalar> rebase(const Lattice2<Scalar>& lattice, const IntMatrix2& basis) {
  return from_matrix(Matrix2<Scalar>(lattice.generator() * basis.cast<Scalar>()));
}

/// Binary form q(u1, u2) = a u1^2 + b u1 u2 + c u2^2.
template <typename Scalar>
struct QuadraticForm {
  Scalar a{};
  Scalar b{};
  Scalar c{};

  Scalar discriminant() const { return b * b - 4 * a * c; }

  Scalar operator()(Scalar u1, Scalar u2) const { return a * u1 * u1 + b * u1 * u2 + c * u2 * u2; }

  /// Symmetric matrix G with q(u) = u^T G u.
  Matrix2<Scalar> matrix() const {
    Matrix2<Scalar> m;
    m << a, b / 2, b / 2, c;
    return m;
  }

  bool positive_definite() const { return a > 0 && discriminant() < 0; }

  /// Smallest eigenvalue of matrix().
  Scalar min_eigenvalue() const {
    using std::hypot;
    const Scalar mean = (a + c) / 2;
    const Scalar radius = hypot((a - c) / 2, b / 2);
    // product form avoids cancellation when the form is nearly degenerate
    const Scalar det = a * c - b * b / 4;
    return det / (mean + radius);
  }

  static QuadraticForm from_matrix(const Matrix2<Scalar>& g) {
    return {g(0, 0), g(0, 1) + g(1, 0), g(1, 1)};
  }
};

using QuadraticFormD = QuadraticForm<double>;

/// h(u1, u2) = (u1^2 + u1 u2 + u2^2) / sqrt(3), the form of the hexagonal lattice.
template <typename Scalar = double>
QuadraticForm<Scalar> hexagonal_form() {
  using std::sqrt;
  const Scalar s = Scalar(1) / sqrt(Scalar(3));
  return {s, s, s};
}

/// Form of the lattice normalized to discriminant -1: q = <S u, S u> / (2 vol).
template <typename Scalar>
QuadraticForm<Scalar> quadratic_form(const Lattice2<Scalar>& lattice) {
  const GramMatrix<Scalar> g = gram(lattice);
  const Scalar v = lattice.volume();
  return {g(0, 0) / (2 * v), g(0, 1) / v, g(1, 1) / (2 * v)};
}

/// q(B u); the form of the rebased lattice.
template <typename Scalar>
QuadraticForm<Scalar> rebase(const QuadraticForm<Scalar>& q, const IntMatrix2& basis) {
  const Matrix2<Scalar> m = basis.cast<Scalar>();
  return QuadraticForm<Scalar>::from_matrix(m.transpose() * q.matrix() * m);
}

template <typename Scalar>
struct FormReduction {
  QuadraticForm<Scalar> form;
  /// Basis change with form = rebase(input, basis), det(basis) = 1.
  IntMatrix2 basis;
};

/// Lagrange-Gauss reduction to |b| <= a <= c, preferring b >= 0 on the boundary.
///
/// The integer basis change is accumulated and the reduced coefficients are
/// recomputed from the input form, so rounding does not build up across steps.
template <typename Scalar>
FormReduction<Scalar> reduce(const QuadraticForm<Scalar>& q, Scalar tol = Scalar(1e-12)) {
  using std::abs;
  using std::llround;
  if (!q.positive_definite()) {
    throw NonPositiveParameter("quadratic form is not positive definite");
  }
  IntMatrix2 basis = IntMatrix2::Identity();
  IntMatrix2 swap;
  swap << 0, -1, 1, 0;
  QuadraticForm<Scalar> f = q;
  for (int iter = 0; iter < 10000; ++iter) {
    if (abs(f.b) > f.a * (1 + tol)) {
      IntMatrix2 shift = IntMatrix2::Identity();
      shift(0, 1) = static_cast<std::int64_t>(llround(-f.b / (2 * f.a)));
      basis = basis * shift;
    } else if (f.a > f.c * (1 + tol)) {
      basis = basis * swap;
    } else {
      break;
    }
    f = rebase(q, basis);
  }
  if (f.b < 0) {
    if (abs(abs(f.b) - f.a) <= tol * f.a) {
      IntMatrix2 shift = IntMatrix2::Identity();
      shift(0, 1) = 1;
      basis = basis * shift;
      f = rebase(q, basis);
    } else if (abs(f.a - f.c) <= tol * f.a) {
      basis = basis * swap;
      f = rebase(q, basis);
    }
  }
  return {f, basis};
}

template <typename Scalar>
QuadraticForm<Scalar> reduce_form(const QuadraticForm<Scalar>& q) {
  return reduce(q).form;
}

/// True when the reduced coefficient triples agree within tol.
template <typename Scalar>
bool forms_equivalent(const QuadraticForm<Scalar>& q1, const QuadraticForm<Scalar>& q2,
                      Scalar tol) {
  using std::abs;
  if (abs(q1.discriminant() - q2.discriminant()) > tol) {
    std::ostringstream os;
    os << "discriminants differ: " << q1.discriminant() << " vs " << q2.discriminant();
    throw DiscriminantMismatch(os.str());
  }
  const auto r1 = reduce_form(q1);
  const auto r2 = reduce_form(q2);
  return abs(r1.a - r2.a) <= tol && abs(r1.b - r2.b) <= tol && abs(r1.c - r2.c) <= tol;
}

}  // namespace gabor
