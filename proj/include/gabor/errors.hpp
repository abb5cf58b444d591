#pragma once

#include <stdexcept>
#include <string>

namespace gabor {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition on a call argument failed (sample counts, tolerances, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class DiscriminantMismatch : public Error {
public:
  using Error::Error;
};

/// A scale parameter was zero, negative, or not a number.
class NonPositiveParameter : public Error {
public:
  using Error::Error;
};

/// A scale parameter lies outside the range where series evaluation is supported.
class ParameterOutOfRange : public NonPositiveParameter {
public:
  using NonPositiveParameter::NonPositiveParameter;
};

class TruncationOverflow : public Error {
public:
  using Error::Error;
};

/// Lattice density does not match the requested redundancy 2n.
class DensityMismatch : public Error {
public:
  using Error::Error;
};

class GridTooCoarse : public Error {
public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
  using Error::Error;
};

/// An internal identity that must hold up to truncation and rounding did not.
class IdentityViolation : public Error {
public:
  using Error::Error;
};

}  // namespace gabor
