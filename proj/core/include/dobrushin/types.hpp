#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dobrushin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance used by the positivity and Markov checks unless a call
/// overrides it.
inline constexpr double kDefaultTol = 1e-9;

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree with each other or with the state space.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (negative time, a projection
/// that is not idempotent, a semigroup of the wrong kind, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dobrushin
