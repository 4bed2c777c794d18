#pragma once

#include <string>

#include "dobrushin/types.hpp"

namespace dobrushin {

enum class SpaceKind { Classical, Qubit };

/// A finite-dimensional abstract state space in fixed coordinates.
///
/// Classical(n): R^n with the l1 norm, positive cone R^n_+, base the
/// probability simplex, f = sum of coordinates.
///
/// Qubit: 2x2 Hermitian matrices in Bloch coordinates (w0, w1, w2, w3) for
/// x = w0*1 + w1*s1 + w2*s2 + w3*s3, with the trace norm, the positive
/// semidefinite cone, base = density matrices, f = trace = 2*w0.
class StateSpace {
 public:
  static StateSpace classical(int n);
  static StateSpace qubit();

  SpaceKind kind() const { return kind_; }
  bool is_classical() const { return kind_ == SpaceKind::Classical; }
  bool is_qubit() const { return kind_ == SpaceKind::Qubit; }
  int dim() const { return dim_; }
  std::string describe() const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  StateSpace(SpaceKind kind, int dim) : kind_(kind), dim_(dim) {}

  SpaceKind kind_;
  int dim_;
};

/// Throws DimensionError unless x has space.dim() finite coordinates.
void check_element(const StateSpace& space, const Vector& x);

/// Base norm: l1 for Classical, trace norm 2*max(|w0|, |w|) for Qubit.
double base_norm(const StateSpace& space, const Vector& x);

/// The strictly positive functional f defining the base.
double functional_f(const StateSpace& space, const Vector& x);

/// Membership in the positive cone up to tol.
bool is_positive(const StateSpace& space, const Vector& x, double tol = kDefaultTol);

/// Membership in the base (positive with unit f-mass) up to tol.
bool in_base(const StateSpace& space, const Vector& x, double tol = kDefaultTol);

/// Positive part x_+ in the order of the space: coordinatewise for Classical,
/// spectral for Qubit. x = x_+ - x_- with both parts positive.
Vector positive_part(const StateSpace& space, const Vector& x);

/// Pure qubit state with Bloch direction n (normalised internally).
Vector qubit_pure_state(const Eigen::Vector3d& direction);

/// Pure qubit state at polar angle theta and azimuth phi.
Vector qubit_pure_state(double theta, double phi);

}  // namespace dobrushin
