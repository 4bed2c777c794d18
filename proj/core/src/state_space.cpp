#include "dobrushin/state_space.hpp"

#include <algorithm>
#include <cmath>

namespace dobrushin {

StateSpace StateSpace::classical(int n) {
  if (n < 1) {
    throw PreconditionError("classical state space needs n >= 1, got " + std::to_string(n));
  }
  return StateSpace(SpaceKind::Classical, n);
}

StateSpace StateSpace::qubit() { return StateSpace(SpaceKind::Qubit, 4); }

std::string StateSpace::describe() const {
  if (is_qubit()) return "qubit";
  return "classical(" + std::to_string(dim_) + ")";
}

void check_element(const StateSpace& space, const Vector& x) {
  if (x.size() != space.dim()) {
    throw DimensionError("element has " + std::to_string(x.size()) + " coordinates, " +
                         space.describe() + " expects " + std::to_string(space.dim()));
  }
  if (!x.allFinite()) {
    throw PreconditionError("element has non-finite coordinates");
  }
}

double base_norm(const StateSpace& space, const Vector& x) {
  check_element(space, x);
  if (space.is_classical()) {
    return x.cwiseAbs().sum();
  }
  // Eigenvalues of w0*1 + w.s are w0 +- |w|.
  const double r = x.tail<3>().norm();
  return 2.0 * std::max(std::abs(x(0)), r);
}

double functional_f(const StateSpace& space, const Vector& x) {
  check_element(space, x);
  if (space.is_classical()) {
    return x.sum();
  }
  return 2.0 * x(0);
}

bool is_positive(const StateSpace& space, const Vector& x, double tol) {
  check_element(space, x);
  if (space.is_classical()) {
    return x.minCoeff() >= -tol;
  }
  return x(0) >= -tol && x.tail<3>().norm() <= x(0) + tol;
}

bool in_base(const StateSpace& space, const Vector& x, double tol) {
  return is_positive(space, x, tol) && std::abs(functional_f(space, x) - 1.0) <= tol;
}

Vector positive_part(const StateSpace& space, const Vector& x) {
  check_element(space, x);
  if (space.is_classical()) {
    return x.cwiseMax(0.0);
  }
  const Eigen::Vector3d w = x.tail<3>();
  const double r = w.norm();
  const double hi = std::max(x(0) + r, 0.0);
  const double lo = std::max(x(0) - r, 0.0);
  Vector out = Vector::Zero(4);
  // Spectral projectors (1 +- n.s)/2 carry Bloch coordinates (1/2, +-n/2).
  out(0) = 0.5 * (hi + lo);
  if (r > 0.0) {
    out.tail<3>() = 0.5 * (hi - lo) * (w / r);
  }
  return out;
}

Vector qubit_pure_state(const Eigen::Vector3d& direction) {
  const double r = direction.norm();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw PreconditionError("qubit_pure_state: direction must be a finite non-zero vector");
  }
  Vector out(4);
  out(0) = 0.5;
  out.tail<3>() = 0.5 * direction / r;
  return out;
}

Vector qubit_pure_state(double theta, double phi) {
  return qubit_pure_state(Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                          std::sin(theta) * std::sin(phi), std::cos(theta)));
}

}  // namespace dobrushin
