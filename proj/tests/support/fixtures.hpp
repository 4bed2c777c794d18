#pragma once

// Small named instances shared by unit and acceptance tests.

#include <cmath>

#include <dobrushin/markov.hpp>
#include <dobrushin/semigroup.hpp>

namespace fixture {

using dobrushin::Matrix;
using dobrushin::Vector;

/// Two-state chain with unit rates in both directions.
inline Matrix two_state_generator() {
  Matrix a(2, 2);
  a << -1, 1, 1, -1;
  return a;
}

inline dobrushin::MarkovProjection uniform_projection(int n) {
  return dobrushin::block_projection(dobrushin::StateSpace::classical(n), {[n] {
                                       std::vector<int> all(n);
                                       for (int i = 0; i < n; ++i) all[i] = i;
                                       return all;
                                     }()},
                                     {Vector::Constant(n, 1.0 / n)});
}

inline dobrushin::Semigroup two_state() {
  return dobrushin::Semigroup::continuous(dobrushin::StateSpace::classical(2),
                                          two_state_generator(), uniform_projection(2));
}

/// Symmetric 3-state generator with eigenvalues 0, -1, -3. The two decaying
/// modes are a rotation by 0.3 rad of (1,0,-1)/sqrt2 and (1,-2,1)/sqrt6, so
/// no coordinate pair isolates a single rate.
inline Matrix three_state_two_rate_generator() {
  Eigen::Vector3d a(1, 0, -1), b(1, -2, 1);
  a.normalize();
  b.normalize();
  const double th = 0.3;
  const Eigen::Vector3d u1 = std::cos(th) * a + std::sin(th) * b;
  const Eigen::Vector3d u2 = -std::sin(th) * a + std::cos(th) * b;
  return -u1 * u1.transpose() - 3.0 * u2 * u2.transpose();
}

inline dobrushin::Semigroup three_state_two_rate() {
  return dobrushin::Semigroup::continuous(dobrushin::StateSpace::classical(3),
                                          three_state_two_rate_generator(), uniform_projection(3));
}

/// The frozen semigroup T_t = I on n states.
inline dobrushin::Semigroup frozen(int n) {
  return dobrushin::Semigroup::continuous(dobrushin::StateSpace::classical(n), Matrix::Zero(n, n));
}

}  // namespace fixture
