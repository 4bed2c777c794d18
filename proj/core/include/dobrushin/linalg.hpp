#pragma once

#include <utility>
#include <vector>

#include "dobrushin/types.hpp"

namespace dobrushin::linalg {

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant (degree 3, 5, 7, 9 or 13 chosen from the 1-norm, Higham 2005).
Matrix expm(const Matrix& a);

/// exp(t*A) together with the integral of exp(s*A) over s in [0, t], both read
/// off a single exponential of the block matrix [[A, I], [0, 0]] scaled by t.
struct ExpIntegral {
  Matrix exp;       // exp(t*A)
  Matrix integral;  // int_0^t exp(s*A) ds
};
ExpIntegral expm_with_integral(const Matrix& a, double t);

/// Non-negative integer power by binary exponentiation.
Matrix matrix_power(const Matrix& m, unsigned long long p);

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& m);

/// Orthonormal (Euclidean) basis of the null space of m, one column per basis
/// vector. Singular values below rel_tol * max(1, sigma_max) count as zero.
Matrix null_space(const Matrix& m, double rel_tol = 1e-10);

/// Numerical rank with the same thresholding rule as null_space.
int numerical_rank(const Matrix& m, double rel_tol = 1e-10);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(int order);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace dobrushin::linalg
