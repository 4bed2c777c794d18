#pragma once

// Reference computations used only by the tests. None of them call into the
// library's numerical kernels.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double one_norm(const Matrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// exp(A) by Taylor series on A / 2^s followed by s squarings.
inline Matrix expm_taylor(const Matrix& a) {
  const double norm = a.size() ? one_norm(a) : 0.0;
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.125) ++s;
  const Matrix b = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

/// (1/t) int_0^t exp(sA) ds by composite Simpson with `panels` panels.
inline Matrix cesaro_simpson(const Matrix& a, double t, int panels = 4096) {
  const double h = t / panels;
  const Matrix step = expm_taylor(h * a);
  Matrix node = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = node;
  for (int k = 1; k <= panels; ++k) {
    node = node * step;
    sum += (k == panels ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0)) * node;
  }
  return sum * (h / 3.0) / t;
}

/// Hermitian 2x2 matrix w0 1 + w1 s1 + w2 s2 + w3 s3.
inline Eigen::Matrix2cd hermitian(const Vector& w) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m << C(w(0) + w(3), 0), C(w(1), -w(2)), C(w(1), w(2)), C(w(0) - w(3), 0);
  return m;
}

/// Trace norm from the eigenvalues of the Hermitian matrix.
inline double trace_norm(const Vector& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hermitian(w), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const Vector& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hermitian(w), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Pure states on a latitude/longitude grid (Bloch coordinates).
inline std::vector<Vector> pure_state_grid(int lat = 60, int lon = 120) {
  std::vector<Vector> out;
  for (int i = 0; i <= lat; ++i) {
    const double theta = M_PI * i / lat;
    for (int j = 0; j < lon; ++j) {
      const double phi = 2.0 * M_PI * j / lon;
      Vector w(4);
      w << 0.5, 0.5 * std::sin(theta) * std::cos(phi), 0.5 * std::sin(theta) * std::sin(phi),
          0.5 * std::cos(theta);
      out.push_back(w);
    }
  }
  return out;
}

/// Grid lower bound of the induced trace norm (Hermitian inputs).
inline double qubit_norm_grid(const Matrix& t) {
  double best = 0.0;
  for (const Vector& w : pure_state_grid()) best = std::max(best, trace_norm(t * w));
  return best;
}

/// Block projection matrix from a partition and per-block weights
/// (indexed within the block).
inline Matrix block_matrix(int n, const std::vector<std::vector<int>>& blocks,
                           const std::vector<std::vector<double>>& weights) {
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (int col : blocks[j]) {
      for (std::size_t a = 0; a < blocks[j].size(); ++a) p(blocks[j][a], col) = weights[j][a];
    }
  }
  return p;
}

/// Lower bound of |T|_{N_P} by random kernel directions of a block
/// projection: x with zero block sums.
inline double delta_sampled(const Matrix& t, const std::vector<std::vector<int>>& blocks,
                            std::mt19937_64& rng, int samples = 2000) {
  std::normal_distribution<double> g;
  const int n = static_cast<int>(t.rows());
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x = Vector::Zero(n);
    for (const auto& b : blocks) {
      if (b.size() < 2) continue;
      double mean = 0.0;
      for (int i : b) {
        x(i) = g(rng);
        mean += x(i);
      }
      mean /= static_cast<double>(b.size());
      for (int i : b) x(i) -= mean;
    }
    const double nx = x.lpNorm<1>();
    if (nx > 0) best = std::max(best, (t * x).lpNorm<1>() / nx);
  }
  return best;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace oracle
