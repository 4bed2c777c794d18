#include "dobrushin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace dobrushin::linalg {
namespace {

struct PadeTerms {
  Matrix u;
  Matrix v;
};

PadeTerms pade3(const Matrix& a) {
  const double b[] = {120.0, 60.0, 12.0, 1.0};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  return {a * (b[3] * a2 + b[1] * id), b[2] * a2 + b[0] * id};
}

PadeTerms pade5(const Matrix& a) {
  const double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  return {a * (b[5] * a4 + b[3] * a2 + b[1] * id), b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade7(const Matrix& a) {
  const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  return {a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade9(const Matrix& a) {
  const double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                      2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  return {a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade13(const Matrix& a) {
  const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                      1187353796428800.0,  129060195264000.0,   10559470521600.0,
                      670442572800.0,      33522128640.0,       1323241920.0,
                      40840800.0,          960960.0,            16380.0,
                      182.0,               1.0};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
             b[1] * id;
  u = a * u;
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
             b[0] * id;
  return {std::move(u), std::move(v)};
}

Matrix pade_ratio(const PadeTerms& t) {
  const Matrix numer = t.v + t.u;
  const Matrix denom = t.v - t.u;
  return denom.partialPivLu().solve(numer);
}

double relative_threshold(const Eigen::VectorXd& singular, double rel_tol) {
  const double top = singular.size() > 0 ? singular(0) : 0.0;
  return rel_tol * std::max(1.0, top);
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("expm: matrix is not square");
  }
  if (a.size() == 0) {
    return a;
  }
  if (!a.allFinite()) {
    throw PreconditionError("expm: matrix has non-finite entries");
  }
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 < 1.495585217958292e-2) return pade_ratio(pade3(a));
  if (norm1 < 2.539398330063230e-1) return pade_ratio(pade5(a));
  if (norm1 < 9.504178996162932e-1) return pade_ratio(pade7(a));
  if (norm1 < 2.097847961257068e0) return pade_ratio(pade9(a));

  constexpr double kTheta13 = 5.371920351148152e0;
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  }
  const Matrix scaled = a * std::ldexp(1.0, -squarings);
  Matrix result = pade_ratio(pade13(scaled));
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
  }
  return result;
}

ExpIntegral expm_with_integral(const Matrix& a, double t) {
  if (a.rows() != a.cols()) {
    throw DimensionError("expm_with_integral: matrix is not square");
  }
  const Eigen::Index n = a.rows();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = t * a;
  block.topRightCorner(n, n) = t * Matrix::Identity(n, n);
  const Matrix e = expm(block);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

Matrix matrix_power(const Matrix& m, unsigned long long p) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix_power: matrix is not square");
  }
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (p > 0) {
    if (p & 1ULL) result = result * base;
    p >>= 1ULL;
    if (p > 0) base = base * base;
  }
  return result;
}

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("spectral_radius: matrix is not square");
  }
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix null_space(const Matrix& m, double rel_tol) {
  if (m.cols() == 0) return Matrix(0, 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double thr = relative_threshold(s, rel_tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const double thr = relative_threshold(s, rel_tol);
  return static_cast<int>((s.array() > thr).count());
}

Quadrature gauss_legendre(int order) {
  if (order < 1) {
    throw PreconditionError("gauss_legendre: order must be >= 1");
  }
  Quadrature q;
  q.nodes.resize(order);
  q.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[order - 1 - i] = x;
    q.weights[i] = w;
    q.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) {
    q.nodes[half - 1] = 0.0;
  }
  return q;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace dobrushin::linalg
