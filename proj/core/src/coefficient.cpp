#include "dobrushin/coefficient.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "dobrushin/linalg.hpp"

namespace dobrushin {

std::string to_string(DeltaMethod m) {
  switch (m) {
    case DeltaMethod::BlockExact: return "block_exact";
    case DeltaMethod::VertexEnumeration: return "vertex_enumeration";
    case DeltaMethod::PairFormula: return "pair_formula";
    case DeltaMethod::QubitDiagonal: return "qubit_diagonal";
    case DeltaMethod::Bracket: return "bracket";
  }
  return "unknown";
}

namespace {

DeltaResult exact_result(double v, DeltaMethod m) {
  DeltaResult r;
  r.lower = v;
  r.upper = v;
  r.method = m;
  return r;
}

DeltaResult identity_convention(DeltaMethod m) {
  DeltaResult r = exact_result(1.0, m);
  r.note = "P = I: coefficient is 1 by convention";
  return r;
}

const BlockStructure& require_blocks(const Matrix& t, const MarkovProjection& p,
                                     const char* what) {
  if (!p.space().is_classical() || !p.has_blocks()) {
    throw PreconditionError(std::string(what) + ": needs a classical block projection");
  }
  if (t.rows() != p.space().dim() || t.cols() != p.space().dim()) {
    throw DimensionError(std::string(what) + ": operator shape does not match the projection");
  }
  return *p.blocks();
}

bool all_singletons(const BlockStructure& s) {
  return std::all_of(s.blocks.begin(), s.blocks.end(),
                     [](const std::vector<int>& b) { return b.size() == 1; });
}

bool is_diagonal(const Matrix& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

void check_idempotent(const Matrix& p, double tol, const char* what) {
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if (linalg::max_abs_diff(p * p, p) > tol * scale) {
    throw PreconditionError(std::string(what) + ": P is not idempotent");
  }
}

}  // namespace

DeltaResult delta_exact(const Matrix& t, const MarkovProjection& p) {
  const BlockStructure& s = require_blocks(t, p, "delta_exact");
  if (all_singletons(s)) return identity_convention(DeltaMethod::BlockExact);
  const Eigen::Index n = t.rows();
  double best = -1.0;
  Vector witness;
  Vector x = Vector::Zero(n);
  for (const auto& block : s.blocks) {
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        x.setZero();
        x(block[a]) = 0.5;
        x(block[b]) = -0.5;
        const double v = (t * x).cwiseAbs().sum();
        if (v > best) {
          best = v;
          witness = x;
        }
      }
    }
  }
  DeltaResult r = exact_result(best, DeltaMethod::BlockExact);
  r.witness = witness;
  return r;
}

DeltaResult delta_pair_formula(const Matrix& t, const MarkovProjection& p) {
  const BlockStructure& s = require_blocks(t, p, "delta_pair_formula");
  if (all_singletons(s)) return identity_convention(DeltaMethod::PairFormula);
  double best = -1.0;
  int wi = -1;
  int wk = -1;
  for (const auto& block : s.blocks) {
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const double v = 0.5 * (t.col(block[a]) - t.col(block[b])).cwiseAbs().sum();
        if (v > best) {
          best = v;
          wi = block[a];
          wk = block[b];
        }
      }
    }
  }
  DeltaResult r = exact_result(best, DeltaMethod::PairFormula);
  Vector w = Vector::Zero(t.rows());
  w(wi) = 0.5;
  w(wk) = -0.5;
  r.witness = w;
  return r;
}

DeltaResult delta_vertex_enum(const Matrix& t, const Matrix& p, double tol) {
  const Eigen::Index n = p.rows();
  if (p.cols() != n || t.rows() != n || t.cols() != n) {
    throw DimensionError("delta_vertex_enum: operator and projection shapes differ");
  }
  if (n > kVertexEnumMaxDim) {
    throw PreconditionError("delta_vertex_enum: dimension " + std::to_string(n) +
                            " exceeds the enumeration guard of " +
                            std::to_string(kVertexEnumMaxDim));
  }
  check_idempotent(p, tol, "delta_vertex_enum");
  const int rank = linalg::numerical_rank(p, tol);
  if (rank == n) return identity_convention(DeltaMethod::VertexEnumeration);

  // A vertex x of {Px = 0, |x|_1 <= 1} has support S with
  // dim(ker P ∩ R^S) = 1, so |S| <= rank + 1. Every such S yields the
  // candidates ±v/|v|_1; the objective is even, so +v suffices.
  double best = -1.0;
  Vector witness;
  const unsigned limit = 1u << n;
  std::vector<int> support;
  for (unsigned mask = 1; mask < limit; ++mask) {
    const int size = std::popcount(mask);
    if (size > rank + 1) continue;
    support.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }
    Matrix sub(n, size);
    for (int k = 0; k < size; ++k) sub.col(k) = p.col(support[k]);
    const Matrix kernel = linalg::null_space(sub, tol);
    if (kernel.cols() != 1) continue;
    Vector v = Vector::Zero(n);
    for (int k = 0; k < size; ++k) v(support[k]) = kernel(k, 0);
    const double l1 = v.cwiseAbs().sum();
    if (l1 <= 0.0) continue;
    v /= l1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-15) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    const double value = (t * v).cwiseAbs().sum();
    if (value > best) {
      best = value;
      witness = v;
    }
  }
  DeltaResult r = exact_result(best, DeltaMethod::VertexEnumeration);
  r.witness = witness;
  return r;
}

DeltaResult delta_qubit_diagonal(const Matrix& t, const Matrix& p) {
  if (t.rows() != 4 || t.cols() != 4 || p.rows() != 4 || p.cols() != 4) {
    throw DimensionError("delta_qubit_diagonal: expects 4x4 Bloch matrices");
  }
  if (!is_diagonal(t, 1e-14) || !is_diagonal(p, 1e-14)) {
    throw PreconditionError("delta_qubit_diagonal: T and P must be diagonal in Bloch coordinates");
  }
  for (int i = 0; i < 4; ++i) {
    const double d = p(i, i);
    if (std::abs(d) > 1e-12 && std::abs(d - 1.0) > 1e-12) {
      throw PreconditionError("delta_qubit_diagonal: P is not an idempotent diagonal matrix");
    }
  }
  // N_P is spanned by the Bloch coordinates where P has a 0. On that span the
  // trace norm is 2*max(|w0|, |w|) and T scales each coordinate, so
  // sup |Tx|/|x| = max |T_ii|.
  double best = -1.0;
  int arg = -1;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(p(i, i)) > 1e-12) continue;
    const double v = std::abs(t(i, i));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (arg < 0) return identity_convention(DeltaMethod::QubitDiagonal);
  DeltaResult r = exact_result(best, DeltaMethod::QubitDiagonal);
  Vector w = Vector::Zero(4);
  w(arg) = 0.5;
  r.witness = w;
  return r;
}

DeltaResult delta_bracket(const StateSpace& space, const Matrix& t, const Matrix& p,
                          const BracketOptions& options) {
  const Eigen::Index n = space.dim();
  if (t.rows() != n || t.cols() != n || p.rows() != n || p.cols() != n) {
    throw DimensionError("delta_bracket: shapes do not match " + space.describe());
  }
  check_idempotent(p, 1e-10, "delta_bracket");
  const Matrix kernel = linalg::null_space(p);
  const Eigen::Index d = kernel.cols();
  if (d == 0) {
    DeltaResult r = identity_convention(DeltaMethod::Bracket);
    r.note = "ker P = {0} (P = I): coefficient is 1 by convention";
    return r;
  }

  const Matrix restricted = t * kernel;
  auto ratio = [&](const Vector& c) {
    const double den = base_norm(space, kernel * c);
    if (den <= 0.0) return 0.0;
    return base_norm(space, restricted * c) / den;
  };

  std::vector<Vector> starts;
  for (Eigen::Index k = 0; k < d; ++k) starts.push_back(Vector::Unit(d, k));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    Vector c(d);
    for (Eigen::Index k = 0; k < d; ++k) c(k) = gauss(rng);
    if (c.norm() < 1e-12) c = Vector::Unit(d, 0);
    starts.push_back(c.normalized());
  }

  double best = -1.0;
  Vector best_c;
  for (Vector c : starts) {
    double value = ratio(c);
    double h = 0.5;
    int guard = 0;
    while (h > 1e-12 && guard++ < 20000) {
      bool improved = false;
      for (Eigen::Index k = 0; k < d && !improved; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = c;
          trial(k) += sign * h;
          const double nrm = trial.norm();
          if (nrm < 1e-14) continue;
          trial /= nrm;
          const double v = ratio(trial);
          if (v > value) {
            value = v;
            c = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    if (value > best) {
      best = value;
      best_c = c;
    }
  }

  const Matrix complement = Matrix::Identity(n, n) - p;
  const NormEstimate upper = induced_norm_estimate(space, t * complement);
  DeltaResult r;
  r.method = DeltaMethod::Bracket;
  r.lower = std::max(0.0, best);
  r.upper = std::max(upper.value, r.lower);
  Vector w = kernel * best_c;
  const double wn = base_norm(space, w);
  if (wn > 0.0) r.witness = w / wn;
  if (!upper.exact) r.note = "upper bound from sphere search of |T(I-P)|";
  return r;
}

DeltaResult delta_auto(const Matrix& t, const MarkovProjection& p) {
  const StateSpace& space = p.space();
  if (space.is_classical() && p.has_blocks()) return delta_exact(t, p);
  if (space.is_qubit() && is_diagonal(t, 1e-14) && is_diagonal(p.matrix(), 1e-14)) {
    return delta_qubit_diagonal(t, p.matrix());
  }
  if (space.is_classical() && space.dim() <= kVertexEnumMaxDim) {
    return delta_vertex_enum(t, p.matrix());
  }
  return delta_bracket(space, t, p.matrix());
}

NormEstimate induced_norm_estimate(const StateSpace& space, const Matrix& t, int restarts,
                                   std::uint64_t seed) {
  if (t.rows() != space.dim() || t.cols() != space.dim()) {
    throw DimensionError("induced_norm: operator shape does not match " + space.describe());
  }
  NormEstimate out;
  if (space.is_classical()) {
    out.value = t.size() == 0 ? 0.0 : t.cwiseAbs().colwise().sum().maxCoeff();
    out.exact = true;
    out.stabilized = true;
    return out;
  }
  // Unit ball = conv{±pure states}; the image of (1/2, n/2) has trace norm
  // max(|t00 + b.n|, |c + L n|) with b = t(0,1:3), c = t(1:3,0), L = t(1:3,1:3).
  const double scalar_part = std::abs(t(0, 0)) + t.block<1, 3>(0, 1).norm();
  const Eigen::Vector3d c = t.block<3, 1>(1, 0);
  const Eigen::Matrix3d l = t.block<3, 3>(1, 1);
  double vector_part = 0.0;
  if (c.norm() <= 1e-15 * std::max(1.0, l.cwiseAbs().maxCoeff())) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(l);
    vector_part = svd.singularValues()(0);
    out.exact = true;
    out.stabilized = true;
  } else {
    const SphereMax m = maximize_on_sphere(
        [&](const Eigen::Vector3d& n) { return (c + l * n).norm(); }, restarts, seed);
    vector_part = m.value;
    out.exact = false;
    out.stabilized = m.spread <= 1e-10;
  }
  out.value = std::max(scalar_part, vector_part);
  if (scalar_part >= vector_part) {
    out.exact = true;
    out.stabilized = true;
  }
  return out;
}

double induced_norm(const StateSpace& space, const Matrix& t) {
  return induced_norm_estimate(space, t).value;
}

}  // namespace dobrushin
