#include "dobrushin/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dobrushin/linalg.hpp"

namespace dobrushin {

MarkovOperator::MarkovOperator(StateSpace space, Matrix matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw DimensionError("operator is " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", " + space_.describe() +
                         " needs " + std::to_string(space_.dim()) + "x" +
                         std::to_string(space_.dim()));
  }
  if (!matrix_.allFinite()) {
    throw PreconditionError("operator has non-finite entries");
  }
}

MarkovOperator MarkovOperator::identity(const StateSpace& space) {
  return MarkovOperator(space, Matrix::Identity(space.dim(), space.dim()));
}

Vector MarkovOperator::apply(const Vector& x) const {
  check_element(space_, x);
  return matrix_ * x;
}

MarkovOperator MarkovOperator::compose(const MarkovOperator& rhs) const {
  if (!(space_ == rhs.space_)) {
    throw DimensionError("compose: operators live on different spaces");
  }
  return MarkovOperator(space_, matrix_ * rhs.matrix_);
}

namespace {

bool is_diagonal(const Matrix& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

bool sampled_qubit_positivity(const Matrix& m, double tol) {
  const StateSpace qubit = StateSpace::qubit();
  // Axis states first, then Haar-random pure states from a fixed stream.
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Eigen::Vector3d d = Eigen::Vector3d::Zero();
      d(axis) = sign;
      if (!is_positive(qubit, m * qubit_pure_state(d), tol)) return false;
    }
  }
  std::mt19937_64 rng(0x5eed'0b10c4ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < kQubitPositivitySamples; ++k) {
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    if (d.norm() < 1e-12) continue;
    if (!is_positive(qubit, m * qubit_pure_state(d), tol)) return false;
  }
  return true;
}

}  // namespace

MarkovReport validate_markov(const MarkovOperator& t, double tol) {
  const Matrix& m = t.matrix();
  MarkovReport report;
  if (t.space().is_classical()) {
    report.is_positive = m.minCoeff() >= -tol;
    report.preserves_base = (m.colwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
    report.positivity_exact = true;
    return report;
  }
  // f(x) = 2 w0, so f o T = f means the first row of the Bloch matrix is e0.
  Eigen::RowVector4d first = m.row(0);
  report.preserves_base = (first - Eigen::RowVector4d(1.0, 0.0, 0.0, 0.0)).cwiseAbs().maxCoeff() <= tol;
  if (is_diagonal(m, tol)) {
    // Pure state (1/2, n/2) maps to (d0/2, d∘n/2): positive for all unit n iff
    // max_i |d_i| <= d0.
    const double d0 = m(0, 0);
    const double spread = m.diagonal().tail<3>().cwiseAbs().maxCoeff();
    report.is_positive = d0 >= -tol && spread <= d0 + tol;
    report.positivity_exact = true;
  } else {
    report.is_positive = sampled_qubit_positivity(m, tol);
    report.positivity_exact = false;
  }
  return report;
}

MarkovProjection MarkovProjection::from_blocks(const StateSpace& space,
                                               std::vector<std::vector<int>> blocks,
                                               std::vector<Vector> weights, double tol) {
  if (!space.is_classical()) {
    throw PreconditionError("block projections are defined on classical spaces only");
  }
  const int n = space.dim();
  if (blocks.empty()) {
    throw PreconditionError("block projection needs at least one block");
  }
  if (weights.size() != blocks.size()) {
    throw PreconditionError("block projection: " + std::to_string(blocks.size()) +
                            " blocks but " + std::to_string(weights.size()) + " weight vectors");
  }
  std::vector<int> owner(n, -1);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j].empty()) {
      throw PreconditionError("block " + std::to_string(j) + " is empty");
    }
    std::sort(blocks[j].begin(), blocks[j].end());
    for (int i : blocks[j]) {
      if (i < 0 || i >= n) {
        throw PreconditionError("block index " + std::to_string(i) + " outside 0.." +
                                std::to_string(n - 1));
      }
      if (owner[i] != -1) {
        throw PreconditionError("index " + std::to_string(i) + " appears in more than one block");
      }
      owner[i] = static_cast<int>(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (owner[i] == -1) {
      throw PreconditionError("index " + std::to_string(i) + " is not covered by any block");
    }
  }
  // Lexicographic block order keeps witnesses and reports deterministic.
  std::vector<std::size_t> order(blocks.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return blocks[a].front() < blocks[b].front(); });

  BlockStructure structure;
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t idx : order) {
    const auto& block = blocks[idx];
    const Vector& w = weights[idx];
    if (w.size() != n) {
      throw DimensionError("weight vector for block " + std::to_string(idx) + " has length " +
                           std::to_string(w.size()) + ", expected " + std::to_string(n));
    }
    if (!w.allFinite() || w.minCoeff() < -tol || std::abs(w.sum() - 1.0) > tol) {
      throw PreconditionError("weight vector for block " + std::to_string(idx) +
                              " is not a probability vector");
    }
    for (int i = 0; i < n; ++i) {
      const bool inside = std::binary_search(block.begin(), block.end(), i);
      if (!inside && std::abs(w(i)) > tol) {
        throw PreconditionError("weight vector for block " + std::to_string(idx) +
                                " has mass outside its block at index " + std::to_string(i));
      }
    }
    Vector clean = w;
    for (int i = 0; i < n; ++i) {
      if (!std::binary_search(block.begin(), block.end(), i)) clean(i) = 0.0;
    }
    for (int i : block) m.col(i) = clean;
    structure.blocks.push_back(block);
    structure.weights.push_back(std::move(clean));
  }
  return MarkovProjection(MarkovOperator(space, std::move(m)), std::move(structure));
}

MarkovProjection MarkovProjection::from_matrix(const StateSpace& space, const Matrix& matrix,
                                               double tol) {
  MarkovOperator op(space, matrix);
  if (linalg::max_abs_diff(matrix * matrix, matrix) > tol) {
    throw PreconditionError("projection matrix is not idempotent");
  }
  const MarkovReport report = validate_markov(op, tol);
  if (!report.is_markov()) {
    throw PreconditionError("projection matrix is not a Markov operator");
  }
  return MarkovProjection(std::move(op), std::nullopt);
}

MarkovProjection MarkovProjection::rank_one(const StateSpace& space, const Vector& state,
                                            double tol) {
  if (!in_base(space, state, tol)) {
    throw PreconditionError("rank-one projection needs a state in the base");
  }
  if (space.is_classical()) {
    std::vector<int> all(space.dim());
    for (int i = 0; i < space.dim(); ++i) all[i] = i;
    return from_blocks(space, {all}, {state}, tol);
  }
  // x -> f(x) * state, f = 2 w0.
  Matrix m = Matrix::Zero(4, 4);
  m.col(0) = 2.0 * state;
  return from_matrix(space, m, tol);
}

bool MarkovProjection::is_identity(double tol) const {
  return linalg::max_abs_diff(matrix(), Matrix::Identity(matrix().rows(), matrix().cols())) <= tol;
}

Matrix MarkovProjection::kernel_basis() const { return linalg::null_space(matrix()); }

std::string MarkovProjection::describe() const {
  std::ostringstream os;
  if (blocks_) {
    os << "blocks";
    for (std::size_t j = 0; j < blocks_->blocks.size(); ++j) {
      os << (j == 0 ? " {" : " | {");
      for (std::size_t k = 0; k < blocks_->blocks[j].size(); ++k) {
        if (k) os << ",";
        os << blocks_->blocks[j][k];
      }
      os << "}";
    }
  } else {
    os << "matrix on " << space().describe();
  }
  return os.str();
}

MarkovProjection block_projection(const StateSpace& space, std::vector<std::vector<int>> blocks,
                                  std::vector<Vector> weights, double tol) {
  return MarkovProjection::from_blocks(space, std::move(blocks), std::move(weights), tol);
}

double commutator_gap(const Matrix& t, const Matrix& p) {
  return linalg::max_abs_diff(t * p, p * t);
}

double invariance_gap(const Matrix& t, const Matrix& p) {
  return linalg::max_abs_diff(t * p, p);
}

ProjectionRelations projection_relations(const MarkovProjection& p, const MarkovProjection& q,
                                         const MarkovOperator& t, double tol) {
  if (!(p.space() == q.space()) || !(p.space() == t.space())) {
    throw DimensionError("projection_relations: operands live on different spaces");
  }
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  const Matrix& tm = t.matrix();
  ProjectionRelations r;
  r.p_idempotent = linalg::max_abs_diff(pm * pm, pm) <= tol;
  r.q_leq_p = linalg::max_abs_diff(qm * pm, qm) <= tol && linalg::max_abs_diff(pm * qm, qm) <= tol;
  r.t_commutes_p = commutator_gap(tm, pm) <= tol;
  r.tp_equals_p = invariance_gap(tm, pm) <= tol;
  return r;
}

}  // namespace dobrushin
