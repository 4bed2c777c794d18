#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dobrushin/state_space.hpp"

namespace dobrushin {

/// A linear map on a state space, acting on coordinate column vectors from
/// the left. Construction only checks the shape; Markovianity is reported by
/// validate_markov.
class MarkovOperator {
 public:
  MarkovOperator(StateSpace space, Matrix matrix);

  static MarkovOperator identity(const StateSpace& space);

  const StateSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  Vector apply(const Vector& x) const;

  MarkovOperator compose(const MarkovOperator& rhs) const;  // this * rhs

 private:
  StateSpace space_;
  Matrix matrix_;
};

struct MarkovReport {
  bool is_positive = false;
  bool preserves_base = false;
  bool positivity_exact = false;  // false when positivity was checked by sampling
  bool is_markov() const { return is_positive && preserves_base; }
};

/// Number of Haar-random pure states used for sampled qubit positivity.
inline constexpr int kQubitPositivitySamples = 10000;

/// Positivity plus f o T = f. Classical checks are exact (entries >= -tol,
/// column sums 1). Qubit checks use the exact criterion for diagonal Bloch
/// matrices and sampled pure states otherwise.
MarkovReport validate_markov(const MarkovOperator& t, double tol = kDefaultTol);

/// Partition of {0..n-1} with one probability vector (length n, supported on
/// its block) per block.
struct BlockStructure {
  std::vector<std::vector<int>> blocks;
  std::vector<Vector> weights;
};

/// An idempotent Markov operator. Classical lumping projections keep their
/// block structure, which enables exact coefficient computation.
class MarkovProjection {
 public:
  /// P x = sum_j (mass of x on block j) * weights[j].
  static MarkovProjection from_blocks(const StateSpace& space,
                                      std::vector<std::vector<int>> blocks,
                                      std::vector<Vector> weights, double tol = kDefaultTol);

  /// A raw projection matrix; checked for idempotency and Markovianity.
  static MarkovProjection from_matrix(const StateSpace& space, const Matrix& matrix,
                                      double tol = kDefaultTol);

  /// Rank-one projection x -> f(x) * state.
  static MarkovProjection rank_one(const StateSpace& space, const Vector& state,
                                   double tol = kDefaultTol);

  const StateSpace& space() const { return op_.space(); }
  const Matrix& matrix() const { return op_.matrix(); }
  const MarkovOperator& op() const { return op_; }
  const std::optional<BlockStructure>& blocks() const { return blocks_; }
  bool has_blocks() const { return blocks_.has_value(); }

  /// True when N_P = {0}, i.e. P is the identity.
  bool is_identity(double tol = 1e-12) const;

  /// Orthonormal basis of N_P = {x : P x = 0} in coordinate space.
  Matrix kernel_basis() const;

  std::string describe() const;

 private:
  MarkovProjection(MarkovOperator op, std::optional<BlockStructure> blocks)
      : op_(std::move(op)), blocks_(std::move(blocks)) {}

  MarkovOperator op_;
  std::optional<BlockStructure> blocks_;
};

/// Same as MarkovProjection::from_blocks.
MarkovProjection block_projection(const StateSpace& space,
                                  std::vector<std::vector<int>> blocks,
                                  std::vector<Vector> weights, double tol = kDefaultTol);

struct ProjectionRelations {
  bool p_idempotent = false;
  bool q_leq_p = false;       // Q = QP = PQ
  bool t_commutes_p = false;  // TP = PT
  bool tp_equals_p = false;   // TP = P
};

ProjectionRelations projection_relations(const MarkovProjection& p, const MarkovProjection& q,
                                         const MarkovOperator& t, double tol = 1e-12);

/// max_ij |(TP - PT)_ij| and max_ij |(TP - P)_ij| for repeated use in
/// semigroup-level checks.
double commutator_gap(const Matrix& t, const Matrix& p);
double invariance_gap(const Matrix& t, const Matrix& p);

}  // namespace dobrushin
