#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dobrushin/markov.hpp"

namespace dobrushin {

enum class DeltaMethod { BlockExact, VertexEnumeration, PairFormula, QubitDiagonal, Bracket };

std::string to_string(DeltaMethod m);

/// Value (or bracket) of the generalized Dobrushin coefficient
///   delta_P(T) = sup { |Tx| / |x| : x in N_P, x != 0 }.
struct DeltaResult {
  double lower = 0.0;
  double upper = 0.0;
  DeltaMethod method = DeltaMethod::Bracket;
  std::optional<Vector> witness;  // in N_P with unit base norm
  std::string note;

  bool is_exact() const { return lower == upper; }
  /// Exact value, or the upper end of a bracket (the sound side for
  /// certification).
  double value() const { return upper; }
};

/// Exact coefficient for a classical lumping projection:
///   (1/2) max_j max_{i,k in B_j} |T(e_i - e_k)|_1,
/// witness (e_i - e_k)/2 with the lexicographically smallest (j, i, k).
/// Returns 1 when every block is a singleton (P = I).
DeltaResult delta_exact(const Matrix& t, const MarkovProjection& p);

/// Pair form (1/2) sup |Tu - Tv| over base elements u, v with u - v in N_P,
/// evaluated on same-block vertex pairs (e_i, e_k).
DeltaResult delta_pair_formula(const Matrix& t, const MarkovProjection& p);

/// Largest dimension accepted by delta_vertex_enum.
inline constexpr int kVertexEnumMaxDim = 10;

/// Exact coefficient for an arbitrary classical idempotent matrix P by
/// enumerating the vertices of {x : Px = 0, |x|_1 <= 1} and maximising
/// |Tx|_1 over them.
DeltaResult delta_vertex_enum(const Matrix& t, const Matrix& p, double tol = 1e-10);

/// Exact coefficient on the qubit space for diagonal Bloch matrices T and a
/// diagonal idempotent P: max |T_ii| over the coordinates spanning N_P.
DeltaResult delta_qubit_diagonal(const Matrix& t, const Matrix& p);

struct BracketOptions {
  int restarts = 16;
  std::uint64_t seed = 1;
};

/// Lower bound by pattern search over directions in N_P, upper bound
/// |T(I - P)|. Works on both spaces.
DeltaResult delta_bracket(const StateSpace& space, const Matrix& t, const Matrix& p,
                          const BracketOptions& options = {});

/// Picks the strongest available method: block-exact, qubit-diagonal,
/// vertex enumeration (classical, n <= 10), otherwise a bracket.
DeltaResult delta_auto(const Matrix& t, const MarkovProjection& p);

/// Induced operator norm in the base norm. Classical: max column l1 norm.
/// Qubit: sup over pure states of the trace norm of the image; closed form
/// when the map has no affine (translation) part, sphere search otherwise.
double induced_norm(const StateSpace& space, const Matrix& t);

struct NormEstimate {
  double value = 0.0;
  bool exact = false;       // closed form used
  bool stabilized = false;  // top search restarts agree within 1e-10
};

NormEstimate induced_norm_estimate(const StateSpace& space, const Matrix& t, int restarts = 8,
                                   std::uint64_t seed = 7);

/// Maximise a function of a unit 3-vector: coarse latitude/longitude grid,
/// then pattern search from the best cells and from random starts. Returns
/// the best value and direction; `spread` is the gap between the best and the
/// worst of the refined top candidates.
struct SphereMax {
  double value = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
  double spread = 0.0;
};

template <class F>
SphereMax maximize_on_sphere(F&& f, int restarts, std::uint64_t seed);

}  // namespace dobrushin

#include "dobrushin/detail/sphere_search.hpp"
