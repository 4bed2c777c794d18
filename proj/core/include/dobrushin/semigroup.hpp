#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dobrushin/markov.hpp"

namespace dobrushin {

enum class SemigroupKind { Continuous, Discrete };

/// A Markov semigroup in column convention: either T_t = exp(tA) for a
/// generator A, or T_n = step^n for integer n.
class Semigroup {
 public:
  static Semigroup continuous(const StateSpace& space, Matrix generator,
                              std::optional<MarkovProjection> commuting_projection = std::nullopt);
  static Semigroup discrete(MarkovOperator step,
                            std::optional<MarkovProjection> commuting_projection = std::nullopt);

  const StateSpace& space() const { return space_; }
  SemigroupKind kind() const { return kind_; }
  bool is_continuous() const { return kind_ == SemigroupKind::Continuous; }
  bool is_discrete() const { return kind_ == SemigroupKind::Discrete; }

  /// Generator A (Continuous) or step operator (Discrete).
  const Matrix& matrix() const { return matrix_; }
  const std::optional<MarkovProjection>& commuting_projection() const { return projection_; }
  Semigroup with_projection(std::optional<MarkovProjection> p) const;

  /// T_t. Discrete semigroups require integral t.
  MarkovOperator evaluate(double t) const;

  /// Cesaro average (1/t) int_0^t T_s ds, or (1/n) sum_{k=1}^n T^k.
  MarkovOperator cesaro(double t) const;

  std::string describe() const;

 private:
  Semigroup(StateSpace space, SemigroupKind kind, Matrix m, std::optional<MarkovProjection> p)
      : space_(space), kind_(kind), matrix_(std::move(m)), projection_(std::move(p)) {}

  StateSpace space_;
  SemigroupKind kind_;
  Matrix matrix_;
  std::optional<MarkovProjection> projection_;
};

struct GeneratorReport {
  bool passed = false;
  bool rate_matrix = false;           // Classical: off-diagonal >= 0, column sums 0
  bool sampled_markov = false;        // Qubit (or Discrete step): exp(tA) Markov at sample times
  std::optional<bool> commutes;       // set when a commuting projection is attached
  std::vector<std::string> issues;
};

GeneratorReport validate_generator(const Semigroup& s, double tol = 1e-12);

/// Times at which Qubit generators are checked by validate_generator.
inline const std::vector<double> kGeneratorSampleTimes = {0.01, 0.1, 1.0, 10.0};

/// Throws PreconditionError unless t is a non-negative integer (within 1e-12).
unsigned long long integral_time(double t, const char* what);

}  // namespace dobrushin
