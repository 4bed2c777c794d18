#include "dobrushin/semigroup.hpp"

#include <cmath>
#include <sstream>

#include "dobrushin/linalg.hpp"

namespace dobrushin {

unsigned long long integral_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw PreconditionError(std::string(what) + ": time must be finite and >= 0");
  }
  const double rounded = std::round(t);
  if (std::abs(t - rounded) > 1e-12) {
    throw PreconditionError(std::string(what) + ": discrete semigroups need integral times");
  }
  return static_cast<unsigned long long>(rounded);
}

Semigroup Semigroup::continuous(const StateSpace& space, Matrix generator,
                                std::optional<MarkovProjection> p) {
  if (generator.rows() != space.dim() || generator.cols() != space.dim()) {
    throw DimensionError("generator shape does not match " + space.describe());
  }
  if (!generator.allFinite()) {
    throw PreconditionError("generator has non-finite entries");
  }
  if (p && !(p->space() == space)) {
    throw DimensionError("commuting projection lives on a different space");
  }
  return Semigroup(space, SemigroupKind::Continuous, std::move(generator), std::move(p));
}

Semigroup Semigroup::discrete(MarkovOperator step, std::optional<MarkovProjection> p) {
  if (p && !(p->space() == step.space())) {
    throw DimensionError("commuting projection lives on a different space");
  }
  const StateSpace space = step.space();
  return Semigroup(space, SemigroupKind::Discrete, step.matrix(), std::move(p));
}

Semigroup Semigroup::with_projection(std::optional<MarkovProjection> p) const {
  if (p && !(p->space() == space_)) {
    throw DimensionError("commuting projection lives on a different space");
  }
  return Semigroup(space_, kind_, matrix_, std::move(p));
}

MarkovOperator Semigroup::evaluate(double t) const {
  if (is_discrete()) {
    return MarkovOperator(space_, linalg::matrix_power(matrix_, integral_time(t, "evaluate")));
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw PreconditionError("evaluate: time must be finite and >= 0");
  }
  if (t == 0.0) return MarkovOperator::identity(space_);
  return MarkovOperator(space_, linalg::expm(t * matrix_));
}

MarkovOperator Semigroup::cesaro(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw PreconditionError("cesaro: time must be finite and > 0");
  }
  if (is_discrete()) {
    const unsigned long long n = integral_time(t, "cesaro");
    if (n < 1) throw PreconditionError("cesaro: discrete average needs n >= 1");
    // Sum first, divide once: integer-valued steps stay exact until the division.
    Matrix power = matrix_;
    Matrix sum = matrix_;
    for (unsigned long long k = 2; k <= n; ++k) {
      power = power * matrix_;
      sum += power;
    }
    return MarkovOperator(space_, sum / static_cast<double>(n));
  }
  const linalg::ExpIntegral ei = linalg::expm_with_integral(matrix_, t);
  return MarkovOperator(space_, ei.integral / t);
}

std::string Semigroup::describe() const {
  std::ostringstream os;
  os << (is_continuous() ? "continuous" : "discrete") << " semigroup on " << space_.describe();
  return os.str();
}

GeneratorReport validate_generator(const Semigroup& s, double tol) {
  GeneratorReport r;
  const Matrix& m = s.matrix();
  const Eigen::Index n = m.rows();
  if (s.is_continuous() && s.space().is_classical()) {
    bool ok = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j && m(i, j) < -tol) {
          ok = false;
          std::ostringstream os;
          os << "negative off-diagonal rate A(" << i << "," << j << ") = " << m(i, j);
          r.issues.push_back(os.str());
        }
      }
      const double col = m.col(j).sum();
      if (std::abs(col) > tol * std::max<double>(1.0, m.col(j).cwiseAbs().sum())) {
        ok = false;
        std::ostringstream os;
        os << "column " << j << " sums to " << col << ", expected 0";
        r.issues.push_back(os.str());
      }
    }
    r.rate_matrix = ok;
    r.sampled_markov = ok;
  } else if (s.is_continuous()) {
    bool ok = true;
    for (double t : kGeneratorSampleTimes) {
      const MarkovReport mr = validate_markov(s.evaluate(t), kDefaultTol);
      if (!mr.is_markov()) {
        ok = false;
        r.issues.push_back("exp(tA) is not Markov at t = " + std::to_string(t));
      }
    }
    r.rate_matrix = false;
    r.sampled_markov = ok;
  } else {
    const MarkovReport mr = validate_markov(MarkovOperator(s.space(), m), kDefaultTol);
    r.sampled_markov = mr.is_markov();
    if (!r.sampled_markov) r.issues.push_back("step operator is not Markov");
  }
  bool commuting_ok = true;
  if (s.commuting_projection()) {
    const double gap = commutator_gap(m, s.commuting_projection()->matrix());
    r.commutes = gap <= std::max(tol, 1e-12);
    if (!*r.commutes) {
      commuting_ok = false;
      r.issues.push_back("generator does not commute with the attached projection (gap " +
                         std::to_string(gap) + ")");
    }
  }
  const bool markov_ok = s.space().is_classical() && s.is_continuous() ? r.rate_matrix
                                                                       : r.sampled_markov;
  r.passed = markov_ok && commuting_ok;
  return r;
}

}  // namespace dobrushin
