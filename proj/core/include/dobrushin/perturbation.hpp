#pragma once

#include <optional>
#include <vector>

#include "dobrushin/ergodicity.hpp"

namespace dobrushin {

/// Semigroup generated by A + lambda (Q - I) for a continuous base with
/// generator A and a Markov operator Q.
class PerturbedSemigroup {
 public:
  const Semigroup& base() const { return base_; }
  const MarkovOperator& q() const { return q_; }
  double lambda() const { return lambda_; }
  const Semigroup& semigroup() const { return perturbed_; }
  const Matrix& generator() const { return perturbed_.matrix(); }

  MarkovOperator evaluate(double t) const { return perturbed_.evaluate(t); }

 private:
  friend PerturbedSemigroup perturb(const Semigroup&, const MarkovOperator&, double);
  PerturbedSemigroup(Semigroup base, MarkovOperator q, double lambda, Semigroup perturbed)
      : base_(std::move(base)), q_(std::move(q)), lambda_(lambda), perturbed_(std::move(perturbed)) {}

  Semigroup base_;
  MarkovOperator q_;
  double lambda_;
  Semigroup perturbed_;
};

/// Closed form exp(t (A + lambda (Q - I))). The base's commuting projection
/// is carried over when Q commutes with it.
PerturbedSemigroup perturb(const Semigroup& s, const MarkovOperator& q, double lambda);

/// Dyson terms T^Q_k(t), k = 0..K, from T^Q_0(t) = T_t and
/// T^Q_{k+1}(t) = int_0^t T_{t-s} Q T^Q_k(s) ds.
std::vector<Matrix> dyson_terms(const Semigroup& s, const MarkovOperator& q, double t, int k_max);

struct DysonResult {
  Matrix matrix;              // exp(-lambda t) (T_t + sum_k lambda^k T^Q_k(t))
  double tail_bound = 0.0;    // exp(-lambda t) sum_{k > K} (lambda t)^k / k!
  double closed_form_gap = 0.0;
  double quadrature_budget = 0.0;
  bool consistent = false;    // gap <= tail_bound + quadrature_budget
};

/// Quadrature tolerance per recursion level.
inline constexpr double kDysonQuadratureTol = 1e-11;

DysonResult dyson_eval(const Semigroup& s, const MarkovOperator& q, double lambda, double t,
                       int k_max);

/// exp(-x) sum_{k > K} x^k / k!, summed term by term.
double poisson_tail(double x, int k_max);

struct MetricValue {
  double value = 0.0;
  double certified_error = 0.0;
  double parameter = 0.0;  // r for rho_r, M for rho_full
};

/// sup over t in [0, r] of |T_t - S_t|, by Lipschitz branch and bound with
/// L = |A_1| + |A_2|. The returned value is attained; the true supremum lies
/// within value + certified_error, certified_error <= tol.
MetricValue rho_r(const Semigroup& s1, const Semigroup& s2, double r, double tol = 1e-7);

/// sum_{m=1}^M 2^-m rho_m / (1 + rho_m); the error adds the 2^-M series tail.
MetricValue rho_full(const Semigroup& s1, const Semigroup& s2, int m_max, double tol = 1e-7);

struct ErgodizeResult {
  PerturbedSemigroup perturbed;
  double lambda = 0.0;
  double epsilon = 0.0;
  MetricValue closeness;      // rho_1(S, S')
  bool closeness_ok = false;  // value + error < epsilon
  double apriori_q = 1.0;     // exp(-lambda t0)
  bool apriori_ok = false;    // q <= exp(-lambda t0) + 1e-9
  ErgodicityCertificate certificate;
};

/// lambda used by ergodize: -ln(1 - eps/2) (1 - 1e-6), or 10 when eps >= 2.
double ergodize_lambda(double epsilon);

/// Perturbs S (T_t P = P T_t = P) by lambda (P - I) so that rho_1 stays below
/// epsilon, then certifies the result. Throws PreconditionError for discrete
/// input, failed invariance or when no certificate can be issued.
ErgodizeResult ergodize(const Semigroup& s, const MarkovProjection& p, double epsilon,
                        std::vector<double> t_grid = {});

struct OpennessRadius {
  double radius = 0.0;  // (1 - q) / (2N)
  int N = 1;            // floor(t0) + 1
};

OpennessRadius openness_radius(const ErgodicityCertificate& cert);

struct NeighborProbe {
  double mu = 0.0;
  MetricValue distance;    // rho_1(S, R)
  bool inside = false;     // distance.value + error < radius
  DeltaResult delta;       // delta_P(R_t0)
  double bound = 1.0;      // 1 - (1 - q)/2
  bool certified = false;  // delta <= bound + 1e-9
};

/// Builds R = perturb(S, exp(B), mu) with B a generator satisfying BP = PB = 0
/// and mu chosen by bisection so that rho_1(S, R) is close to
/// `fraction` * radius.
NeighborProbe probe_neighbor(const Semigroup& s, const MarkovProjection& p,
                             const ErgodicityCertificate& cert, const Matrix& b,
                             double fraction = 0.9);

}  // namespace dobrushin
