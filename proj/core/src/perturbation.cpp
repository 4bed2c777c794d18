#include "dobrushin/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "dobrushin/linalg.hpp"

namespace dobrushin {

namespace {

void require_continuous(const Semigroup& s, const char* what) {
  if (!s.is_continuous()) {
    throw PreconditionError(std::string(what) + ": needs a continuous semigroup");
  }
}

void check_invariant(const Semigroup& s, const MarkovProjection& p, const char* what) {
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const Matrix tt = s.evaluate(t).matrix();
    if (invariance_gap(tt, p.matrix()) > 1e-9 || commutator_gap(tt, p.matrix()) > 1e-9) {
      std::ostringstream os;
      os << what << ": T_t P = P T_t = P fails at t = " << t;
      throw PreconditionError(os.str());
    }
  }
}

// Barycentric interpolation on Chebyshev-Lobatto nodes of [0, t].
class ChebyshevGrid {
 public:
  ChebyshevGrid(double t, int m) : nodes_(m + 1), weights_(m + 1) {
    for (int j = 0; j <= m; ++j) {
      nodes_[j] = 0.5 * t * (1.0 - std::cos(std::numbers::pi * j / m));
      weights_[j] = (j % 2 == 0 ? 1.0 : -1.0) * (j == 0 || j == m ? 0.5 : 1.0);
    }
  }

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t j) const { return nodes_[j]; }

  Matrix interpolate(const std::vector<Matrix>& values, double u) const {
    double den = 0.0;
    Matrix num = Matrix::Zero(values[0].rows(), values[0].cols());
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      const double d = u - nodes_[j];
      if (d == 0.0) return values[j];
      const double c = weights_[j] / d;
      num += c * values[j];
      den += c;
    }
    return num / den;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

constexpr int kChebyshevDegree = 48;
constexpr int kMaxQuadratureOrder = 256;

}  // namespace

PerturbedSemigroup perturb(const Semigroup& s, const MarkovOperator& q, double lambda) {
  require_continuous(s, "perturb");
  if (!(q.space() == s.space())) {
    throw DimensionError("perturb: Q lives on a different space");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw PreconditionError("perturb: lambda must be finite and > 0");
  }
  if (!validate_markov(q).is_markov()) {
    throw PreconditionError("perturb: Q is not a Markov operator");
  }
  const Eigen::Index n = s.space().dim();
  Matrix gen = s.matrix() + lambda * (q.matrix() - Matrix::Identity(n, n));
  std::optional<MarkovProjection> p;
  if (s.commuting_projection() &&
      commutator_gap(q.matrix(), s.commuting_projection()->matrix()) <= 1e-12) {
    p = s.commuting_projection();
  }
  Semigroup perturbed = Semigroup::continuous(s.space(), std::move(gen), std::move(p));
  return PerturbedSemigroup(s, q, lambda, std::move(perturbed));
}

std::vector<Matrix> dyson_terms(const Semigroup& s, const MarkovOperator& q, double t, int k_max) {
  require_continuous(s, "dyson_terms");
  if (k_max < 0) throw PreconditionError("dyson_terms: K must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("dyson_terms: t must be >= 0");
  const Eigen::Index n = s.space().dim();
  const Matrix& a = s.matrix();
  std::vector<Matrix> out;
  if (t == 0.0) {
    out.push_back(Matrix::Identity(n, n));
    for (int k = 1; k <= k_max; ++k) out.push_back(Matrix::Zero(n, n));
    return out;
  }

  const ChebyshevGrid grid(t, kChebyshevDegree);
  std::vector<Matrix> level(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) level[j] = linalg::expm(grid.node(j) * a);
  out.push_back(level.back());

  std::vector<linalg::Quadrature> rules;
  for (int order = 8; order <= kMaxQuadratureOrder; order *= 2) {
    rules.push_back(linalg::gauss_legendre(order));
  }
  auto integrate = [&](const std::vector<Matrix>& prev, double upper,
                       const linalg::Quadrature& rule) {
    Matrix acc = Matrix::Zero(n, n);
    const double half = 0.5 * upper;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = half * (rule.nodes[i] + 1.0);
      acc += rule.weights[i] * (linalg::expm((upper - u) * a) * q.matrix() * grid.interpolate(prev, u));
    }
    return Matrix(half * acc);
  };

  for (int k = 1; k <= k_max; ++k) {
    std::vector<Matrix> next(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double upper = grid.node(j);
      if (upper == 0.0) {
        next[j] = Matrix::Zero(n, n);
        continue;
      }
      Matrix current = integrate(level, upper, rules[0]);
      for (std::size_t r = 1; r < rules.size(); ++r) {
        Matrix refined = integrate(level, upper, rules[r]);
        const double change = linalg::max_abs_diff(refined, current);
        current = std::move(refined);
        if (change <= kDysonQuadratureTol) break;
      }
      next[j] = std::move(current);
    }
    level = std::move(next);
    out.push_back(level.back());
  }
  return out;
}

double poisson_tail(double x, int k_max) {
  if (!(x >= 0.0)) throw PreconditionError("poisson_tail: x must be >= 0");
  if (x == 0.0) return 0.0;
  double sum = 0.0;
  for (int k = k_max + 1; k < k_max + 100000; ++k) {
    const double term = std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
    sum += term;
    if (k > x && term <= 1e-20 * sum) break;
    if (k > x && term < 1e-300) break;
  }
  return sum;
}

DysonResult dyson_eval(const Semigroup& s, const MarkovOperator& q, double lambda, double t,
                       int k_max) {
  const PerturbedSemigroup closed = perturb(s, q, lambda);
  const std::vector<Matrix> terms = dyson_terms(s, q, t, k_max);
  DysonResult r;
  Matrix sum = terms[0];
  double power = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    power *= lambda;
    sum += power * terms[k];
  }
  r.matrix = std::exp(-lambda * t) * sum;
  r.tail_bound = poisson_tail(lambda * t, k_max);
  r.quadrature_budget = k_max == 0 ? 1e-12 : 1e-9;
  r.closed_form_gap = induced_norm(s.space(), r.matrix - closed.evaluate(t).matrix());
  r.consistent = r.closed_form_gap <= r.tail_bound + r.quadrature_budget;
  return r;
}

namespace {

struct SupEstimate {
  double value = 0.0;
  double error = 0.0;
};

struct Sample {
  double value;
  double slope;   // |f'| <= slope + growth * h on [t, t + h]
  double growth;
  double global;  // |f'| <= global everywhere
};

// Supremum of f on [a, b]: on a cell the maximum is at most
// (f(a) + f(b))/2 + L (b - a)/2 with L the derivative bound from the left end;
// split the cell with the largest such bound.
template <class F>
SupEstimate lipschitz_sup(F&& f, double a, double b, double tol, double floor) {
  struct Cell {
    double a, b;
    Sample fa, fb;
    double ub;
    bool operator<(const Cell& o) const { return ub < o.ub; }
  };
  constexpr int kInitialCells = 8;
  constexpr long kMaxEvaluations = 4'000'000;
  auto bound = [](double xa, double xb, const Sample& fa, const Sample& fb) {
    const double h = xb - xa;
    return 0.5 * (fa.value + fb.value) + 0.5 * h * std::min(fa.global, fa.slope + fa.growth * h);
  };
  std::priority_queue<Cell> cells;
  double xa = a;
  Sample fa = f(a);
  double best = std::max(floor, fa.value);
  for (int i = 1; i <= kInitialCells; ++i) {
    const double xb = a + (b - a) * i / kInitialCells;
    const Sample fb = f(xb);
    best = std::max(best, fb.value);
    cells.push({xa, xb, fa, fb, bound(xa, xb, fa, fb)});
    xa = xb;
    fa = fb;
  }
  long evaluations = kInitialCells + 1;
  while (!cells.empty() && cells.top().ub - best > tol && evaluations < kMaxEvaluations) {
    const Cell c = cells.top();
    cells.pop();
    const double m = 0.5 * (c.a + c.b);
    const Sample fm = f(m);
    ++evaluations;
    best = std::max(best, fm.value);
    cells.push({c.a, m, c.fa, fm, bound(c.a, m, c.fa, fm)});
    cells.push({m, c.b, fm, c.fb, bound(m, c.b, fm, c.fb)});
  }
  SupEstimate out;
  out.value = best;
  out.error = cells.empty() ? 0.0 : std::max(0.0, cells.top().ub - best);
  return out;
}

void check_metric_operands(const Semigroup& s1, const Semigroup& s2, const char* what) {
  require_continuous(s1, what);
  require_continuous(s2, what);
  if (!(s1.space() == s2.space())) {
    throw DimensionError(std::string(what) + ": semigroups live on different spaces");
  }
}

// max(floor, sup over [a, b]); a positive floor lets cells below it go unrefined.
SupEstimate sup_distance(const Semigroup& s1, const Semigroup& s2, double a, double b,
                         double tol, double floor = 0.0) {
  const StateSpace& space = s1.space();
  const Matrix& g1 = s1.matrix();
  const Matrix& g2 = s2.matrix();
  const double global = induced_norm(space, g1) + induced_norm(space, g2);
  const double gap = induced_norm(space, g1 - g2);
  // With u = t - c: A T_t - B S_t = (A T_c - B S_c) T_u + B S_c (T_u - S_u),
  // T_u a contraction and |T_u - S_u| <= u |A - B|.
  auto f = [&](double t) {
    const Matrix e1 = linalg::expm(t * g1);
    const Matrix e2 = linalg::expm(t * g2);
    const Matrix d2 = g2 * e2;
    return Sample{induced_norm(space, e1 - e2), induced_norm(space, g1 * e1 - d2),
                  induced_norm(space, d2) * gap, global};
  };
  return lipschitz_sup(f, a, b, tol, floor);
}

}  // namespace

MetricValue rho_r(const Semigroup& s1, const Semigroup& s2, double r, double tol) {
  check_metric_operands(s1, s2, "rho_r");
  if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("rho_r: r must be finite and > 0");
  if (!(tol > 0.0)) throw PreconditionError("rho_r: tol must be > 0");
  const SupEstimate e = sup_distance(s1, s2, 0.0, r, tol);
  return {e.value, e.error, r};
}

MetricValue rho_full(const Semigroup& s1, const Semigroup& s2, int m_max, double tol) {
  check_metric_operands(s1, s2, "rho_full");
  if (m_max < 1) throw PreconditionError("rho_full: M must be >= 1");
  MetricValue out;
  out.parameter = m_max;
  double running = 0.0;
  double running_error = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const SupEstimate e = sup_distance(s1, s2, m - 1.0, static_cast<double>(m), tol, running);
    running = e.value;
    running_error = std::max(running_error, e.error);
    const double w = std::ldexp(1.0, -m);
    out.value += w * running / (1.0 + running);
    out.certified_error += w * running_error;
  }
  out.certified_error += std::ldexp(1.0, -m_max);
  return out;
}

double ergodize_lambda(double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("ergodize: epsilon must be > 0");
  if (epsilon >= 2.0) return 10.0;
  return -std::log(1.0 - epsilon / 2.0) * (1.0 - 1e-6);
}

ErgodizeResult ergodize(const Semigroup& s, const MarkovProjection& p, double epsilon,
                        std::vector<double> t_grid) {
  require_continuous(s, "ergodize");
  if (!(s.space() == p.space())) {
    throw DimensionError("ergodize: semigroup and projection live on different spaces");
  }
  const double lambda = ergodize_lambda(epsilon);
  check_invariant(s, p, "ergodize");

  PerturbedSemigroup perturbed = perturb(s.with_projection(p), p.op(), lambda);
  const CertifyOutcome outcome = certify_uniform(perturbed.semigroup(), p, std::move(t_grid));
  if (!outcome.certified()) {
    throw Error("ergodize: perturbed semigroup did not certify (" + outcome.reason + ")");
  }
  ErgodicityCertificate cert = *outcome.certificate;
  cert.lambda = lambda;
  cert.epsilon = epsilon;

  const MetricValue closeness = rho_r(s, perturbed.semigroup(), 1.0, 1e-7);
  const double apriori = std::exp(-lambda * cert.t0);
  return ErgodizeResult{std::move(perturbed),
                        lambda,
                        epsilon,
                        closeness,
                        closeness.value + closeness.certified_error < epsilon,
                        apriori,
                        cert.q <= apriori + 1e-9,
                        std::move(cert)};
}

OpennessRadius openness_radius(const ErgodicityCertificate& cert) {
  if (cert.mode != CertificateMode::Uniform) {
    throw PreconditionError("openness_radius needs a uniform certificate");
  }
  OpennessRadius r;
  r.N = static_cast<int>(std::floor(cert.t0)) + 1;
  r.radius = (1.0 - cert.q) / (2.0 * r.N);
  return r;
}

NeighborProbe probe_neighbor(const Semigroup& s, const MarkovProjection& p,
                             const ErgodicityCertificate& cert, const Matrix& b,
                             double fraction) {
  require_continuous(s, "probe_neighbor");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw PreconditionError("probe_neighbor: fraction must lie in (0, 1)");
  }
  const OpennessRadius open = openness_radius(cert);
  const MarkovOperator q(s.space(), linalg::expm(b));
  if (invariance_gap(q.matrix(), p.matrix()) > 1e-9 || commutator_gap(q.matrix(), p.matrix()) > 1e-9) {
    throw PreconditionError("probe_neighbor: exp(B) must satisfy exp(B) P = P exp(B) = P");
  }
  const double target = fraction * open.radius;
  const double loose = 1e-3 * open.radius;
  auto distance = [&](double mu) {
    return rho_r(s, perturb(s, q, mu).semigroup(), 1.0, loose).value;
  };

  double lo = 0.0;
  double hi = target;
  while (distance(hi) < target && hi < 1e6) {
    lo = hi;
    hi *= 2.0;
  }
  double mu = hi;
  for (int it = 0; it < 60; ++it) {
    mu = 0.5 * (lo + hi);
    const double d = distance(mu);
    if (std::abs(d - target) <= 0.02 * target) break;
    (d < target ? lo : hi) = mu;
  }

  NeighborProbe out;
  out.mu = mu;
  const PerturbedSemigroup neighbor = perturb(s, q, mu);
  out.distance = rho_r(s, neighbor.semigroup(), 1.0, std::min(1e-7, loose));
  out.inside = out.distance.value + out.distance.certified_error < open.radius;
  out.delta = delta_auto(neighbor.evaluate(cert.t0).matrix(), p);
  out.bound = 1.0 - (1.0 - cert.q) / 2.0;
  out.certified = out.delta.value() <= out.bound + 1e-9;
  return out;
}

}  // namespace dobrushin
